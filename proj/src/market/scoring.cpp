#include "agmarket/market/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace agmarket::market {

namespace {

struct Range {
  double lo;
  double hi;
};

template <typename Key>
Range range_of(std::span<const Itinerary> pool, Key key) {
  Range r{key(pool.front()), key(pool.front())};
  for (const auto& it : pool) {
    r.lo = std::min(r.lo, key(it));
    r.hi = std::max(r.hi, key(it));
  }
  return r;
}

double lower_is_better(double value, Range r) {
  return r.hi == r.lo ? 1.0 : (r.hi - value) / (r.hi - r.lo);
}

double higher_is_better(double value, Range r) {
  return r.hi == r.lo ? 1.0 : (value - r.lo) / (r.hi - r.lo);
}

double cost_of(const Itinerary& it) { return static_cast<double>(it.total_cost.cents()); }
double time_of(const Itinerary& it) { return static_cast<double>(it.delivery_time); }
double insurance_of(const Itinerary& it) { return static_cast<double>(it.min_insurance); }

struct PoolRanges {
  Range cost;
  Range time;
  Range insurance;

  explicit PoolRanges(std::span<const Itinerary> pool)
      : cost(range_of(pool, cost_of)),
        time(range_of(pool, time_of)),
        insurance(range_of(pool, insurance_of)) {}
};

Proposal score_with(const Itinerary& itinerary, const PoolRanges& ranges,
                    const CriteriaProfile::Normalized& w) {
  Proposal p;
  p.itinerary = itinerary;
  p.breakdown.cost = lower_is_better(cost_of(itinerary), ranges.cost);
  p.breakdown.time = lower_is_better(time_of(itinerary), ranges.time);
  p.breakdown.insurance = higher_is_better(insurance_of(itinerary), ranges.insurance);
  const double score = w.cost * p.breakdown.cost + w.time * p.breakdown.time +
                       w.insurance * p.breakdown.insurance;
  p.score = std::clamp(score, 0.0, 1.0);
  for (const auto& leg : itinerary.legs) p.offered_leg_costs.push_back(leg.cost);
  return p;
}

}  // namespace

Proposal score_itinerary(const Itinerary& itinerary, std::span<const Itinerary> pool,
                         const CriteriaProfile& weights) {
  const bool member = std::any_of(pool.begin(), pool.end(), [&](const Itinerary& other) {
    return other.itinerary_id == itinerary.itinerary_id;
  });
  if (!member) throw std::invalid_argument("itinerary is not part of the scoring pool");
  return score_with(itinerary, PoolRanges(pool), weights.normalized());
}

bool ranks_before(const Proposal& a, const Proposal& b) {
  if (std::abs(a.score - b.score) > kScoreTolerance) return a.score > b.score;
  if (a.itinerary.total_cost != b.itinerary.total_cost) {
    return a.itinerary.total_cost < b.itinerary.total_cost;
  }
  return a.itinerary.itinerary_id < b.itinerary.itinerary_id;
}

std::vector<Proposal> rank_proposals(std::span<const Itinerary> pool,
                                     const CriteriaProfile& weights) {
  if (pool.empty()) throw std::invalid_argument("cannot rank an empty pool");
  const PoolRanges ranges(pool);
  const auto w = weights.normalized();
  std::vector<Proposal> out;
  out.reserve(pool.size());
  for (const auto& it : pool) out.push_back(score_with(it, ranges, w));
  std::stable_sort(out.begin(), out.end(), ranks_before);
  return out;
}

}  // namespace agmarket::market
