#include "agmarket/market/composition.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace agmarket::market {

namespace {

class PathSearch {
 public:
  PathSearch(const TransportRequest& request, std::span<const RouteLeg> legs, int max_legs,
             Minutes slack)
      : request_(request), max_legs_(max_legs), slack_(slack) {
    for (const auto& leg : legs) {
      if (leg.capacity < request.cargo_size) continue;
      if (leg.depart < request.earliest_pickup || leg.arrive > request.latest_delivery) continue;
      by_origin_[leg.origin].push_back(&leg);
    }
    for (auto& [origin, out] : by_origin_) {
      std::sort(out.begin(), out.end(), [](const RouteLeg* a, const RouteLeg* b) {
        return std::tie(a->depart, a->leg_id) < std::tie(b->depart, b->leg_id);
      });
    }
  }

  std::vector<Itinerary> run() {
    visited_.insert(request_.origin);
    extend(request_.origin, std::nullopt);
    return std::move(found_);
  }

 private:
  void extend(const Location& at, std::optional<Minutes> ready_at) {
    auto it = by_origin_.find(at);
    if (it == by_origin_.end()) return;
    const auto& constraints = request_.constraints;
    for (const RouteLeg* leg : it->second) {
      if (ready_at && leg->depart < *ready_at) continue;
      if (visited_.contains(leg->destination)) continue;
      if (constraints.min_insurance && leg->insurance_level < *constraints.min_insurance) continue;
      const Money cost = cost_ + leg->cost;
      if (constraints.max_cost && cost > *constraints.max_cost) continue;

      path_.push_back(*leg);
      const Money saved_cost = cost_;
      cost_ = cost;
      if (leg->destination == request_.destination) {
        found_.push_back(Itinerary::from_legs(path_, slack_));
      } else if (static_cast<int>(path_.size()) < max_legs_) {
        visited_.insert(leg->destination);
        extend(leg->destination, leg->arrive + slack_);
        visited_.erase(leg->destination);
      }
      cost_ = saved_cost;
      path_.pop_back();
    }
  }

  const TransportRequest& request_;
  int max_legs_;
  Minutes slack_;
  std::map<Location, std::vector<const RouteLeg*>> by_origin_;
  std::set<Location> visited_;
  std::vector<RouteLeg> path_;
  Money cost_;
  std::vector<Itinerary> found_;
};

}  // namespace

bool satisfies_constraints(const Itinerary& itinerary, const HardConstraints& constraints) {
  if (constraints.max_cost && itinerary.total_cost > *constraints.max_cost) return false;
  if (constraints.min_insurance && itinerary.min_insurance < *constraints.min_insurance) {
    return false;
  }
  if (constraints.max_legs && static_cast<int>(itinerary.legs.size()) > *constraints.max_legs) {
    return false;
  }
  return true;
}

CompositionResult compose_itineraries(const TransportRequest& request,
                                      std::span<const RouteLeg> legs, std::size_t k,
                                      const CompositionLimits& limits) {
  if (k < 1) throw InvalidValue("k must be at least 1");
  if (auto problem = check(request)) throw InvalidValue(*problem);

  int max_legs = limits.max_legs;
  if (request.constraints.max_legs) max_legs = std::min(max_legs, *request.constraints.max_legs);

  CompositionResult result;
  if (max_legs < 1) return result;

  auto found = PathSearch(request, legs, max_legs, limits.transfer_slack).run();
  std::sort(found.begin(), found.end(), [](const Itinerary& a, const Itinerary& b) {
    return std::tie(a.total_cost, a.itinerary_id) < std::tie(b.total_cost, b.itinerary_id);
  });
  found.erase(std::unique(found.begin(), found.end(),
                          [](const Itinerary& a, const Itinerary& b) {
                            return a.itinerary_id == b.itinerary_id;
                          }),
              found.end());
  if (found.size() > k) found.resize(k);
  result.itineraries = std::move(found);
  return result;
}

}  // namespace agmarket::market
