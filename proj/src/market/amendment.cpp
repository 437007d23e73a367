#include "agmarket/market/amendment.hpp"

#include <algorithm>
#include <cmath>

namespace agmarket::market {

namespace {

/// Splits `total` over `parts` in proportion to their current values; the
/// last part absorbs rounding so the result sums to `total` exactly.
std::vector<Money> proportional_split(const std::vector<Money>& parts, Money total) {
  std::int64_t whole = 0;
  for (auto p : parts) whole += p.cents();
  std::vector<Money> out(parts.size());
  std::int64_t assigned = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    std::int64_t share = 0;
    if (k + 1 == parts.size()) {
      share = total.cents() - assigned;
    } else if (whole > 0) {
      share = std::llround(static_cast<long double>(parts[k].cents()) * total.cents() / whole);
    }
    out[k] = Money::from_cents(share);
    assigned += share;
  }
  return out;
}

}  // namespace

void validate(const Amendment& amendment) {
  const int targets = int(amendment.target_cost.has_value()) +
                      int(amendment.target_delivery_time.has_value()) +
                      int(amendment.target_insurance.has_value());
  if (targets != 1) throw InvalidValue("an amendment changes exactly one feature");
  if (amendment.target_cost && *amendment.target_cost < Money{}) {
    throw InvalidValue("target_cost must be non-negative");
  }
  if (amendment.target_insurance &&
      (*amendment.target_insurance < 0 || *amendment.target_insurance > kMaxInsuranceLevel)) {
    throw InvalidValue("target_insurance must be in [0,5]");
  }
}

ConcessionPolicy ConcessionPolicy::from_fraction(double max_discount) {
  if (!std::isfinite(max_discount) || max_discount < 0.0 || max_discount > 1.0) {
    throw InvalidValue("max_discount must be in [0,1]");
  }
  return ConcessionPolicy{static_cast<int>(std::lround(max_discount * 10000.0))};
}

Money ConcessionPolicy::floor(Money base) const {
  const std::int64_t keep = 10000 - max_discount_bp;
  // Round up: the provider never goes below the discounted price.
  const std::int64_t scaled = base.cents() * keep;
  return Money::from_cents(scaled / 10000 + (scaled % 10000 > 0 ? 1 : 0));
}

bool accepts(const AmendmentShare& share, const ConcessionPolicy& policy) {
  if (share.target_cost) {
    return *share.target_cost >= share.current_cost ||
           *share.target_cost >= policy.floor(share.base_cost);
  }
  if (share.target_delivery_time) return *share.target_delivery_time >= share.current_delivery_time;
  if (share.target_insurance) return *share.target_insurance <= share.current_insurance;
  return false;
}

std::vector<AmendmentShare> split_amendment(const Proposal& proposal, const Amendment& amendment) {
  validate(amendment);
  const auto& itinerary = proposal.itinerary;
  if (proposal.offered_leg_costs.size() != itinerary.legs.size()) {
    throw InvalidValue("proposal is missing offered leg costs");
  }

  std::vector<AmendmentShare> shares;
  for (const auto& provider : itinerary.providers()) {
    AmendmentShare share;
    share.provider = provider;
    for (std::size_t k = 0; k < itinerary.legs.size(); ++k) {
      const auto& leg = itinerary.legs[k];
      if (leg.provider != provider) continue;
      share.leg_ids.push_back(leg.leg_id);
      share.base_cost += proposal.offered_leg_costs[k];
      share.current_cost += leg.cost;
    }
    share.current_delivery_time = itinerary.delivery_time;
    share.current_insurance = itinerary.min_insurance;
    share.target_delivery_time = amendment.target_delivery_time;
    share.target_insurance = amendment.target_insurance;
    shares.push_back(std::move(share));
  }

  if (amendment.target_cost) {
    std::vector<Money> current;
    for (const auto& s : shares) current.push_back(s.current_cost);
    const auto targets = proportional_split(current, *amendment.target_cost);
    for (std::size_t k = 0; k < shares.size(); ++k) shares[k].target_cost = targets[k];
  }
  return shares;
}

AmendmentOutcome apply_amendment(const Proposal& proposal, const Amendment& amendment,
                                 const ShareDecision& decide) {
  if (is_decided(proposal.status)) {
    throw AlreadyDecided("proposal " + proposal.itinerary.itinerary_id + " is already " +
                         std::string(to_string(proposal.status)));
  }
  AmendmentOutcome outcome;
  outcome.proposal = proposal;
  outcome.shares = split_amendment(proposal, amendment);

  bool all_accept = true;
  for (const auto& share : outcome.shares) all_accept = decide(share) && all_accept;
  if (!all_accept) {
    outcome.verdict = AmendmentOutcome::Verdict::Rejected;
    return outcome;
  }

  outcome.verdict = AmendmentOutcome::Verdict::Accepted;
  auto& updated = outcome.proposal;
  const auto& itinerary = proposal.itinerary;
  if (amendment.target_cost && *amendment.target_cost < itinerary.total_cost) {
    std::vector<RouteLeg> legs = itinerary.legs;
    for (const auto& share : outcome.shares) {
      std::vector<std::size_t> idx;
      std::vector<Money> current;
      for (std::size_t k = 0; k < legs.size(); ++k) {
        if (legs[k].provider == share.provider) {
          idx.push_back(k);
          current.push_back(legs[k].cost);
        }
      }
      const auto costs = proportional_split(current, *share.target_cost);
      for (std::size_t n = 0; n < idx.size(); ++n) legs[idx[n]].cost = costs[n];
    }
    auto rebuilt = Itinerary::from_legs(std::move(legs));
    rebuilt.itinerary_id = itinerary.itinerary_id;
    updated.itinerary = std::move(rebuilt);
  }
  updated.transition_to(ProposalStatus::Amended);
  return outcome;
}

AmendmentOutcome apply_amendment(const Proposal& proposal, const Amendment& amendment,
                                 const std::map<std::string, ConcessionPolicy>& policies,
                                 const ConcessionPolicy& fallback) {
  return apply_amendment(proposal, amendment, [&](const AmendmentShare& share) {
    auto it = policies.find(share.provider.name);
    return accepts(share, it == policies.end() ? fallback : it->second);
  });
}

}  // namespace agmarket::market
