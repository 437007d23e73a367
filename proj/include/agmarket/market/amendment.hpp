#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "agmarket/market/types.hpp"

namespace agmarket::market {

/// Customer-requested change to one feature of a proposal. Exactly one
/// target is set.
struct Amendment {
  std::string request_id;
  std::string itinerary_id;
  std::optional<Money> target_cost;
  std::optional<Minutes> target_delivery_time;
  std::optional<int> target_insurance;

  friend bool operator==(const Amendment&, const Amendment&) = default;
};

/// Throws InvalidValue unless exactly one target is present.
void validate(const Amendment& amendment);

/// Provider-side concession rule: cost may drop to
/// base_cost * (1 - max_discount); time and insurance are never conceded.
struct ConcessionPolicy {
  /// Basis points (1000 = 10%).
  int max_discount_bp = 1000;

  static ConcessionPolicy from_fraction(double max_discount);
  /// Lowest acceptable price for legs whose offered cost is `base`.
  Money floor(Money base) const;
};

/// The part of an amendment that concerns a single provider's legs.
struct AmendmentShare {
  AgentId provider;
  std::vector<std::string> leg_ids;
  Money base_cost;
  Money current_cost;
  std::optional<Money> target_cost;
  Minutes current_delivery_time = 0;
  std::optional<Minutes> target_delivery_time;
  int current_insurance = 0;
  std::optional<int> target_insurance;

  friend bool operator==(const AmendmentShare&, const AmendmentShare&) = default;
};

bool accepts(const AmendmentShare& share, const ConcessionPolicy& policy);

/// Splits an amendment into one share per provider (first-appearance order).
/// A cost target is divided in proportion to each provider's current cost;
/// rounding residue goes to the last provider so the shares sum to the target.
std::vector<AmendmentShare> split_amendment(const Proposal& proposal, const Amendment& amendment);

class AlreadyDecided : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct AmendmentOutcome {
  enum class Verdict { Accepted, Rejected };
  Verdict verdict = Verdict::Rejected;
  /// Updated (status Amended) when accepted, unchanged when rejected.
  Proposal proposal;
  std::vector<AmendmentShare> shares;

  bool accepted() const { return verdict == Verdict::Accepted; }
};

using ShareDecision = std::function<bool(const AmendmentShare&)>;

/// One counter round: every affected provider decides on its share. All
/// must accept for the amendment to be applied. Scores are left for the
/// caller to recompute over the pool.
/// Throws AlreadyDecided for Selected/Confirmed/Failed proposals.
AmendmentOutcome apply_amendment(const Proposal& proposal, const Amendment& amendment,
                                 const ShareDecision& decide);

/// Convenience overload that decides with per-provider concession policies
/// (keyed by provider name, falling back to `fallback`).
AmendmentOutcome apply_amendment(const Proposal& proposal, const Amendment& amendment,
                                 const std::map<std::string, ConcessionPolicy>& policies,
                                 const ConcessionPolicy& fallback = {});

}  // namespace agmarket::market
