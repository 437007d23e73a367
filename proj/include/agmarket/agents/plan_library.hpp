#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "agmarket/kernel/fsm.hpp"
#include "agmarket/model/organization.hpp"

namespace agmarket::agents {

class NoPlan : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

using SpecPtr = std::shared_ptr<const kernel::FsmSpec>;

/// Goal name -> plan. Continue goals map to the plan that consumes them,
/// so the library is total over the role's perception table.
class PlanLibrary {
 public:
  void add(const std::string& goal, SpecPtr spec);
  /// Throws NoPlan.
  SpecPtr retrieve(const std::string& goal) const;
  bool contains(const std::string& goal) const { return entries_.contains(goal); }
  const std::map<std::string, SpecPtr>& entries() const { return entries_; }
  /// Every plan's transition listing, one block per distinct plan.
  std::string describe() const;

 private:
  std::map<std::string, SpecPtr> entries_;
};

// Broker
SpecPtr evaluate_customer_requirements_spec();
SpecPtr handle_selection_spec();
SpecPtr handle_amendment_spec();
SpecPtr rerank_proposals_spec();
SpecPtr update_network_cache_spec();
// Provider
SpecPtr answer_call_for_proposals_spec();
SpecPtr treat_reservation_request_spec();
SpecPtr answer_amendment_spec();
// Customer
SpecPtr itinerary_be_decided_spec();
// Shared
SpecPtr record_notice_spec();

PlanLibrary broker_library();
PlanLibrary provider_library();
PlanLibrary customer_library();
PlanLibrary library_for(model::Role role);

}  // namespace agmarket::agents
