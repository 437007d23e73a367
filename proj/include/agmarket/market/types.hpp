#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "agmarket/kernel/agent_id.hpp"
#include "agmarket/market/money.hpp"

namespace agmarket::market {

/// Integer minutes from the scenario epoch.
using Minutes = std::int64_t;
using CargoUnits = std::int64_t;
using Location = std::string;

inline constexpr int kMaxInsuranceLevel = 5;

/// Raised when a domain value violates one of its invariants.
class InvalidValue : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A provider's atomic transport offering. `capacity` is the remaining
/// capacity at the time the leg was observed.
struct RouteLeg {
  std::string leg_id;
  AgentId provider;
  Location origin;
  Location destination;
  Minutes depart = 0;
  Minutes arrive = 0;
  Money cost;
  CargoUnits capacity = 0;
  int insurance_level = 0;

  friend bool operator==(const RouteLeg&, const RouteLeg&) = default;
};

/// Throws InvalidValue on the first broken invariant.
void validate(const RouteLeg& leg);

struct HardConstraints {
  std::optional<Money> max_cost;
  std::optional<int> min_insurance;
  std::optional<int> max_legs;

  friend bool operator==(const HardConstraints&, const HardConstraints&) = default;
};

/// Soft-criterion weights. Raw weights are kept as given; scoring always
/// goes through normalized().
class CriteriaProfile {
 public:
  struct Normalized {
    double cost;
    double time;
    double insurance;
  };

  CriteriaProfile() : CriteriaProfile(1.0, 1.0, 1.0) {}
  /// Throws InvalidValue when a weight is negative or non-finite, or all
  /// weights are zero.
  CriteriaProfile(double cost, double time, double insurance);

  double cost() const { return cost_; }
  double time() const { return time_; }
  double insurance() const { return insurance_; }
  Normalized normalized() const;

  friend bool operator==(const CriteriaProfile&, const CriteriaProfile&) = default;

 private:
  double cost_;
  double time_;
  double insurance_;
};

struct TransportRequest {
  std::string request_id;
  AgentId customer;
  Location origin;
  Location destination;
  CargoUnits cargo_size = 0;
  Minutes earliest_pickup = 0;
  Minutes latest_delivery = 0;
  HardConstraints constraints;
  CriteriaProfile weights;

  friend bool operator==(const TransportRequest&, const TransportRequest&) = default;
};

/// Returns the first violated invariant, or nothing when the request is
/// well formed.
std::optional<std::string> check(const TransportRequest& request);

/// Ordered chain of legs covering a request.
struct Itinerary {
  std::string itinerary_id;
  std::vector<RouteLeg> legs;
  Money total_cost;
  Minutes delivery_time = 0;
  int min_insurance = 0;

  /// Builds the derived fields from the legs. Throws InvalidValue on an
  /// empty leg list or broken leg chaining.
  static Itinerary from_legs(std::vector<RouteLeg> legs, Minutes transfer_slack = 0);

  /// First depart time.
  Minutes pickup_time() const { return legs.front().depart; }
  /// Distinct providers in order of first appearance.
  std::vector<AgentId> providers() const;

  friend bool operator==(const Itinerary&, const Itinerary&) = default;
};

/// Deterministic digest of the ordered leg ids ("it-" + 16 hex digits).
std::string itinerary_id_for(std::span<const RouteLeg> legs);

enum class ProposalStatus { Offered, Amended, Selected, Confirmed, Failed };

std::string_view to_string(ProposalStatus status);
std::optional<ProposalStatus> proposal_status_from_string(std::string_view text);

/// Offered->Amended*->Selected->{Confirmed|Failed}
bool can_transition(ProposalStatus from, ProposalStatus to);
bool is_decided(ProposalStatus status);

class InvalidStatusTransition : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Breakdown {
  double cost = 0.0;
  double time = 0.0;
  double insurance = 0.0;

  friend bool operator==(const Breakdown&, const Breakdown&) = default;
};

struct Proposal {
  Itinerary itinerary;
  double score = 0.0;
  Breakdown breakdown;
  ProposalStatus status = ProposalStatus::Offered;
  /// Leg costs as first offered, parallel to itinerary.legs. Concession
  /// floors are computed from these.
  std::vector<Money> offered_leg_costs;

  /// Throws InvalidStatusTransition outside the status machine.
  void transition_to(ProposalStatus next);

  friend bool operator==(const Proposal&, const Proposal&) = default;
};

}  // namespace agmarket::market
