#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "agmarket/market/types.hpp"

namespace agmarket::market {

class UnknownLeg : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class UnknownReservation : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct Reservation {
  std::string reservation_id;
  std::string leg_id;
  CargoUnits units = 0;

  friend bool operator==(const Reservation&, const Reservation&) = default;
};

struct ReservationResult {
  enum class Status { Confirmed, Refused };
  Status status = Status::Refused;
  std::string reservation_id;
  std::string leg_id;
  CargoUnits remaining = 0;

  bool confirmed() const { return status == Status::Confirmed; }
};

struct AddLeg {
  RouteLeg leg;
};
struct RemoveLeg {
  std::string leg_id;
};
/// Capacity change driven by a reservation: a negative delta reserves
/// -delta units under `reservation_id`, a positive delta releases it.
struct CapacityDelta {
  std::string leg_id;
  std::string reservation_id;
  CargoUnits delta = 0;
};
using PlanChange = std::variant<AddLeg, RemoveLeg, CapacityDelta>;

/// A provider's itinerary plan: its legs with remaining capacity and the
/// reservations held against them.
///
/// Invariant per leg: initial_capacity == remaining + sum of active
/// reservation units.
class ProviderPlan {
 public:
  ProviderPlan() = default;
  /// Plan construction. Throws InvalidValue on a malformed or duplicate leg.
  ProviderPlan(AgentId provider, std::vector<RouteLeg> legs);

  const AgentId& provider() const { return provider_; }

  /// Legs in insertion order; `capacity` is the remaining capacity.
  std::vector<RouteLeg> legs() const;
  const RouteLeg& leg(const std::string& leg_id) const;
  bool has_leg(const std::string& leg_id) const { return legs_.contains(leg_id); }

  CargoUnits initial_capacity(const std::string& leg_id) const;
  CargoUnits reserved_units(const std::string& leg_id) const;
  const std::map<std::string, Reservation>& reservations() const { return reservations_; }

  /// Idempotent on reservation_id. Throws UnknownLeg, or InvalidValue when
  /// units <= 0 or the id is already held on another leg.
  ReservationResult reserve_leg(const std::string& leg_id, CargoUnits units,
                                const std::string& reservation_id);
  /// Throws UnknownReservation.
  void release_reservation(const std::string& reservation_id);

  /// Throws UnknownLeg for removals and deltas on absent legs.
  void apply(const PlanChange& change);

  friend bool operator==(const ProviderPlan&, const ProviderPlan&) = default;

 private:
  struct LegState {
    RouteLeg leg;
    CargoUnits initial_capacity = 0;
    std::size_t position = 0;

    friend bool operator==(const LegState&, const LegState&) = default;
  };

  AgentId provider_;
  std::map<std::string, LegState> legs_;
  std::map<std::string, Reservation> reservations_;
  std::size_t next_position_ = 0;
};

/// Plan updating as a value transformation.
ProviderPlan update_itinerary_plan(ProviderPlan plan, const PlanChange& change);

}  // namespace agmarket::market
