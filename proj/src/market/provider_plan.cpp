#include "agmarket/market/provider_plan.hpp"

#include <algorithm>

namespace agmarket::market {

ProviderPlan::ProviderPlan(AgentId provider, std::vector<RouteLeg> legs)
    : provider_(std::move(provider)) {
  for (auto& leg : legs) apply(AddLeg{std::move(leg)});
}

std::vector<RouteLeg> ProviderPlan::legs() const {
  std::vector<const LegState*> ordered;
  for (const auto& [id, state] : legs_) ordered.push_back(&state);
  std::sort(ordered.begin(), ordered.end(),
            [](const LegState* a, const LegState* b) { return a->position < b->position; });
  std::vector<RouteLeg> out;
  out.reserve(ordered.size());
  for (const auto* s : ordered) out.push_back(s->leg);
  return out;
}

const RouteLeg& ProviderPlan::leg(const std::string& leg_id) const {
  auto it = legs_.find(leg_id);
  if (it == legs_.end()) throw UnknownLeg("unknown leg " + leg_id);
  return it->second.leg;
}

CargoUnits ProviderPlan::initial_capacity(const std::string& leg_id) const {
  auto it = legs_.find(leg_id);
  if (it == legs_.end()) throw UnknownLeg("unknown leg " + leg_id);
  return it->second.initial_capacity;
}

CargoUnits ProviderPlan::reserved_units(const std::string& leg_id) const {
  CargoUnits total = 0;
  for (const auto& [id, r] : reservations_) {
    if (r.leg_id == leg_id) total += r.units;
  }
  return total;
}

ReservationResult ProviderPlan::reserve_leg(const std::string& leg_id, CargoUnits units,
                                            const std::string& reservation_id) {
  if (units <= 0) throw InvalidValue("reservation units must be positive");
  if (reservation_id.empty()) throw InvalidValue("reservation_id must be non-empty");
  auto it = legs_.find(leg_id);
  if (it == legs_.end()) throw UnknownLeg("unknown leg " + leg_id);
  auto& leg = it->second.leg;

  ReservationResult result;
  result.reservation_id = reservation_id;
  result.leg_id = leg_id;
  if (auto held = reservations_.find(reservation_id); held != reservations_.end()) {
    if (held->second.leg_id != leg_id) {
      throw InvalidValue("reservation " + reservation_id + " is held on leg " +
                         held->second.leg_id);
    }
    result.status = ReservationResult::Status::Confirmed;
    result.remaining = leg.capacity;
    return result;
  }
  if (leg.capacity < units) {
    result.status = ReservationResult::Status::Refused;
    result.remaining = leg.capacity;
    return result;
  }
  leg.capacity -= units;
  reservations_.emplace(reservation_id, Reservation{reservation_id, leg_id, units});
  result.status = ReservationResult::Status::Confirmed;
  result.remaining = leg.capacity;
  return result;
}

void ProviderPlan::release_reservation(const std::string& reservation_id) {
  auto it = reservations_.find(reservation_id);
  if (it == reservations_.end()) throw UnknownReservation("unknown reservation " + reservation_id);
  auto leg = legs_.find(it->second.leg_id);
  if (leg != legs_.end()) leg->second.leg.capacity += it->second.units;
  reservations_.erase(it);
}

void ProviderPlan::apply(const PlanChange& change) {
  std::visit(
      [this](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, AddLeg>) {
          validate(c.leg);
          if (legs_.contains(c.leg.leg_id)) throw InvalidValue("duplicate leg " + c.leg.leg_id);
          RouteLeg leg = c.leg;
          leg.provider = provider_;
          legs_.emplace(leg.leg_id, LegState{leg, leg.capacity, next_position_++});
        } else if constexpr (std::is_same_v<T, RemoveLeg>) {
          if (!legs_.erase(c.leg_id)) throw UnknownLeg("unknown leg " + c.leg_id);
          std::erase_if(reservations_, [&](const auto& r) { return r.second.leg_id == c.leg_id; });
        } else {
          if (!legs_.contains(c.leg_id)) throw UnknownLeg("unknown leg " + c.leg_id);
          if (c.delta < 0) {
            reserve_leg(c.leg_id, -c.delta, c.reservation_id);
          } else if (c.delta > 0) {
            auto it = reservations_.find(c.reservation_id);
            if (it == reservations_.end() || it->second.leg_id != c.leg_id ||
                it->second.units != c.delta) {
              throw UnknownReservation("no reservation " + c.reservation_id + " of " +
                                       std::to_string(c.delta) + " units on " + c.leg_id);
            }
            release_reservation(c.reservation_id);
          }
        }
      },
      change);
}

ProviderPlan update_itinerary_plan(ProviderPlan plan, const PlanChange& change) {
  plan.apply(change);
  return plan;
}

}  // namespace agmarket::market
