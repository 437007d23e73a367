#include "agmarket/market/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "agmarket/market/money.hpp"

namespace agmarket::market {

Money Money::from_decimal(double value) {
  if (!std::isfinite(value)) {
    throw InvalidValue("money amount must be finite");
  }
  return Money(std::llround(value * 100.0));
}

std::string Money::to_string() const {
  const std::int64_t whole = std::llabs(cents_) / 100;
  const std::int64_t frac = std::llabs(cents_) % 100;
  char buffer[48];
  std::snprintf(buffer, sizeof buffer, "%s%lld.%02lld", cents_ < 0 ? "-" : "",
                static_cast<long long>(whole), static_cast<long long>(frac));
  return buffer;
}

void validate(const RouteLeg& leg) {
  if (leg.leg_id.empty()) throw InvalidValue("leg_id must be non-empty");
  const std::string where = "leg " + leg.leg_id + ": ";
  if (leg.origin.empty() || leg.destination.empty()) {
    throw InvalidValue(where + "origin and destination are required");
  }
  if (leg.origin == leg.destination) throw InvalidValue(where + "origin equals destination");
  if (leg.arrive <= leg.depart) throw InvalidValue(where + "arrive must be after depart");
  if (leg.cost < Money{}) throw InvalidValue(where + "cost must be non-negative");
  if (leg.capacity < 0) throw InvalidValue(where + "capacity must be non-negative");
  if (leg.insurance_level < 0 || leg.insurance_level > kMaxInsuranceLevel) {
    throw InvalidValue(where + "insurance_level must be in [0,5]");
  }
}

CriteriaProfile::CriteriaProfile(double cost, double time, double insurance)
    : cost_(cost), time_(time), insurance_(insurance) {
  for (double w : {cost, time, insurance}) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidValue("weights must be finite and >= 0");
  }
  if (cost + time + insurance <= 0.0) throw InvalidValue("weights must not all be zero");
}

CriteriaProfile::Normalized CriteriaProfile::normalized() const {
  const double sum = cost_ + time_ + insurance_;
  return {cost_ / sum, time_ / sum, insurance_ / sum};
}

std::optional<std::string> check(const TransportRequest& request) {
  if (request.request_id.empty()) return "request_id must be non-empty";
  if (request.origin.empty() || request.destination.empty()) {
    return "origin and destination are required";
  }
  if (request.origin == request.destination) return "origin equals destination";
  if (request.cargo_size <= 0) return "cargo_size must be positive";
  if (request.latest_delivery <= request.earliest_pickup) {
    return "latest_delivery must be after earliest_pickup";
  }
  const auto& c = request.constraints;
  if (c.max_cost && *c.max_cost < Money{}) return "max_cost must be non-negative";
  if (c.min_insurance && (*c.min_insurance < 0 || *c.min_insurance > kMaxInsuranceLevel)) {
    return "min_insurance must be in [0,5]";
  }
  if (c.max_legs && *c.max_legs < 1) return "max_legs must be at least 1";
  return std::nullopt;
}

Itinerary Itinerary::from_legs(std::vector<RouteLeg> legs, Minutes transfer_slack) {
  if (legs.empty()) throw InvalidValue("itinerary needs at least one leg");
  for (std::size_t k = 0; k + 1 < legs.size(); ++k) {
    if (legs[k].destination != legs[k + 1].origin) {
      throw InvalidValue("legs " + legs[k].leg_id + " and " + legs[k + 1].leg_id +
                         " do not chain");
    }
    if (legs[k + 1].depart < legs[k].arrive + transfer_slack) {
      throw InvalidValue("leg " + legs[k + 1].leg_id + " departs before transfer is possible");
    }
  }
  Itinerary it;
  it.itinerary_id = itinerary_id_for(legs);
  it.min_insurance = kMaxInsuranceLevel;
  for (const auto& leg : legs) {
    it.total_cost += leg.cost;
    it.min_insurance = std::min(it.min_insurance, leg.insurance_level);
  }
  it.delivery_time = legs.back().arrive;
  it.legs = std::move(legs);
  return it;
}

std::vector<AgentId> Itinerary::providers() const {
  std::vector<AgentId> out;
  for (const auto& leg : legs) {
    if (std::find(out.begin(), out.end(), leg.provider) == out.end()) out.push_back(leg.provider);
  }
  return out;
}

std::string itinerary_id_for(std::span<const RouteLeg> legs) {
  // FNV-1a, 64 bit, over leg ids separated by 0x1f.
  std::uint64_t hash = 14695981039346656037ull;
  auto mix = [&hash](unsigned char c) {
    hash ^= c;
    hash *= 1099511628211ull;
  };
  for (std::size_t k = 0; k < legs.size(); ++k) {
    if (k > 0) mix(0x1f);
    for (unsigned char c : legs[k].leg_id) mix(c);
  }
  char buffer[24];
  std::snprintf(buffer, sizeof buffer, "it-%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

std::string_view to_string(ProposalStatus status) {
  switch (status) {
    case ProposalStatus::Offered: return "offered";
    case ProposalStatus::Amended: return "amended";
    case ProposalStatus::Selected: return "selected";
    case ProposalStatus::Confirmed: return "confirmed";
    case ProposalStatus::Failed: return "failed";
  }
  return "unknown";
}

std::optional<ProposalStatus> proposal_status_from_string(std::string_view text) {
  for (auto s : {ProposalStatus::Offered, ProposalStatus::Amended, ProposalStatus::Selected,
                 ProposalStatus::Confirmed, ProposalStatus::Failed}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

bool can_transition(ProposalStatus from, ProposalStatus to) {
  using S = ProposalStatus;
  switch (from) {
    case S::Offered:
    case S::Amended: return to == S::Amended || to == S::Selected;
    case S::Selected: return to == S::Confirmed || to == S::Failed;
    case S::Confirmed:
    case S::Failed: return false;
  }
  return false;
}

bool is_decided(ProposalStatus status) {
  return status == ProposalStatus::Selected || status == ProposalStatus::Confirmed ||
         status == ProposalStatus::Failed;
}

void Proposal::transition_to(ProposalStatus next) {
  if (!can_transition(status, next)) {
    throw InvalidStatusTransition("proposal " + itinerary.itinerary_id + ": " +
                                  std::string(to_string(status)) + " -> " +
                                  std::string(to_string(next)));
  }
  status = next;
}

}  // namespace agmarket::market
