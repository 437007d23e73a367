#pragma once

#include <json.hpp>

#include "agmarket/market/amendment.hpp"
#include "agmarket/market/provider_plan.hpp"
#include "agmarket/market/types.hpp"

// nlohmann adapters for the market types. Money is written as a decimal
// number; agent ids as their names (ordinals are assigned at spawn).

namespace agmarket::market {

void to_json(nlohmann::json& j, const Money& m);
void from_json(const nlohmann::json& j, Money& m);

void to_json(nlohmann::json& j, const RouteLeg& leg);
void from_json(const nlohmann::json& j, RouteLeg& leg);

void to_json(nlohmann::json& j, const HardConstraints& c);
void from_json(const nlohmann::json& j, HardConstraints& c);

void to_json(nlohmann::json& j, const CriteriaProfile& w);
void from_json(const nlohmann::json& j, CriteriaProfile& w);

void to_json(nlohmann::json& j, const TransportRequest& r);
void from_json(const nlohmann::json& j, TransportRequest& r);

void to_json(nlohmann::json& j, const Itinerary& i);

void to_json(nlohmann::json& j, const Breakdown& b);

/// {itinerary_id, legs, total_cost, delivery_time, min_insurance, score,
///  breakdown, status}
void to_json(nlohmann::json& j, const Proposal& p);

void to_json(nlohmann::json& j, const Amendment& a);
void from_json(const nlohmann::json& j, Amendment& a);

void to_json(nlohmann::json& j, const Reservation& r);

}  // namespace agmarket::market
