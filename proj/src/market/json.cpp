#include "agmarket/market/json.hpp"

namespace agmarket::market {

using nlohmann::json;

namespace {

template <typename T>
std::optional<T> optional_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

void to_json(json& j, const Money& m) { j = m.as_decimal(); }

void from_json(const json& j, Money& m) {
  if (!j.is_number()) throw InvalidValue("money must be a number");
  m = Money::from_decimal(j.get<double>());
}

void to_json(json& j, const RouteLeg& leg) {
  j = json{{"leg_id", leg.leg_id},
           {"provider", leg.provider.name},
           {"origin", leg.origin},
           {"destination", leg.destination},
           {"depart", leg.depart},
           {"arrive", leg.arrive},
           {"cost", leg.cost},
           {"capacity", leg.capacity},
           {"insurance_level", leg.insurance_level}};
}

void from_json(const json& j, RouteLeg& leg) {
  leg.leg_id = j.at("leg_id").get<std::string>();
  if (auto p = optional_field<std::string>(j, "provider")) leg.provider.name = *p;
  leg.origin = j.at("origin").get<std::string>();
  leg.destination = j.at("destination").get<std::string>();
  leg.depart = j.at("depart").get<Minutes>();
  leg.arrive = j.at("arrive").get<Minutes>();
  leg.cost = j.at("cost").get<Money>();
  leg.capacity = j.at("capacity").get<CargoUnits>();
  leg.insurance_level = j.value("insurance_level", 0);
}

void to_json(json& j, const HardConstraints& c) {
  j = json::object();
  if (c.max_cost) j["max_cost"] = *c.max_cost;
  if (c.min_insurance) j["min_insurance"] = *c.min_insurance;
  if (c.max_legs) j["max_legs"] = *c.max_legs;
}

void from_json(const json& j, HardConstraints& c) {
  c.max_cost = optional_field<Money>(j, "max_cost");
  c.min_insurance = optional_field<int>(j, "min_insurance");
  c.max_legs = optional_field<int>(j, "max_legs");
}

void to_json(json& j, const CriteriaProfile& w) {
  j = json{{"w_cost", w.cost()}, {"w_time", w.time()}, {"w_insurance", w.insurance()}};
}

void from_json(const json& j, CriteriaProfile& w) {
  w = CriteriaProfile(j.value("w_cost", 0.0), j.value("w_time", 0.0),
                      j.value("w_insurance", 0.0));
}

void to_json(json& j, const TransportRequest& r) {
  j = json{{"request_id", r.request_id},
           {"customer", r.customer.name},
           {"origin", r.origin},
           {"destination", r.destination},
           {"cargo_size", r.cargo_size},
           {"earliest_pickup", r.earliest_pickup},
           {"latest_delivery", r.latest_delivery},
           {"constraints", r.constraints},
           {"weights", r.weights}};
}

void from_json(const json& j, TransportRequest& r) {
  r.request_id = j.value("request_id", std::string{});
  if (auto c = optional_field<std::string>(j, "customer")) r.customer.name = *c;
  r.origin = j.at("origin").get<std::string>();
  r.destination = j.at("destination").get<std::string>();
  r.cargo_size = j.at("cargo_size").get<CargoUnits>();
  r.earliest_pickup = j.at("earliest_pickup").get<Minutes>();
  r.latest_delivery = j.at("latest_delivery").get<Minutes>();
  if (auto it = j.find("constraints"); it != j.end()) r.constraints = it->get<HardConstraints>();
  if (auto it = j.find("weights"); it != j.end()) r.weights = it->get<CriteriaProfile>();
}

void to_json(json& j, const Itinerary& i) {
  j = json{{"itinerary_id", i.itinerary_id},
           {"legs", i.legs},
           {"total_cost", i.total_cost},
           {"delivery_time", i.delivery_time},
           {"min_insurance", i.min_insurance}};
}

void to_json(json& j, const Breakdown& b) {
  j = json{{"cost", b.cost}, {"time", b.time}, {"insurance", b.insurance}};
}

void to_json(json& j, const Proposal& p) {
  j = json{{"itinerary_id", p.itinerary.itinerary_id},
           {"legs", p.itinerary.legs},
           {"total_cost", p.itinerary.total_cost},
           {"delivery_time", p.itinerary.delivery_time},
           {"min_insurance", p.itinerary.min_insurance},
           {"score", p.score},
           {"breakdown", p.breakdown},
           {"status", std::string(to_string(p.status))}};
}

void to_json(json& j, const Amendment& a) {
  j = json{{"request_id", a.request_id}, {"itinerary_id", a.itinerary_id}};
  if (a.target_cost) j["target_cost"] = *a.target_cost;
  if (a.target_delivery_time) j["target_delivery_time"] = *a.target_delivery_time;
  if (a.target_insurance) j["target_insurance"] = *a.target_insurance;
}

void from_json(const json& j, Amendment& a) {
  a.request_id = j.value("request_id", std::string{});
  a.itinerary_id = j.at("itinerary_id").get<std::string>();
  a.target_cost = optional_field<Money>(j, "target_cost");
  a.target_delivery_time = optional_field<Minutes>(j, "target_delivery_time");
  a.target_insurance = optional_field<int>(j, "target_insurance");
}

void to_json(json& j, const Reservation& r) {
  j = json{{"reservation_id", r.reservation_id}, {"leg_id", r.leg_id}, {"units", r.units}};
}

}  // namespace agmarket::market
