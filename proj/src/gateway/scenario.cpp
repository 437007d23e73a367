#include "agmarket/gateway/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "agmarket/market/json.hpp"

namespace agmarket::gateway {

using nlohmann::json;
using model::ParseError;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ParseError(where, what); }

std::string at(const std::string& base, const std::string& key) { return base + "/" + key; }
std::string at(const std::string& base, std::size_t index) { return base + "/" + std::to_string(index); }

const json& field(const json& j, const std::string& where, const char* key) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

template <typename T>
T as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    fail(where, e.what());
  } catch (const market::InvalidValue& e) {
    fail(where, e.what());
  }
}

template <typename T>
T value_or(const json& j, const std::string& where, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return as<T>(*it, at(where, key));
}

const json& array_field(const json& j, const std::string& where, const char* key) {
  const json& a = field(j, where, key);
  if (!a.is_array()) fail(at(where, key), "expected an array");
  return a;
}

void check_actor(const model::OrganizationalModel& m, const std::string& actor, model::Role role,
                 const std::string& where) {
  const auto* a = m.find_actor(actor);
  if (!a) throw model::UnknownActorReference(where, "unknown actor \"" + actor + "\"");
  if (a->role != role)
    fail(where, "actor \"" + actor + "\" has role " + std::string(model::to_string(a->role)) + ", expected " +
                    std::string(model::to_string(role)));
}

Limits parse_limits(const json& j, const std::string& where) {
  Limits l;
  if (j.is_null()) return l;
  if (!j.is_object()) fail(where, "expected an object");
  l.max_ticks = value_or<Tick>(j, where, "max_ticks", l.max_ticks);
  if (j.contains("cfp_deadline"))
    l.cfp_deadline = j["cfp_deadline"].is_null()
                         ? std::nullopt
                         : std::optional<Tick>(as<Tick>(j["cfp_deadline"], at(where, "cfp_deadline")));
  l.transfer_slack = value_or<market::Minutes>(j, where, "transfer_slack", l.transfer_slack);
  l.max_legs = value_or<int>(j, where, "max_legs", l.max_legs);
  l.k_best = value_or<std::size_t>(j, where, "k_best", l.k_best);
  if (l.max_ticks <= 0) fail(at(where, "max_ticks"), "must be positive");
  if (l.cfp_deadline && *l.cfp_deadline <= 0) fail(at(where, "cfp_deadline"), "must be positive or null");
  if (l.transfer_slack < 0) fail(at(where, "transfer_slack"), "must not be negative");
  if (l.max_legs <= 0) fail(at(where, "max_legs"), "must be positive");
  if (l.k_best == 0) fail(at(where, "k_best"), "must be positive");
  return l;
}

market::CriteriaProfile parse_weights(const json& j, const std::string& where) {
  return as<market::CriteriaProfile>(j, where);
}

}  // namespace

agents::ScriptStep parse_step(const json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1) fail(where, "a step has exactly one of reweight, amend, select");
  if (j.contains("reweight")) return agents::ReweightStep{parse_weights(j["reweight"], at(where, "reweight"))};
  if (j.contains("amend")) {
    const auto w = at(where, "amend");
    const json& a = j["amend"];
    if (!a.is_object()) fail(w, "expected an object");
    agents::AmendStep s;
    s.index = value_or<std::size_t>(a, w, "index", 0);
    if (a.contains("itinerary_id")) s.itinerary_id = as<std::string>(a["itinerary_id"], at(w, "itinerary_id"));
    if (a.contains("cost_factor")) s.cost_factor = as<double>(a["cost_factor"], at(w, "cost_factor"));
    if (a.contains("target_cost")) s.target_cost = as<market::Money>(a["target_cost"], at(w, "target_cost"));
    if (a.contains("target_delivery_time"))
      s.target_delivery_time = as<market::Minutes>(a["target_delivery_time"], at(w, "target_delivery_time"));
    if (a.contains("target_insurance")) s.target_insurance = as<int>(a["target_insurance"], at(w, "target_insurance"));
    const int targets = int(s.cost_factor.has_value()) + int(s.target_cost.has_value()) +
                        int(s.target_delivery_time.has_value()) + int(s.target_insurance.has_value());
    if (targets != 1) fail(w, "exactly one of cost_factor, target_cost, target_delivery_time, target_insurance");
    if (s.cost_factor && !(*s.cost_factor > 0.0)) fail(at(w, "cost_factor"), "must be positive");
    return s;
  }
  if (j.contains("select")) {
    const auto w = at(where, "select");
    const json& v = j["select"];
    agents::SelectStep s;
    if (v.is_string()) {
      const auto k = v.get<std::string>();
      if (k == "best-score") s.kind = agents::SelectStep::Kind::BestScore;
      else if (k == "none") s.kind = agents::SelectStep::Kind::None;
      else fail(w, "unknown selection \"" + k + "\"");
      return s;
    }
    if (!v.is_object() || v.size() != 1) fail(w, "expected \"best-score\", \"none\" or one of index, itinerary_id, legs");
    if (v.contains("index")) {
      s.kind = agents::SelectStep::Kind::Index;
      s.index = as<std::size_t>(v["index"], at(w, "index"));
    } else if (v.contains("itinerary_id")) {
      s.kind = agents::SelectStep::Kind::ItineraryId;
      s.itinerary_id = as<std::string>(v["itinerary_id"], at(w, "itinerary_id"));
    } else if (v.contains("legs")) {
      s.kind = agents::SelectStep::Kind::Legs;
      s.legs = as<std::vector<std::string>>(v["legs"], at(w, "legs"));
    } else {
      fail(w, "expected one of index, itinerary_id, legs");
    }
    return s;
  }
  fail(where, "a step has exactly one of reweight, amend, select");
}

json to_json(const agents::ScriptStep& step) {
  if (const auto* r = std::get_if<agents::ReweightStep>(&step)) return {{"reweight", r->weights}};
  if (const auto* a = std::get_if<agents::AmendStep>(&step)) {
    json j;
    if (a->itinerary_id) j["itinerary_id"] = *a->itinerary_id;
    else j["index"] = a->index;
    if (a->cost_factor) j["cost_factor"] = *a->cost_factor;
    if (a->target_cost) j["target_cost"] = *a->target_cost;
    if (a->target_delivery_time) j["target_delivery_time"] = *a->target_delivery_time;
    if (a->target_insurance) j["target_insurance"] = *a->target_insurance;
    return {{"amend", j}};
  }
  const auto& s = std::get<agents::SelectStep>(step);
  switch (s.kind) {
    case agents::SelectStep::Kind::BestScore: return {{"select", "best-score"}};
    case agents::SelectStep::Kind::None: return {{"select", "none"}};
    case agents::SelectStep::Kind::Index: return {{"select", {{"index", s.index}}}};
    case agents::SelectStep::Kind::ItineraryId: return {{"select", {{"itinerary_id", s.itinerary_id}}}};
    case agents::SelectStep::Kind::Legs: return {{"select", {{"legs", s.legs}}}};
  }
  return {};
}

namespace {

messaging::Body parse_content(const json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1) fail(where, "content has exactly one of error, request, selection");
  if (j.contains("error")) {
    const auto w = at(where, "error");
    return messaging::ErrorInfo{as<std::string>(field(j["error"], w, "code"), at(w, "code")),
                                value_or<std::string>(j["error"], w, "message", "")};
  }
  if (j.contains("request")) return as<market::TransportRequest>(j["request"], at(where, "request"));
  if (j.contains("selection")) {
    const auto w = at(where, "selection");
    return messaging::Selection{as<std::string>(field(j["selection"], w, "request_id"), at(w, "request_id")),
                                as<std::string>(field(j["selection"], w, "itinerary_id"), at(w, "itinerary_id"))};
  }
  fail(where, "content has exactly one of error, request, selection");
}

}  // namespace

model::AgentActorMap Scenario::actor_map() const {
  model::AgentActorMap m;
  m[broker.name] = broker.actor;
  for (const auto& p : providers) m[p.name] = p.actor;
  if (generated)
    for (const auto& n : generated->names) m[n] = generated->actor;
  for (const auto& c : customers) m[c.name] = c.actor;
  return m;
}

agents::RoleMap Scenario::role_map() const {
  agents::RoleMap roles;
  for (const auto& [agent, actor] : actor_map())
    if (const auto* a = model.find_actor(actor)) roles[agent] = a->role;
  return roles;
}

const CustomerSpec* Scenario::interactive_customer() const {
  for (const auto& c : customers)
    if (c.interactive) return &c;
  return nullptr;
}

Scenario load_scenario(const json& j) {
  if (!j.is_object()) fail("", "scenario must be a JSON object");
  Scenario s;
  s.name = value_or<std::string>(j, "", "name", "unnamed");
  s.seed = value_or<std::uint64_t>(j, "", "seed", 0);
  s.limits = parse_limits(j.value("limits", json()), "/limits");
  s.model = model::load_model(field(j, "", "model"), "/model");

  std::set<std::string> names;
  auto claim = [&names](const std::string& name, const std::string& where) {
    if (name.empty()) fail(where, "agent name is empty");
    if (!names.insert(name).second) fail(where, "duplicate agent name \"" + name + "\"");
  };

  if (j.contains("broker")) {
    const json& b = j["broker"];
    s.broker.name = value_or<std::string>(b, "/broker", "name", s.broker.name);
    s.broker.actor = value_or<std::string>(b, "/broker", "actor", s.broker.actor);
  }
  claim(s.broker.name, "/broker/name");
  check_actor(s.model, s.broker.actor, model::Role::Broker, "/broker/actor");

  std::set<std::string> leg_ids;
  if (j.contains("providers")) {
    const json& ps = array_field(j, "", "providers");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const auto w = at("/providers", i);
      ProviderSpec p;
      p.name = as<std::string>(field(ps[i], w, "name"), at(w, "name"));
      claim(p.name, at(w, "name"));
      p.actor = value_or<std::string>(ps[i], w, "actor", p.actor);
      check_actor(s.model, p.actor, model::Role::Provider, at(w, "actor"));
      p.max_discount = value_or<double>(ps[i], w, "max_discount", p.max_discount);
      if (!(p.max_discount >= 0.0 && p.max_discount <= 1.0)) fail(at(w, "max_discount"), "must be within [0, 1]");
      p.silent = value_or<bool>(ps[i], w, "silent", false);
      const json& legs = array_field(ps[i], w, "legs");
      for (std::size_t k = 0; k < legs.size(); ++k) {
        const auto lw = at(at(w, "legs"), k);
        auto leg = as<market::RouteLeg>(legs[k], lw);
        leg.provider = {p.name, 0};
        try {
          market::validate(leg);
        } catch (const market::InvalidValue& e) {
          fail(lw, e.what());
        }
        if (!leg_ids.insert(leg.leg_id).second) fail(at(lw, "leg_id"), "duplicate leg id \"" + leg.leg_id + "\"");
        p.legs.push_back(std::move(leg));
      }
      s.providers.push_back(std::move(p));
    }
  }

  if (j.contains("generated_providers")) {
    const std::string w = "/generated_providers";
    const json& g = j[w.substr(1)];
    GeneratedProviders gen;
    gen.names = as<std::vector<std::string>>(field(g, w, "names"), at(w, "names"));
    if (gen.names.empty()) fail(at(w, "names"), "must not be empty");
    for (std::size_t i = 0; i < gen.names.size(); ++i) claim(gen.names[i], at(at(w, "names"), i));
    gen.actor = value_or<std::string>(g, w, "actor", gen.actor);
    check_actor(s.model, gen.actor, model::Role::Provider, at(w, "actor"));
    gen.max_discount = value_or<double>(g, w, "max_discount", gen.max_discount);
    auto& n = gen.network;
    n.locations = value_or<int>(g, w, "locations", n.locations);
    n.legs = value_or<int>(g, w, "legs", n.legs);
    n.horizon = value_or<market::Minutes>(g, w, "horizon", n.horizon);
    n.max_duration = value_or<market::Minutes>(g, w, "max_duration", n.max_duration);
    n.max_capacity = value_or<market::CargoUnits>(g, w, "max_capacity", n.max_capacity);
    n.leg_prefix = value_or<std::string>(g, w, "leg_prefix", n.leg_prefix);
    if (n.locations < 2 || n.legs <= 0 || n.horizon <= 0 || n.max_duration <= 0 || n.max_capacity <= 0)
      fail(w, "network parameters must be positive (locations >= 2)");
    s.generated = std::move(gen);
  }
  if (s.providers.empty() && !s.generated) fail("/providers", "at least one provider is required");

  std::set<std::string> request_ids;
  const json& cs = array_field(j, "", "customers");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto w = at("/customers", i);
    CustomerSpec c;
    c.name = as<std::string>(field(cs[i], w, "name"), at(w, "name"));
    claim(c.name, at(w, "name"));
    c.actor = value_or<std::string>(cs[i], w, "actor", c.actor);
    check_actor(s.model, c.actor, model::Role::Customer, at(w, "actor"));
    c.interactive = value_or<bool>(cs[i], w, "interactive", false);
    if (c.interactive && s.interactive_customer()) fail(at(w, "interactive"), "only one customer may be interactive");
    if (cs[i].contains("script")) {
      const json& script = array_field(cs[i], w, "script");
      for (std::size_t k = 0; k < script.size(); ++k) {
        const auto ew = at(at(w, "script"), k);
        agents::ScriptEntry e;
        e.request = as<market::TransportRequest>(field(script[k], ew, "request"), at(ew, "request"));
        if (e.request.request_id.empty()) fail(at(at(ew, "request"), "request_id"), "missing request_id");
        if (!request_ids.insert(e.request.request_id).second)
          fail(at(at(ew, "request"), "request_id"), "duplicate request_id \"" + e.request.request_id + "\"");
        e.start_at = value_or<Tick>(script[k], ew, "start_at", 0);
        if (e.start_at < 0) fail(at(ew, "start_at"), "must not be negative");
        if (script[k].contains("steps")) {
          const json& steps = array_field(script[k], ew, "steps");
          for (std::size_t n = 0; n < steps.size(); ++n) e.steps.push_back(parse_step(steps[n], at(at(ew, "steps"), n)));
        }
        c.script.push_back(std::move(e));
      }
    }
    s.customers.push_back(std::move(c));
  }

  if (j.contains("injections")) {
    const json& inj = array_field(j, "", "injections");
    for (std::size_t i = 0; i < inj.size(); ++i) {
      const auto w = at("/injections", i);
      Injection x;
      x.at = as<Tick>(field(inj[i], w, "at"), at(w, "at"));
      if (x.at < 0) fail(at(w, "at"), "must not be negative");
      const auto perf = as<std::string>(field(inj[i], w, "performative"), at(w, "performative"));
      auto p = messaging::performative_from_string(perf);
      if (!p) fail(at(w, "performative"), "unknown performative \"" + perf + "\"");
      x.performative = *p;
      x.sender = as<std::string>(field(inj[i], w, "sender"), at(w, "sender"));
      x.receiver = as<std::string>(field(inj[i], w, "receiver"), at(w, "receiver"));
      if (!names.contains(x.sender)) fail(at(w, "sender"), "unknown agent \"" + x.sender + "\"");
      if (!names.contains(x.receiver)) fail(at(w, "receiver"), "unknown agent \"" + x.receiver + "\"");
      if (x.sender == x.receiver) fail(at(w, "receiver"), "sender and receiver must differ");
      x.conversation_id = value_or<std::string>(inj[i], w, "conversation_id", "injected-" + std::to_string(i + 1));
      x.body = parse_content(field(inj[i], w, "content"), at(w, "content"));
      if (!messaging::body_consistent(x.performative, static_cast<messaging::BodyTag>(x.body.index())))
        fail(at(w, "content"), "content does not fit performative \"" + perf + "\"");
      s.injections.push_back(std::move(x));
    }
  }
  return s;
}

Scenario load_scenario_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(model::line_of(text, e.byte > 0 ? e.byte - 1 : 0)), e.what());
  }
  return load_scenario(j);
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioIoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ScenarioIoError("cannot read " + path.string());
  return load_scenario_text(buf.str());
}

std::vector<std::pair<std::string, std::vector<market::RouteLeg>>> provider_networks(const Scenario& s,
                                                                                      std::uint64_t seed) {
  std::vector<std::pair<std::string, std::vector<market::RouteLeg>>> out;
  for (const auto& p : s.providers) out.emplace_back(p.name, p.legs);
  if (s.generated) {
    std::vector<AgentId> ids;
    for (const auto& n : s.generated->names) ids.push_back({n, 0});
    auto legs = market::generate_network(seed, s.generated->network, ids);
    for (const auto& n : s.generated->names) {
      std::vector<market::RouteLeg> mine;
      for (const auto& leg : legs)
        if (leg.provider.name == n) mine.push_back(leg);
      out.emplace_back(n, std::move(mine));
    }
  }
  return out;
}

}  // namespace agmarket::gateway
