#include "agmarket/gateway/market_run.hpp"

#include <algorithm>

#include "agmarket/market/json.hpp"

namespace agmarket::gateway {

using nlohmann::json;

MarketRun::MarketRun(Scenario scenario, std::optional<std::uint64_t> seed)
    : scenario_(std::move(scenario)),
      rt_(seed.value_or(scenario_.seed)),
      actors_(scenario_.actor_map()),
      acquaintances_(model::effective_acquaintances(scenario_.model)) {
  for (const auto& c : scenario_.customers) {
    auto& agent = rt_.spawn_as<agents::CustomerAgent>(c.name, c.actor, c.script, c.interactive);
    customers_.push_back(&agent);
    if (c.interactive) interactive_ = &agent;
  }

  agents::BrokerConfig config;
  config.reply_deadline = scenario_.limits.cfp_deadline;
  config.limits.max_legs = scenario_.limits.max_legs;
  config.limits.transfer_slack = scenario_.limits.transfer_slack;
  config.k_best = scenario_.limits.k_best;
  broker_ = &rt_.spawn_as<agents::BrokerAgent>(scenario_.broker.name, scenario_.broker.actor, config);

  for (auto& [name, legs] : provider_networks(scenario_, rt_.seed())) {
    std::string actor = "Provider";
    agents::ProviderConfig pc;
    auto spec = std::find_if(scenario_.providers.begin(), scenario_.providers.end(),
                             [&](const ProviderSpec& p) { return p.name == name; });
    if (spec != scenario_.providers.end()) {
      actor = spec->actor;
      pc.policy = market::ConcessionPolicy::from_fraction(spec->max_discount);
      pc.silent = spec->silent;
    } else {
      actor = scenario_.generated->actor;
      pc.policy = market::ConcessionPolicy::from_fraction(scenario_.generated->max_discount);
    }
    providers_.push_back(&rt_.spawn_as<agents::ProviderAgent>(
        name, actor, market::ProviderPlan({name, 0}, std::move(legs)), pc));
  }

  for (const auto& inj : scenario_.injections) {
    messaging::AclMessage m;
    m.performative = inj.performative;
    m.sender = rt_.post_office().agent(inj.sender);
    m.receivers = {rt_.post_office().agent(inj.receiver)};
    m.conversation_id = inj.conversation_id;
    m.content = messaging::make_payload(inj.body);
    rt_.schedule_message(inj.at, std::move(m));
  }
}

kernel::RunResult MarketRun::run(std::optional<Tick> max_ticks) {
  return rt_.run_until_quiescent(max_ticks.value_or(scenario_.limits.max_ticks));
}

agents::ProviderAgent* MarketRun::provider(const std::string& name) const {
  for (auto* p : providers_)
    if (p->plan().provider().name == name) return p;
  return nullptr;
}

agents::CustomerAgent* MarketRun::customer(const std::string& name) const {
  for (std::size_t i = 0; i < customers_.size(); ++i)
    if (scenario_.customers[i].name == name) return customers_[i];
  return nullptr;
}

std::vector<messaging::TraceEvent> MarketRun::trace(const std::optional<std::string>& conversation) const {
  return rt_.post_office().export_trace(conversation);
}

std::vector<model::Violation> MarketRun::violations() const {
  auto t = trace();
  return model::check_conformance(acquaintances_, t, actors_);
}

agents::ProtocolReport MarketRun::protocol() const {
  auto t = trace();
  return agents::check_protocol(t, scenario_.role_map());
}

void MarketRun::set_live_conformance(std::function<void(const model::Violation&)> sink) {
  if (!sink) {
    rt_.post_office().set_trace_listener({});
    return;
  }
  rt_.post_office().set_trace_listener(
      [this, sink = std::move(sink)](const messaging::TraceEvent& e) {
        try {
          if (auto v = model::check_event(acquaintances_, e, actors_)) sink(*v);
        } catch (const model::UnmappedAgent&) {
          sink({e.seq, e.sender, e.receiver, "unmapped agent"});
        }
      });
}

agents::CustomerAgent& MarketRun::require_interactive() const {
  if (!interactive_) throw kernel::PreconditionViolation("scenario has no interactive customer");
  return *interactive_;
}

void MarketRun::submit(agents::ScriptEntry entry) {
  auto& c = require_interactive();
  json request = entry.request;
  c.submit(rt_, std::move(entry));
  commands_.push_back({{"tick", rt_.tick()}, {"submit", request}});
}

void MarketRun::push_step(const std::string& request_id, agents::ScriptStep step) {
  auto& c = require_interactive();
  json j = to_json(step);
  c.push_step(rt_, request_id, std::move(step));
  commands_.push_back({{"tick", rt_.tick()}, {"request_id", request_id}, {"step", j}});
}

json MarketRun::snapshot() const {
  json j;
  j["scenario"] = scenario_.name;
  j["seed"] = rt_.seed();
  j["tick"] = rt_.tick();

  j["providers"] = json::array();
  for (const auto* p : providers_) {
    const auto& plan = p->plan();
    json reservations = json::array();
    for (const auto& [id, r] : plan.reservations()) reservations.push_back(r);
    j["providers"].push_back({{"name", plan.provider().name}, {"legs", plan.legs()}, {"reservations", reservations}});
  }

  j["requests"] = json::array();
  for (const auto& [rid, rec] : broker_->requests()) {
    j["requests"].push_back({{"request_id", rid},
                             {"customer", rec.customer.name},
                             {"phase", std::string(agents::to_string(rec.phase))},
                             {"weights", rec.book.weights()},
                             {"proposals", rec.book.ranked()}});
  }

  j["customers"] = json::array();
  for (std::size_t i = 0; i < customers_.size(); ++i) {
    json requests = json::array();
    for (const auto& [rid, v] : customers_[i]->views()) {
      requests.push_back({{"request_id", rid},
                          {"status", std::string(agents::to_string(v.status))},
                          {"selected", v.selected ? json(*v.selected) : json(nullptr)},
                          {"reservation_id", v.reservation_id},
                          {"detail", v.detail}});
    }
    j["customers"].push_back({{"name", scenario_.customers[i].name}, {"requests", requests}});
  }
  j["commands"] = commands_;
  return j;
}

ReplayReport replay(const Scenario& scenario, const json& snapshot, std::span<const messaging::TraceEvent> trace) {
  MarketRun run(scenario, snapshot.at("seed").get<std::uint64_t>());
  const Tick until = snapshot.at("tick").get<Tick>();
  const json& commands = snapshot.contains("commands") ? snapshot["commands"] : json::array();
  std::size_t next = 0;
  auto apply_due = [&] {
    for (; next < commands.size() && commands[next].at("tick").get<Tick>() == run.tick(); ++next) {
      const json& c = commands[next];
      if (c.contains("submit")) {
        agents::ScriptEntry e;
        e.request = c["submit"].get<market::TransportRequest>();
        run.submit(std::move(e));
      } else {
        run.push_step(c.at("request_id").get<std::string>(), parse_step(c.at("step"), "/commands"));
      }
    }
  };
  while (run.tick() < until) {
    apply_due();
    run.step();
  }
  apply_due();

  ReplayReport report;
  const auto again = run.trace();
  report.trace_matches = again.size() == trace.size() && std::equal(again.begin(), again.end(), trace.begin());
  if (!report.trace_matches) {
    std::size_t i = 0;
    while (i < again.size() && i < trace.size() && again[i] == trace[i]) ++i;
    report.first_divergence = i;
  }
  report.state_matches = run.snapshot() == snapshot;
  return report;
}

}  // namespace agmarket::gateway
