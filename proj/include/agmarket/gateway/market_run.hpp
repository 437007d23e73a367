#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "agmarket/agents/broker.hpp"
#include "agmarket/agents/customer.hpp"
#include "agmarket/agents/protocol.hpp"
#include "agmarket/agents/provider.hpp"
#include "agmarket/gateway/scenario.hpp"
#include "agmarket/kernel/runtime.hpp"
#include "agmarket/model/conformance.hpp"

namespace agmarket::gateway {

/// One instantiated scenario: customers, then the broker, then providers,
/// spawned in that order, with injections scheduled up front.
class MarketRun {
 public:
  /// `seed` overrides the scenario seed.
  explicit MarketRun(Scenario scenario, std::optional<std::uint64_t> seed = std::nullopt);

  const Scenario& scenario() const { return scenario_; }
  std::uint64_t seed() const { return rt_.seed(); }
  Tick tick() const { return rt_.tick(); }
  kernel::Runtime& runtime() { return rt_; }
  const kernel::Runtime& runtime() const { return rt_; }

  void step() { rt_.step(); }
  /// Runs to quiescence within `max_ticks` (default: the scenario limit).
  kernel::RunResult run(std::optional<Tick> max_ticks = std::nullopt);

  agents::BrokerAgent& broker() const { return *broker_; }
  const std::vector<agents::ProviderAgent*>& providers() const { return providers_; }
  const std::vector<agents::CustomerAgent*>& customers() const { return customers_; }
  agents::ProviderAgent* provider(const std::string& name) const;
  agents::CustomerAgent* customer(const std::string& name) const;
  /// The customer marked interactive, if any.
  agents::CustomerAgent* interactive_customer() const { return interactive_; }

  std::vector<messaging::TraceEvent> trace(const std::optional<std::string>& conversation = std::nullopt) const;
  std::vector<model::Violation> violations() const;
  agents::ProtocolReport protocol() const;
  /// Reports each violating event as it is traced; messages are not blocked.
  void set_live_conformance(std::function<void(const model::Violation&)> sink);

  /// Interactive commands, applied between steps and kept for replay.
  /// Both throw what the interactive customer throws, and
  /// PreconditionViolation when the scenario has no interactive customer.
  void submit(agents::ScriptEntry entry);
  void push_step(const std::string& request_id, agents::ScriptStep step);
  const std::vector<nlohmann::json>& commands() const { return commands_; }

  /// Legs with remaining capacity, reservations, broker proposal pools,
  /// customer outcomes and the command log.
  nlohmann::json snapshot() const;

 private:
  agents::CustomerAgent& require_interactive() const;

  Scenario scenario_;
  kernel::Runtime rt_;
  agents::BrokerAgent* broker_ = nullptr;
  std::vector<agents::ProviderAgent*> providers_;
  std::vector<agents::CustomerAgent*> customers_;
  agents::CustomerAgent* interactive_ = nullptr;
  model::AgentActorMap actors_;
  model::AcquaintanceGraph acquaintances_;
  std::vector<nlohmann::json> commands_;
};

struct ReplayReport {
  bool trace_matches = false;
  bool state_matches = false;
  /// First trace event that differs (or is missing on one side).
  std::optional<std::uint64_t> first_divergence;

  bool identical() const { return trace_matches && state_matches; }
};

/// Re-runs `scenario` with the snapshot's seed and command log up to the
/// snapshot's tick and compares the result against `snapshot` and `trace`.
ReplayReport replay(const Scenario& scenario, const nlohmann::json& snapshot,
                    std::span<const messaging::TraceEvent> trace);

}  // namespace agmarket::gateway
