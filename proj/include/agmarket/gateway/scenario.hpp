#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "agmarket/agents/customer.hpp"
#include "agmarket/agents/protocol.hpp"
#include "agmarket/market/network_generator.hpp"
#include "agmarket/messaging/acl_message.hpp"
#include "agmarket/model/conformance.hpp"
#include "agmarket/model/organization.hpp"

namespace agmarket::gateway {

/// The scenario file could not be read.
class ScenarioIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Limits {
  Tick max_ticks = 400;
  /// Ticks the broker waits for provider replies; nullopt never gives up.
  std::optional<Tick> cfp_deadline = 20;
  market::Minutes transfer_slack = 0;
  int max_legs = 4;
  std::size_t k_best = 5;
};

struct BrokerSpec {
  std::string name = "broker";
  std::string actor = "Broker";
};

struct ProviderSpec {
  std::string name;
  std::string actor = "Provider";
  double max_discount = 0.10;
  bool silent = false;
  std::vector<market::RouteLeg> legs;
};

/// Providers whose legs are drawn from the scenario seed.
struct GeneratedProviders {
  std::vector<std::string> names;
  std::string actor = "Provider";
  double max_discount = 0.10;
  market::NetworkParams network;
};

struct CustomerSpec {
  std::string name;
  std::string actor = "Customer";
  bool interactive = false;
  std::vector<agents::ScriptEntry> script;
};

/// A message placed into the runtime at a given tick, bypassing agents.
struct Injection {
  Tick at = 0;
  messaging::Performative performative = messaging::Performative::Inform;
  std::string sender;
  std::string receiver;
  std::string conversation_id;
  messaging::Body body;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  Limits limits;
  model::OrganizationalModel model;
  BrokerSpec broker;
  std::vector<ProviderSpec> providers;
  std::optional<GeneratedProviders> generated;
  std::vector<CustomerSpec> customers;
  std::vector<Injection> injections;

  /// Agent name -> actor name, for every agent the scenario spawns.
  model::AgentActorMap actor_map() const;
  agents::RoleMap role_map() const;
  const CustomerSpec* interactive_customer() const;
};

/// Throws model::ParseError (JSON pointer in where()) on any schema or
/// validation problem, model::UnknownActorReference for unknown actors.
Scenario load_scenario(const nlohmann::json& source);
/// Syntax errors are reported as "line N".
Scenario load_scenario_text(std::string_view text);
/// Throws ScenarioIoError when the file cannot be read.
Scenario load_scenario_file(const std::filesystem::path& path);

/// Script step in scenario notation: {"reweight": ...}, {"amend": ...},
/// {"select": ...}. `where` prefixes diagnostics.
agents::ScriptStep parse_step(const nlohmann::json& j, const std::string& where = "");
nlohmann::json to_json(const agents::ScriptStep& step);

/// Provider legs for the scenario's seed: the listed providers' legs plus
/// the generated ones, keyed by provider name in spawn order.
std::vector<std::pair<std::string, std::vector<market::RouteLeg>>> provider_networks(
    const Scenario& s, std::uint64_t seed);

}  // namespace agmarket::gateway
