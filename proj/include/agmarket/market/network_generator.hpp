#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agmarket/market/types.hpp"

namespace agmarket::market {

struct NetworkParams {
  int locations = 6;
  int legs = 12;
  Minutes horizon = 600;
  Minutes max_duration = 120;
  std::int64_t max_cost_cents = 50000;
  CargoUnits max_capacity = 20;
  std::string leg_prefix = "g";
};

/// Location names used by the generator: "L0", "L1", ...
std::string generated_location(int index);

/// Deterministic random network for `seed`. Legs are spread round-robin over
/// `providers`. Uses its own integer mapping so results do not depend on the
/// standard library's distribution implementations.
std::vector<RouteLeg> generate_network(std::uint64_t seed, const NetworkParams& params,
                                       const std::vector<AgentId>& providers);

}  // namespace agmarket::market
