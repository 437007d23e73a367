#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace agmarket {

/// Logical time of the runtime; one unit per scheduler step.
using Tick = std::int64_t;

/// Unique agent identity. `ordinal` is the spawn position and fixes the
/// scheduling order.
struct AgentId {
  std::string name;
  std::uint32_t ordinal = 0;

  friend auto operator<=>(const AgentId&, const AgentId&) = default;
};

}  // namespace agmarket
