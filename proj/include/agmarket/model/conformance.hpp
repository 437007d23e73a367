#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "agmarket/messaging/trace.hpp"
#include "agmarket/model/organization.hpp"

namespace agmarket::model {

class UnmappedAgent : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct Violation {
  std::uint64_t event_seq = 0;
  std::string sender;
  std::string receiver;
  std::string reason;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Agent name -> actor name.
using AgentActorMap = std::map<std::string, std::string>;

/// Checks a single event; self-addressed runtime events are not
/// communication and always conform.
std::optional<Violation> check_event(const AcquaintanceGraph& g, const messaging::TraceEvent& e,
                                     const AgentActorMap& actors);

/// One violation per event whose actor pair has no edge. Throws
/// UnmappedAgent when an agent has no actor.
std::vector<Violation> check_conformance(const AcquaintanceGraph& g,
                                         std::span<const messaging::TraceEvent> events,
                                         const AgentActorMap& actors);

nlohmann::json to_json(std::span<const Violation> violations);

}  // namespace agmarket::model
