#include "agmarket/model/conformance.hpp"

namespace agmarket::model {

namespace {

const std::string& actor_of(const AgentActorMap& actors, const std::string& agent) {
  auto it = actors.find(agent);
  if (it == actors.end()) throw UnmappedAgent("agent has no actor: " + agent);
  return it->second;
}

}  // namespace

std::optional<Violation> check_event(const AcquaintanceGraph& g, const messaging::TraceEvent& e,
                                     const AgentActorMap& actors) {
  if (e.sender == e.receiver) return std::nullopt;
  const auto& from = actor_of(actors, e.sender);
  const auto& to = actor_of(actors, e.receiver);
  if (g.allows(from, to)) return std::nullopt;
  return Violation{e.seq, e.sender, e.receiver, "no acquaintance " + from + " -> " + to};
}

std::vector<Violation> check_conformance(const AcquaintanceGraph& g,
                                         std::span<const messaging::TraceEvent> events,
                                         const AgentActorMap& actors) {
  std::vector<Violation> out;
  for (const auto& e : events)
    if (auto v = check_event(g, e, actors)) out.push_back(std::move(*v));
  return out;
}

nlohmann::json to_json(std::span<const Violation> violations) {
  auto j = nlohmann::json::array();
  for (const auto& v : violations)
    j.push_back({{"event_seq", v.event_seq},
                 {"sender", v.sender},
                 {"receiver", v.receiver},
                 {"reason", v.reason}});
  return j;
}

}  // namespace agmarket::model
