#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "agmarket/messaging/trace.hpp"
#include "agmarket/model/organization.hpp"

namespace agmarket::agents {

/// Body tag recovered from a trace summary ("Tag{...}").
std::optional<messaging::BodyTag> summary_tag(const std::string& summary);

struct ProtocolDeviation {
  std::uint64_t seq = 0;
  std::string conversation_id;
  std::string state;
  std::string reason;
};

struct UnfinishedConversation {
  std::string conversation_id;
  std::string state;
};

struct ProtocolReport {
  std::size_t conversations = 0;
  std::vector<ProtocolDeviation> deviations;
  std::vector<UnfinishedConversation> unfinished;

  bool valid() const { return deviations.empty() && unfinished.empty(); }
  nlohmann::json to_json() const;
};

/// Agent name -> role.
using RoleMap = std::map<std::string, model::Role>;

/// Replays every conversation of a trace through the interaction protocol
/// (request / call for proposals / presentation, re-ranking, amendment,
/// selection and reservation). Self events are skipped; not-understood
/// replies are allowed anywhere.
ProtocolReport check_protocol(std::span<const messaging::TraceEvent> trace, const RoleMap& roles);

}  // namespace agmarket::agents
