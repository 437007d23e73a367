#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "agmarket/kernel/agent_id.hpp"
#include "agmarket/messaging/acl_message.hpp"

namespace agmarket::messaging {

/// One sniffed (message, receiver) pair.
struct TraceEvent {
  std::uint64_t seq = 0;
  Tick tick = 0;
  std::string conversation_id;
  Performative performative = Performative::Inform;
  std::string sender;
  std::string receiver;
  std::string content_summary;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

class MalformedTrace : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON Lines, one event per line, fields in declaration order.
std::string to_jsonl(std::span<const TraceEvent> events);
std::string to_json_line(const TraceEvent& event);
/// Throws MalformedTrace with the offending line number.
std::vector<TraceEvent> parse_jsonl(std::string_view text);

/// Plain-text sequence chart: one lane per agent in first-appearance order,
/// one row per event. Throws MalformedTrace if seq is not gapless.
std::string render_sequence_diagram(std::span<const TraceEvent> events);

}  // namespace agmarket::messaging
