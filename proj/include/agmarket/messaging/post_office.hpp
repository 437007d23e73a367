#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "agmarket/messaging/acl_message.hpp"
#include "agmarket/messaging/trace.hpp"

namespace agmarket::messaging {

class UnknownAgent : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct DirectoryEntry {
  AgentId agent;
  std::string service_type;
  std::map<std::string, std::string> attributes;

  friend bool operator==(const DirectoryEntry&, const DirectoryEntry&) = default;
};

struct DeliveryReceipt {
  std::vector<std::string> delivered;
  /// Receivers that were not live; each got a Failure trace event instead.
  std::vector<std::string> unknown_receivers;

  bool ok() const { return unknown_receivers.empty(); }
};

/// Mailboxes, directory facilitator and sniffer for one runtime.
///
/// Mailboxes are FIFO per agent; delivery visibility is controlled by the
/// caller through the `sent_before` bound of receive_matching.
class PostOffice {
 public:
  using TraceListener = std::function<void(const TraceEvent&)>;

  void attach(const AgentId& agent);
  /// Drops the mailbox and directory entries. No-op for unknown names.
  void detach(const std::string& name);
  bool is_live(const std::string& name) const { return agents_.contains(name); }
  const AgentId& agent(const std::string& name) const;

  /// Appends to every live receiver's mailbox and records one trace event
  /// per receiver. Throws std::invalid_argument on envelope violations.
  DeliveryReceipt send(const AclMessage& message);

  /// Removes and returns the oldest matching message. With `sent_before`,
  /// only messages sent strictly before that tick are visible.
  std::optional<AclMessage> receive_matching(const std::string& agent,
                                             const MessagePattern& pattern,
                                             std::optional<Tick> sent_before = std::nullopt);
  std::size_t mailbox_size(const std::string& agent) const;

  /// Agents that were sent a message stamped before `now` since the last
  /// call; their blocked behaviours should be woken.
  std::vector<std::string> take_due_wakes(Tick now);
  bool has_pending_wakes() const { return !wake_flags_.empty(); }

  /// Replaces any entry for the same (agent, service_type).
  void register_service(const DirectoryEntry& entry);
  void deregister_service(const std::string& agent, const std::string& service_type);
  /// Ordered by agent ordinal.
  std::vector<DirectoryEntry> search_directory(const std::string& service_type) const;

  /// Runtime-side failure (agent exception, undefined FSM transition):
  /// traced as a Failure event from the agent to itself.
  void record_failure(const AgentId& agent, const std::string& conversation_id,
                      const std::string& summary, Tick tick);

  std::vector<TraceEvent> export_trace(
      const std::optional<std::string>& conversation_id = std::nullopt) const;
  std::size_t trace_size() const { return trace_.size(); }

  void set_trace_listener(TraceListener listener) { listener_ = std::move(listener); }

 private:
  void record(TraceEvent event);

  std::map<std::string, AgentId> agents_;
  std::map<std::string, std::deque<AclMessage>> mailboxes_;
  std::map<std::string, Tick> wake_flags_;
  std::map<std::pair<std::string, std::string>, DirectoryEntry> directory_;
  std::vector<TraceEvent> trace_;
  TraceListener listener_;
};

}  // namespace agmarket::messaging
