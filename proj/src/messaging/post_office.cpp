#include "agmarket/messaging/post_office.hpp"

#include <algorithm>

namespace agmarket::messaging {

void PostOffice::attach(const AgentId& agent) {
  if (agent.name.empty()) throw std::invalid_argument("agent name is empty");
  if (agents_.contains(agent.name))
    throw std::invalid_argument("agent already attached: " + agent.name);
  agents_.emplace(agent.name, agent);
  mailboxes_[agent.name];
}

void PostOffice::detach(const std::string& name) {
  agents_.erase(name);
  mailboxes_.erase(name);
  wake_flags_.erase(name);
  std::erase_if(directory_, [&](const auto& kv) { return kv.first.first == name; });
}

const AgentId& PostOffice::agent(const std::string& name) const {
  auto it = agents_.find(name);
  if (it == agents_.end()) throw UnknownAgent("unknown agent: " + name);
  return it->second;
}

DeliveryReceipt PostOffice::send(const AclMessage& message) {
  validate_envelope(message);
  DeliveryReceipt receipt;
  const std::string summary = summarize(message.content);
  for (const auto& receiver : message.receivers) {
    auto box = mailboxes_.find(receiver.name);
    if (box == mailboxes_.end()) {
      receipt.unknown_receivers.push_back(receiver.name);
      record({0, message.sent_tick, message.conversation_id, Performative::Failure,
              message.sender.name, message.sender.name,
              "undeliverable to " + receiver.name + ": " + summary});
      continue;
    }
    box->second.push_back(message);
    auto [flag, inserted] = wake_flags_.emplace(receiver.name, message.sent_tick);
    if (!inserted) flag->second = std::min(flag->second, message.sent_tick);
    receipt.delivered.push_back(receiver.name);
    record({0, message.sent_tick, message.conversation_id, message.performative,
            message.sender.name, receiver.name, summary});
  }
  return receipt;
}

std::optional<AclMessage> PostOffice::receive_matching(const std::string& agent,
                                                       const MessagePattern& pattern,
                                                       std::optional<Tick> sent_before) {
  auto box = mailboxes_.find(agent);
  if (box == mailboxes_.end()) throw UnknownAgent("unknown agent: " + agent);
  auto& queue = box->second;
  for (auto it = queue.begin(); it != queue.end(); ++it) {
    if (sent_before && it->sent_tick >= *sent_before) continue;
    if (!pattern.matches(*it)) continue;
    AclMessage m = std::move(*it);
    queue.erase(it);
    return m;
  }
  return std::nullopt;
}

std::size_t PostOffice::mailbox_size(const std::string& agent) const {
  auto box = mailboxes_.find(agent);
  if (box == mailboxes_.end()) throw UnknownAgent("unknown agent: " + agent);
  return box->second.size();
}

std::vector<std::string> PostOffice::take_due_wakes(Tick now) {
  std::vector<std::string> due;
  for (auto it = wake_flags_.begin(); it != wake_flags_.end();) {
    if (it->second < now) {
      due.push_back(it->first);
      it = wake_flags_.erase(it);
    } else {
      ++it;
    }
  }
  return due;
}

void PostOffice::register_service(const DirectoryEntry& entry) {
  if (!agents_.contains(entry.agent.name))
    throw UnknownAgent("cannot register unknown agent: " + entry.agent.name);
  directory_[{entry.agent.name, entry.service_type}] = entry;
}

void PostOffice::deregister_service(const std::string& agent, const std::string& service_type) {
  directory_.erase({agent, service_type});
}

std::vector<DirectoryEntry> PostOffice::search_directory(const std::string& service_type) const {
  std::vector<DirectoryEntry> out;
  for (const auto& [key, entry] : directory_)
    if (key.second == service_type) out.push_back(entry);
  std::sort(out.begin(), out.end(), [](const DirectoryEntry& a, const DirectoryEntry& b) {
    return a.agent.ordinal < b.agent.ordinal;
  });
  return out;
}

void PostOffice::record_failure(const AgentId& agent, const std::string& conversation_id,
                                const std::string& summary, Tick tick) {
  record({0, tick, conversation_id, Performative::Failure, agent.name, agent.name, summary});
}

std::vector<TraceEvent> PostOffice::export_trace(
    const std::optional<std::string>& conversation_id) const {
  if (!conversation_id) return trace_;
  std::vector<TraceEvent> out;
  for (const auto& e : trace_)
    if (e.conversation_id == *conversation_id) out.push_back(e);
  return out;
}

void PostOffice::record(TraceEvent event) {
  event.seq = trace_.size();
  trace_.push_back(std::move(event));
  if (listener_) listener_(trace_.back());
}

}  // namespace agmarket::messaging
