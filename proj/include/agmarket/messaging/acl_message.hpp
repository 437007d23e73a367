#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agmarket/kernel/agent_id.hpp"
#include "agmarket/messaging/ontology.hpp"

namespace agmarket::messaging {

enum class Performative {
  Request,
  Inform,
  Cfp,
  Propose,
  Refuse,
  AcceptProposal,
  RejectProposal,
  Confirm,
  Failure,
  NotUnderstood,
};

/// FIPA spelling: "request", "accept-proposal", "not-understood", ...
std::string_view to_string(Performative p);
std::optional<Performative> performative_from_string(std::string_view text);

/// Whether the protocol table allows `tag` as the body of `p`.
bool body_consistent(Performative p, BodyTag tag);

struct AclMessage {
  Performative performative = Performative::Inform;
  AgentId sender;
  std::vector<AgentId> receivers;
  std::string conversation_id;
  std::optional<std::string> reply_with;
  std::optional<std::string> in_reply_to;
  ContentPayload content;
  Tick sent_tick = 0;
};

/// Throws std::invalid_argument when the message breaks an envelope
/// invariant (no receivers, sender among receivers, body inconsistent with
/// the performative).
void validate_envelope(const AclMessage& m);

/// Reply addressed to the original sender, same conversation, in_reply_to
/// set from the original's reply_with.
AclMessage make_reply(const AclMessage& original, Performative performative, ContentPayload content);

/// Selective-receive filter; unset fields match anything.
struct MessagePattern {
  std::optional<Performative> performative{};
  std::optional<std::string> conversation_id{};
  std::optional<std::string> sender{};

  bool matches(const AclMessage& m) const;
};

}  // namespace agmarket::messaging
