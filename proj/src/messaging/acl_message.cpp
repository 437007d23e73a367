#include "agmarket/messaging/acl_message.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

namespace agmarket::messaging {

namespace {

constexpr std::array<std::pair<Performative, std::string_view>, 10> kNames{{
    {Performative::Request, "request"},
    {Performative::Inform, "inform"},
    {Performative::Cfp, "cfp"},
    {Performative::Propose, "propose"},
    {Performative::Refuse, "refuse"},
    {Performative::AcceptProposal, "accept-proposal"},
    {Performative::RejectProposal, "reject-proposal"},
    {Performative::Confirm, "confirm"},
    {Performative::Failure, "failure"},
    {Performative::NotUnderstood, "not-understood"},
}};

}  // namespace

std::string_view to_string(Performative p) {
  for (const auto& [value, name] : kNames)
    if (value == p) return name;
  return "?";
}

std::optional<Performative> performative_from_string(std::string_view text) {
  for (const auto& [value, name] : kNames)
    if (name == text) return value;
  return std::nullopt;
}

bool body_consistent(Performative p, BodyTag tag) {
  using B = BodyTag;
  switch (p) {
    case Performative::Request:
      return tag == B::TransportRequest || tag == B::CriteriaUpdate ||
             tag == B::ReservationRequest;
    case Performative::Inform:
      return tag == B::TransportRequest || tag == B::ProposalSet || tag == B::Selection ||
             tag == B::ReservationResult || tag == B::PlanUpdate || tag == B::ErrorInfo;
    case Performative::Cfp:
      return tag == B::TransportRequest;
    case Performative::Propose:
      return tag == B::LegOffer || tag == B::Amendment;
    case Performative::Refuse:
      return tag == B::ErrorInfo || tag == B::ReservationResult;
    case Performative::AcceptProposal:
    case Performative::RejectProposal:
      return tag == B::Amendment || tag == B::ProposalSet;
    case Performative::Confirm:
      return tag == B::ReservationResult;
    case Performative::Failure:
    case Performative::NotUnderstood:
      return tag == B::ErrorInfo;
  }
  return false;
}

void validate_envelope(const AclMessage& m) {
  if (m.receivers.empty()) throw std::invalid_argument("message has no receivers");
  if (m.sender.name.empty()) throw std::invalid_argument("message has no sender");
  for (const auto& r : m.receivers)
    if (r.name == m.sender.name) throw std::invalid_argument("sender listed as receiver");
  if (!body_consistent(m.performative, m.content.tag()))
    throw std::invalid_argument(std::string(to_string(m.performative)) + " cannot carry " +
                                std::string(to_string(m.content.tag())));
}

AclMessage make_reply(const AclMessage& original, Performative performative,
                      ContentPayload content) {
  AclMessage reply;
  reply.performative = performative;
  reply.receivers = {original.sender};
  reply.conversation_id = original.conversation_id;
  reply.in_reply_to = original.reply_with;
  reply.content = std::move(content);
  return reply;
}

bool MessagePattern::matches(const AclMessage& m) const {
  if (performative && *performative != m.performative) return false;
  if (conversation_id && *conversation_id != m.conversation_id) return false;
  if (sender && *sender != m.sender.name) return false;
  return true;
}

}  // namespace agmarket::messaging
