#include "agmarket/agents/perception.hpp"

namespace agmarket::agents {

using messaging::BodyTag;
using messaging::Performative;

namespace {

void add_notices(PerceptionTable& t) {
  t.push_back({Performative::NotUnderstood, BodyTag::ErrorInfo, kRecordNotice, GoalKind::Initiate});
  t.push_back({Performative::Failure, BodyTag::ErrorInfo, kRecordNotice, GoalKind::Initiate});
  t.push_back({Performative::Inform, BodyTag::ErrorInfo, kRecordNotice, GoalKind::Initiate});
}

}  // namespace

PerceptionTable broker_perception() {
  using K = GoalKind;
  PerceptionTable t{
      {Performative::Request, BodyTag::TransportRequest, "serve-transport-request", K::Initiate},
      {Performative::Inform, BodyTag::TransportRequest, "serve-transport-request", K::Initiate},
      {Performative::Request, BodyTag::CriteriaUpdate, "rerank-proposals", K::Initiate},
      {Performative::Propose, BodyTag::Amendment, "handle-amendment", K::Initiate},
      {Performative::Inform, BodyTag::Selection, "confirm-selection", K::Initiate},
      {Performative::Inform, BodyTag::PlanUpdate, "update-network", K::Initiate},
      {Performative::Propose, BodyTag::LegOffer, "provider-response", K::Continue},
      {Performative::Refuse, BodyTag::ErrorInfo, "provider-response", K::Continue},
      {Performative::AcceptProposal, BodyTag::Amendment, "amendment-reply", K::Continue},
      {Performative::RejectProposal, BodyTag::Amendment, "amendment-reply", K::Continue},
      {Performative::Confirm, BodyTag::ReservationResult, "reservation-reply", K::Continue},
      {Performative::Refuse, BodyTag::ReservationResult, "reservation-reply", K::Continue},
  };
  add_notices(t);
  return t;
}

PerceptionTable provider_perception() {
  PerceptionTable t{
      {Performative::Cfp, BodyTag::TransportRequest, "treat-cfp", GoalKind::Initiate},
      {Performative::Request, BodyTag::ReservationRequest, "treat-reservation", GoalKind::Initiate},
      {Performative::Propose, BodyTag::Amendment, "treat-amendment", GoalKind::Initiate},
  };
  add_notices(t);
  return t;
}

PerceptionTable customer_perception() {
  using K = GoalKind;
  // Customer plans are started from the script, never from a message; an
  // ErrorInfo inform here is the broker's "no solution" answer.
  return {
      {Performative::Inform, BodyTag::ProposalSet, "proposals-received", K::Continue},
      {Performative::Inform, BodyTag::ErrorInfo, "evaluation-failed", K::Continue},
      {Performative::NotUnderstood, BodyTag::ErrorInfo, "request-rejected", K::Continue},
      {Performative::AcceptProposal, BodyTag::ProposalSet, "amendment-outcome", K::Continue},
      {Performative::RejectProposal, BodyTag::ProposalSet, "amendment-outcome", K::Continue},
      {Performative::Inform, BodyTag::ReservationResult, "selection-outcome", K::Continue},
      {Performative::Failure, BodyTag::ErrorInfo, "broker-failure", K::Continue},
  };
}

PerceptionTable perception_for(model::Role role) {
  switch (role) {
    case model::Role::Customer: return customer_perception();
    case model::Role::Broker: return broker_perception();
    case model::Role::Provider: return provider_perception();
  }
  return {};
}

std::vector<Goal> perceive(const PerceptionTable& table, const messaging::AclMessage& m) {
  std::vector<Goal> goals;
  for (const auto& rule : table)
    if (rule.performative == m.performative && rule.body == m.content.tag())
      goals.push_back({rule.goal, rule.kind, m});
  return goals;
}

bool is_notice(const messaging::AclMessage& m) {
  return m.performative == Performative::NotUnderstood || m.performative == Performative::Failure ||
         (m.performative == Performative::Inform && m.content.tag() == BodyTag::ErrorInfo);
}

}  // namespace agmarket::agents
