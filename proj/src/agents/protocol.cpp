#include "agmarket/agents/protocol.hpp"


namespace agmarket::agents {

using messaging::BodyTag;
using messaging::Performative;
using model::Role;

namespace {

enum class State { Start, Requested, Called, Presented, Reranking, Amending, Selecting, Reserving, Settled, Closed };

const char* name(State s) {
  switch (s) {
    case State::Start: return "Start";
    case State::Requested: return "Requested";
    case State::Called: return "Called";
    case State::Presented: return "Presented";
    case State::Reranking: return "Reranking";
    case State::Amending: return "Amending";
    case State::Selecting: return "Selecting";
    case State::Reserving: return "Reserving";
    case State::Settled: return "Settled";
    case State::Closed: return "Closed";
  }
  return "?";
}

bool accepting(State s) { return s == State::Presented || s == State::Settled || s == State::Closed; }

struct Rule {
  State from;
  Performative p;
  BodyTag tag;
  Role sender;
  Role receiver;
  State to;
};

constexpr Role C = Role::Customer;
constexpr Role B = Role::Broker;
constexpr Role P = Role::Provider;
using PF = Performative;
using T = BodyTag;
using S = State;

const std::vector<Rule>& rules() {
  static const std::vector<Rule> table = {
      {S::Start, PF::Request, T::TransportRequest, C, B, S::Requested},
      {S::Start, PF::Inform, T::TransportRequest, C, B, S::Requested},
      {S::Start, PF::Request, T::CriteriaUpdate, C, B, S::Reranking},
      {S::Start, PF::Propose, T::Amendment, C, B, S::Amending},
      {S::Start, PF::Inform, T::Selection, C, B, S::Selecting},

      {S::Requested, PF::Cfp, T::TransportRequest, B, P, S::Called},
      {S::Requested, PF::Inform, T::ErrorInfo, B, C, S::Closed},
      {S::Called, PF::Cfp, T::TransportRequest, B, P, S::Called},
      {S::Called, PF::Propose, T::LegOffer, P, B, S::Called},
      {S::Called, PF::Refuse, T::ErrorInfo, P, B, S::Called},
      {S::Called, PF::Inform, T::ProposalSet, B, C, S::Presented},
      {S::Called, PF::Inform, T::ErrorInfo, B, C, S::Closed},
      // Offers arriving after the reply deadline.
      {S::Presented, PF::Propose, T::LegOffer, P, B, S::Presented},
      {S::Presented, PF::Refuse, T::ErrorInfo, P, B, S::Presented},
      {S::Closed, PF::Propose, T::LegOffer, P, B, S::Closed},
      {S::Closed, PF::Refuse, T::ErrorInfo, P, B, S::Closed},

      {S::Reranking, PF::Inform, T::ProposalSet, B, C, S::Closed},
      {S::Reranking, PF::Failure, T::ErrorInfo, B, C, S::Closed},

      {S::Amending, PF::Propose, T::Amendment, B, P, S::Amending},
      {S::Amending, PF::AcceptProposal, T::Amendment, P, B, S::Amending},
      {S::Amending, PF::RejectProposal, T::Amendment, P, B, S::Amending},
      {S::Amending, PF::AcceptProposal, T::ProposalSet, B, C, S::Closed},
      {S::Amending, PF::RejectProposal, T::ProposalSet, B, C, S::Closed},
      {S::Amending, PF::Failure, T::ErrorInfo, B, C, S::Closed},
      {S::Closed, PF::AcceptProposal, T::Amendment, P, B, S::Closed},
      {S::Closed, PF::RejectProposal, T::Amendment, P, B, S::Closed},

      {S::Selecting, PF::Request, T::ReservationRequest, B, P, S::Reserving},
      {S::Selecting, PF::Failure, T::ErrorInfo, B, C, S::Closed},
      {S::Selecting, PF::Inform, T::ReservationResult, B, C, S::Settled},
      {S::Reserving, PF::Request, T::ReservationRequest, B, P, S::Reserving},
      {S::Reserving, PF::Confirm, T::ReservationResult, P, B, S::Reserving},
      {S::Reserving, PF::Refuse, T::ReservationResult, P, B, S::Reserving},
      {S::Reserving, PF::Inform, T::PlanUpdate, P, B, S::Reserving},
      {S::Reserving, PF::Inform, T::ReservationResult, B, C, S::Settled},
      {S::Settled, PF::Confirm, T::ReservationResult, P, B, S::Settled},
      {S::Settled, PF::Refuse, T::ReservationResult, P, B, S::Settled},
      {S::Settled, PF::Inform, T::PlanUpdate, P, B, S::Settled},
      {S::Settled, PF::Request, T::ReservationRequest, B, P, S::Settled},
  };
  return table;
}

}  // namespace

std::optional<BodyTag> summary_tag(const std::string& summary) {
  const auto brace = summary.find('{');
  if (brace == std::string::npos) return std::nullopt;
  const auto prefix = std::string_view(summary).substr(0, brace);
  for (int i = 0; i <= static_cast<int>(BodyTag::ErrorInfo); ++i) {
    auto tag = static_cast<BodyTag>(i);
    if (messaging::to_string(tag) == prefix) return tag;
  }
  return std::nullopt;
}

nlohmann::json ProtocolReport::to_json() const {
  nlohmann::json j;
  j["conversations"] = conversations;
  j["valid"] = valid();
  j["deviations"] = nlohmann::json::array();
  for (const auto& d : deviations)
    j["deviations"].push_back(
        {{"seq", d.seq}, {"conversation_id", d.conversation_id}, {"state", d.state}, {"reason", d.reason}});
  j["unfinished"] = nlohmann::json::array();
  for (const auto& u : unfinished)
    j["unfinished"].push_back({{"conversation_id", u.conversation_id}, {"state", u.state}});
  return j;
}

ProtocolReport check_protocol(std::span<const messaging::TraceEvent> trace, const RoleMap& roles) {
  ProtocolReport report;
  std::map<std::string, State> states;
  std::vector<std::string> order;

  for (const auto& e : trace) {
    if (e.sender == e.receiver) continue;
    auto [it, fresh] = states.try_emplace(e.conversation_id, State::Start);
    if (fresh) order.push_back(e.conversation_id);
    State& state = it->second;
    auto deviation = [&](std::string reason) {
      report.deviations.push_back({e.seq, e.conversation_id, name(state), std::move(reason)});
    };

    auto sr = roles.find(e.sender);
    auto rr = roles.find(e.receiver);
    if (sr == roles.end() || rr == roles.end()) {
      deviation("unknown agent " + (sr == roles.end() ? e.sender : e.receiver));
      continue;
    }
    if (e.performative == Performative::NotUnderstood) {
      if (state == State::Start || state == State::Requested) state = State::Closed;
      continue;
    }
    auto tag = summary_tag(e.content_summary);
    if (!tag) {
      deviation("unreadable content " + e.content_summary);
      continue;
    }
    bool matched = false;
    for (const auto& r : rules()) {
      if (r.from == state && r.p == e.performative && r.tag == *tag && r.sender == sr->second &&
          r.receiver == rr->second) {
        state = r.to;
        matched = true;
        break;
      }
    }
    if (!matched)
      deviation(std::string(messaging::to_string(e.performative)) + " " +
                std::string(messaging::to_string(*tag)) + " " +
                std::string(model::to_string(sr->second)) + " -> " +
                std::string(model::to_string(rr->second)) + " not allowed");
  }

  report.conversations = order.size();
  for (const auto& conv : order) {
    State s = states.at(conv);
    if (s != State::Start && !accepting(s)) report.unfinished.push_back({conv, name(s)});
  }
  return report;
}

}  // namespace agmarket::agents
