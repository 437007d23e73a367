#include "agmarket/agents/provider.hpp"

#include "agmarket/agents/broker.hpp"

namespace agmarket::agents {

using kernel::AgentContext;
using kernel::emit;
using messaging::AclMessage;
using messaging::ErrorInfo;
using messaging::Performative;
using messaging::ReservationOutcome;
using messaging::ReservationRequest;

ProviderAgent::ProviderAgent(std::string actor, market::ProviderPlan plan, ProviderConfig config)
    : MarketAgent(model::Role::Provider, std::move(actor)),
      plan_(std::move(plan)),
      config_(config) {}

void ProviderAgent::on_setup(AgentContext& ctx) {
  if (plan_.provider() != ctx.self()) {
    auto legs = plan_.legs();
    for (auto& leg : legs) leg.provider = ctx.self();
    plan_ = market::ProviderPlan(ctx.self(), std::move(legs));
  }
  ctx.register_service(kProviderService);
}

void ProviderAgent::start_plan(AgentContext& ctx, const Goal& goal) {
  if (goal.name == "treat-cfp") return answer_cfp(ctx, goal);
  if (goal.name == "treat-reservation") return treat_reservation(ctx, goal);
  if (goal.name == "treat-amendment") return answer_amendment(ctx, goal);
  throw NoPlan("provider has no plan for " + goal.name);
}

void ProviderAgent::answer_cfp(AgentContext& ctx, const Goal& goal) {
  const AclMessage origin = goal.message;
  launch(ctx, goal.name, goal.conversation_id(), std::make_shared<PlanInbox>(),
         {{"MatchLegs", [this, origin](AgentContext& c) {
             const auto& request = std::get<market::TransportRequest>(origin.content.body);
             if (auto problem = market::check(request)) {
               reply(c, origin, Performative::NotUnderstood, ErrorInfo{"invalid-request", *problem});
               return emit("invalid");
             }
             if (config_.silent) return emit("ignored");
             std::vector<market::RouteLeg> offered;
             for (const auto& leg : plan_.legs())
               if (leg.capacity >= request.cargo_size && leg.depart >= request.earliest_pickup &&
                   leg.arrive <= request.latest_delivery)
                 offered.push_back(leg);
             if (offered.empty()) {
               reply(c, origin, Performative::Refuse,
                     ErrorInfo{"no-capacity", "no leg fits the request window and cargo"});
               return emit("refused");
             }
             reply(c, origin, Performative::Propose,
                   messaging::LegOffer{request.request_id, std::move(offered)});
             return emit("proposed");
           }}});
}

void ProviderAgent::treat_reservation(AgentContext& ctx, const Goal& goal) {
  const AclMessage origin = goal.message;
  const auto request = std::get<ReservationRequest>(origin.content.body);
  auto touched = std::make_shared<std::vector<std::string>>();

  auto outcome = [this, request](ReservationOutcome::Status status, std::string reason) {
    ReservationOutcome out;
    out.status = status;
    out.reservation_id = request.reservation_id;
    out.request_id = request.request_id;
    out.itinerary_id = request.itinerary_id;
    out.reason = std::move(reason);
    for (const auto& id : request.leg_ids)
      if (plan_.has_leg(id)) out.legs.push_back({id, plan_.leg(id).capacity});
    return out;
  };

  std::map<std::string, kernel::Capability> caps;
  caps["Dispatch"] = [request](AgentContext&) {
    return emit(request.action == ReservationRequest::Action::Reserve ? "reserve" : "release");
  };
  caps["ReserveLegs"] = [this, origin, request, touched, outcome](AgentContext& c) {
    std::string refusal;
    if (request.leg_ids.empty()) refusal = "no legs requested";
    for (const auto& id : request.leg_ids) {
      if (!refusal.empty()) break;
      if (!plan_.has_leg(id)) {
        refusal = "unknown leg " + id;
        break;
      }
      try {
        auto r = plan_.reserve_leg(id, request.units, request.reservation_id + ":" + id);
        if (!r.confirmed()) {
          refusal = "insufficient capacity on " + id;
          break;
        }
        touched->push_back(id);
      } catch (const market::InvalidValue& e) {
        refusal = e.what();
      }
    }
    if (!refusal.empty()) {
      for (const auto& id : *touched) plan_.release_reservation(request.reservation_id + ":" + id);
      touched->clear();
      reply(c, origin, Performative::Refuse, outcome(ReservationOutcome::Status::Refused, refusal));
      return emit("refused");
    }
    reply(c, origin, Performative::Confirm, outcome(ReservationOutcome::Status::Confirmed, ""));
    return emit("reserved");
  };
  caps["ReleaseLegs"] = [this, origin, request, touched, outcome](AgentContext& c) {
    for (const auto& id : request.leg_ids) {
      try {
        plan_.release_reservation(request.reservation_id + ":" + id);
        touched->push_back(id);
      } catch (const market::UnknownReservation&) {
      }
    }
    reply(c, origin, Performative::Confirm, outcome(ReservationOutcome::Status::Released, ""));
    return emit(touched->empty() ? "nothing_released" : "released");
  };
  caps["UpdatePlan"] = [this, origin, touched](AgentContext& c) {
    messaging::PlanUpdate update{c.self(), {}, {}};
    for (const auto& id : *touched) update.legs.push_back(plan_.leg(id));
    send(c, Performative::Inform, origin.sender, origin.conversation_id, std::move(update));
    return emit("updated");
  };
  launch(ctx, goal.name, goal.conversation_id(), std::make_shared<PlanInbox>(), std::move(caps));
}

void ProviderAgent::answer_amendment(AgentContext& ctx, const Goal& goal) {
  const AclMessage origin = goal.message;
  launch(ctx, goal.name, goal.conversation_id(), std::make_shared<PlanInbox>(),
         {{"Decide", [this, origin](AgentContext& c) {
             const auto& body = std::get<messaging::AmendmentBody>(origin.content.body);
             if (!body.share || body.share->provider.name != c.self().name) {
               reply(c, origin, Performative::NotUnderstood,
                     ErrorInfo{"invalid-amendment", "amendment carries no share for " + c.self().name});
               return emit("invalid");
             }
             for (const auto& id : body.share->leg_ids) {
               if (!plan_.has_leg(id)) {
                 reply(c, origin, Performative::RejectProposal, body);
                 return emit("rejected");
               }
             }
             const bool ok = market::accepts(*body.share, config_.policy);
             reply(c, origin, ok ? Performative::AcceptProposal : Performative::RejectProposal, body);
             return emit(ok ? "accepted" : "rejected");
           }}});
}

}  // namespace agmarket::agents
