#include "agmarket/agents/broker.hpp"

#include <algorithm>
#include <set>

#include "agmarket/market/amendment.hpp"

namespace agmarket::agents {

using kernel::AgentContext;
using kernel::Capability;
using kernel::emit;
using kernel::wait;
using messaging::AclMessage;
using messaging::ErrorInfo;
using messaging::Performative;
using messaging::ReservationOutcome;
using messaging::ReservationRequest;

std::string_view to_string(RequestRecord::Phase phase) {
  switch (phase) {
    case RequestRecord::Phase::Evaluating: return "evaluating";
    case RequestRecord::Phase::Presented: return "presented";
    case RequestRecord::Phase::NoSolution: return "no-solution";
    case RequestRecord::Phase::Rejected: return "rejected";
  }
  return "?";
}

BrokerAgent::BrokerAgent(std::string actor, BrokerConfig config)
    : MarketAgent(model::Role::Broker, std::move(actor)), config_(std::move(config)) {}

const RequestRecord* BrokerAgent::find_request(const std::string& request_id) const {
  auto it = requests_.find(request_id);
  return it == requests_.end() ? nullptr : &it->second;
}

void BrokerAgent::on_setup(AgentContext& ctx) { ctx.register_service(kBrokerService); }

void BrokerAgent::start_plan(AgentContext& ctx, const Goal& goal) {
  if (goal.name == "serve-transport-request") return evaluate(ctx, goal);
  if (goal.name == "confirm-selection") return handle_selection(ctx, goal);
  if (goal.name == "handle-amendment") return handle_amendment(ctx, goal);
  if (goal.name == "rerank-proposals") return rerank(ctx, goal);
  if (goal.name == "update-network") return update_network(ctx, goal);
  throw NoPlan("broker has no plan for " + goal.name);
}

void BrokerAgent::cache_legs(const std::string& provider, const std::vector<market::RouteLeg>& legs) {
  auto& known = network_[provider];
  for (const auto& leg : legs) known[leg.leg_id] = leg;
}

// ---- Evaluate_Customer_Requirements

void BrokerAgent::evaluate(AgentContext& ctx, const Goal& goal) {
  struct Memory {
    AclMessage origin;
    market::TransportRequest request;
    std::vector<AgentId> providers;
    std::set<std::string> replied;
    std::vector<market::RouteLeg> offered;
    std::optional<Tick> deadline;
    std::shared_ptr<PlanInbox> inbox = std::make_shared<PlanInbox>();
  };
  auto mem = std::make_shared<Memory>();
  mem->origin = goal.message;
  mem->request = std::get<market::TransportRequest>(goal.message.content.body);
  mem->request.customer = goal.message.sender;
  const std::string conv = goal.conversation_id();
  const std::string rid = mem->request.request_id;

  auto fail_to_customer = [this, mem, rid](AgentContext& c, RequestRecord::Phase phase,
                                           const std::string& code, const std::string& why) {
    auto& rec = requests_.at(rid);
    rec.phase = phase;
    rec.reason = why;
    send(c, Performative::Inform, mem->origin.sender, mem->origin.conversation_id,
         ErrorInfo{code, why});
  };

  std::map<std::string, Capability> caps;
  caps["ValidateRequirements"] = [this, mem, conv, rid](AgentContext& c) {
    auto problem = market::check(mem->request);
    if (!problem && rid.empty()) problem = "request_id is empty";
    if (!problem && requests_.contains(rid)) problem = "duplicate request_id " + rid;
    if (problem) {
      if (!rid.empty() && !requests_.contains(rid)) {
        RequestRecord rec;
        rec.request = mem->request;
        rec.customer = mem->origin.sender;
        rec.conversation_id = conv;
        rec.phase = RequestRecord::Phase::Rejected;
        rec.reason = *problem;
        requests_.emplace(rid, std::move(rec));
      }
      reply(c, mem->origin, Performative::NotUnderstood, ErrorInfo{"invalid-request", *problem});
      return emit("invalid");
    }
    RequestRecord rec;
    rec.request = mem->request;
    rec.customer = mem->origin.sender;
    rec.conversation_id = conv;
    requests_.emplace(rid, std::move(rec));
    return emit("valid");
  };
  caps["QueryProviders"] = [this, mem, conv, rid, fail_to_customer](AgentContext& c) {
    auto entries = c.search(kProviderService);
    if (entries.empty()) {
      fail_to_customer(c, RequestRecord::Phase::NoSolution, "no-providers",
                       "no transport provider is registered");
      return emit("no_providers");
    }
    AclMessage cfp;
    cfp.performative = Performative::Cfp;
    cfp.conversation_id = conv;
    cfp.content = messaging::make_payload(mem->request);
    for (const auto& e : entries) {
      cfp.receivers.push_back(e.agent);
      mem->providers.push_back(e.agent);
    }
    expect(conv, "provider-response", mem->inbox);
    c.send(std::move(cfp));
    requests_.at(rid).providers_queried = mem->providers.size();
    if (config_.reply_deadline) mem->deadline = c.now() + *config_.reply_deadline;
    return emit("queried");
  };
  caps["CollectResponses"] = [this, mem, rid, fail_to_customer](AgentContext& c) {
    auto& rec = requests_.at(rid);
    while (auto m = mem->inbox->pop()) {
      const auto& who = m->sender.name;
      bool queried = std::any_of(mem->providers.begin(), mem->providers.end(),
                                 [&](const AgentId& p) { return p.name == who; });
      if (!queried || !mem->replied.insert(who).second) continue;
      const auto* offer = m->content.get_if<messaging::LegOffer>();
      if (!offer) continue;
      std::vector<market::RouteLeg> accepted;
      for (auto leg : offer->legs) {
        leg.provider = m->sender;
        try {
          market::validate(leg);
        } catch (const market::InvalidValue&) {
          continue;
        }
        bool duplicate = std::any_of(mem->offered.begin(), mem->offered.end(),
                                     [&](const market::RouteLeg& l) { return l.leg_id == leg.leg_id; });
        if (duplicate) continue;
        accepted.push_back(leg);
        mem->offered.push_back(std::move(leg));
      }
      cache_legs(who, accepted);
    }
    rec.providers_replied = mem->replied.size();
    const bool all = mem->replied.size() == mem->providers.size();
    const bool expired = mem->deadline && c.now() >= *mem->deadline;
    if (all || expired) {
      if (mem->offered.empty()) {
        fail_to_customer(c, RequestRecord::Phase::NoSolution, "no-offers",
                         "no provider offered a usable leg");
        return emit("no_offers");
      }
      return emit(all ? "all_replied" : "deadline");
    }
    if (mem->deadline) c.block_until(*mem->deadline);
    return wait();
  };
  caps["ComposeAndRank"] = [this, mem, rid, fail_to_customer](AgentContext& c) {
    auto result = market::compose_itineraries(mem->request, mem->offered, config_.k_best,
                                              config_.limits);
    if (result.no_solution()) {
      fail_to_customer(c, RequestRecord::Phase::NoSolution, "no-solution",
                       "the offered legs cannot be chained into a feasible itinerary");
      return emit("no_solution");
    }
    requests_.at(rid).book = market::ProposalBook(std::move(result.itineraries), mem->request.weights);
    return emit("ranked");
  };
  caps["PresentResults"] = [this, mem, rid](AgentContext& c) {
    auto& rec = requests_.at(rid);
    rec.phase = RequestRecord::Phase::Presented;
    send(c, Performative::Inform, mem->origin.sender, mem->origin.conversation_id,
         messaging::ProposalSet{rid, rec.book.weights(), rec.book.ranked()});
    return emit("presented");
  };
  launch(ctx, goal.name, conv, mem->inbox, std::move(caps));
}

// ---- Handle_Selection

void BrokerAgent::handle_selection(AgentContext& ctx, const Goal& goal) {
  struct Memory {
    AclMessage origin;
    messaging::Selection selection;
    market::CargoUnits units = 0;
    std::vector<std::pair<AgentId, std::vector<std::string>>> groups;
    std::set<std::string> confirmed;
    std::set<std::string> refused;
    std::set<std::string> releasing;
    std::set<std::string> released;
    std::optional<Tick> deadline;
    std::string reason;
    std::shared_ptr<PlanInbox> inbox = std::make_shared<PlanInbox>();
  };
  auto mem = std::make_shared<Memory>();
  mem->origin = goal.message;
  mem->selection = std::get<messaging::Selection>(goal.message.content.body);
  const std::string conv = goal.conversation_id();
  const std::string reservation_id = conv + "#1";

  auto provider_reservation = [reservation_id](const std::string& provider) {
    return reservation_id + "/" + provider;
  };
  auto legs_of = [mem](const std::string& provider) -> const std::vector<std::string>& {
    for (const auto& [p, legs] : mem->groups)
      if (p.name == provider) return legs;
    static const std::vector<std::string> none;
    return none;
  };
  auto send_reservation = [this, mem, conv, provider_reservation, legs_of](
                              AgentContext& c, ReservationRequest::Action action,
                              const AgentId& provider) {
    ReservationRequest r;
    r.action = action;
    r.reservation_id = provider_reservation(provider.name);
    r.request_id = mem->selection.request_id;
    r.itinerary_id = mem->selection.itinerary_id;
    r.leg_ids = legs_of(provider.name);
    r.units = mem->units;
    send(c, Performative::Request, provider, conv, std::move(r));
  };

  std::map<std::string, Capability> caps;
  caps["ResolveSelection"] = [this, mem](AgentContext& c) {
    const auto& sel = mem->selection;
    auto it = requests_.find(sel.request_id);
    const market::Proposal* p = it == requests_.end() ? nullptr : it->second.book.find(sel.itinerary_id);
    if (!p || it->second.customer.name != mem->origin.sender.name) {
      reply(c, mem->origin, Performative::Failure,
            ErrorInfo{"unknown-proposal", "no proposal " + sel.itinerary_id + " for " + sel.request_id});
      return emit("unknown");
    }
    auto& rec = it->second;
    if (market::is_decided(p->status) || rec.book.has_selection()) {
      reply(c, mem->origin, Performative::Failure,
            ErrorInfo{"already-decided", "request " + sel.request_id + " already has a selection"});
      return emit("already_decided");
    }
    rec.book.set_status(sel.itinerary_id, market::ProposalStatus::Selected);
    mem->units = rec.request.cargo_size;
    for (const auto& leg : p->itinerary.legs) {
      auto g = std::find_if(mem->groups.begin(), mem->groups.end(),
                            [&](const auto& kv) { return kv.first.name == leg.provider.name; });
      if (g == mem->groups.end()) {
        mem->groups.push_back({leg.provider, {}});
        g = std::prev(mem->groups.end());
      }
      g->second.push_back(leg.leg_id);
    }
    return emit("resolved");
  };
  caps["RequestReservations"] = [this, mem, conv, send_reservation](AgentContext& c) {
    expect(conv, "reservation-reply", mem->inbox);
    for (const auto& [provider, legs] : mem->groups) {
      const AgentId* live = c.lookup(provider.name);
      if (!live) {
        mem->refused.insert(provider.name);
        if (mem->reason.empty()) mem->reason = provider.name + ": provider unavailable";
        continue;
      }
      send_reservation(c, ReservationRequest::Action::Reserve, *live);
    }
    if (config_.reply_deadline) mem->deadline = c.now() + *config_.reply_deadline;
    return emit("requested");
  };
  caps["CollectConfirmations"] = [mem](AgentContext& c) {
    while (auto m = mem->inbox->pop()) {
      const auto* outcome = m->content.get_if<ReservationOutcome>();
      const auto& who = m->sender.name;
      if (!outcome || mem->confirmed.contains(who) || mem->refused.contains(who)) continue;
      if (outcome->status == ReservationOutcome::Status::Confirmed) {
        mem->confirmed.insert(who);
      } else {
        mem->refused.insert(who);
        if (mem->reason.empty()) mem->reason = who + ": " + outcome->reason;
      }
    }
    if (mem->confirmed.size() + mem->refused.size() == mem->groups.size())
      return emit(mem->refused.empty() ? "all_confirmed" : "refused");
    if (mem->deadline && c.now() >= *mem->deadline) {
      if (mem->reason.empty()) mem->reason = "reservation reply deadline passed";
      return emit("timeout");
    }
    if (mem->deadline) c.block_until(*mem->deadline);
    return wait();
  };
  caps["InformConfirmed"] = [this, mem, reservation_id](AgentContext& c) {
    auto& rec = requests_.at(mem->selection.request_id);
    rec.book.set_status(mem->selection.itinerary_id, market::ProposalStatus::Confirmed);
    ReservationOutcome out;
    out.status = ReservationOutcome::Status::Confirmed;
    out.reservation_id = reservation_id;
    out.request_id = mem->selection.request_id;
    out.itinerary_id = mem->selection.itinerary_id;
    send(c, Performative::Inform, mem->origin.sender, mem->origin.conversation_id, std::move(out));
    return emit("informed");
  };
  caps["Rollback"] = [mem, send_reservation](AgentContext& c) {
    for (const auto& [provider, legs] : mem->groups) {
      if (!mem->confirmed.contains(provider.name)) continue;
      if (const AgentId* live = c.lookup(provider.name)) {
        send_reservation(c, ReservationRequest::Action::Release, *live);
        mem->releasing.insert(provider.name);
      }
    }
    return emit(mem->releasing.empty() ? "nothing_to_release" : "releasing");
  };
  caps["CollectReleases"] = [mem, send_reservation](AgentContext& c) {
    while (auto m = mem->inbox->pop()) {
      const auto* outcome = m->content.get_if<ReservationOutcome>();
      if (!outcome) continue;
      const auto& who = m->sender.name;
      if (outcome->status == ReservationOutcome::Status::Released) {
        mem->released.insert(who);
      } else if (outcome->status == ReservationOutcome::Status::Confirmed &&
                 !mem->releasing.contains(who)) {
        // A reservation confirmed after the deadline must still be undone.
        send_reservation(c, ReservationRequest::Action::Release, m->sender);
        mem->releasing.insert(who);
      }
    }
    if (std::includes(mem->released.begin(), mem->released.end(), mem->releasing.begin(),
                      mem->releasing.end()))
      return emit("released");
    if (mem->deadline && c.now() >= *mem->deadline + 1) return emit("timeout");
    if (mem->deadline) c.block_until(*mem->deadline + 1);
    return wait();
  };
  caps["InformFailed"] = [this, mem, reservation_id](AgentContext& c) {
    auto& rec = requests_.at(mem->selection.request_id);
    rec.book.set_status(mem->selection.itinerary_id, market::ProposalStatus::Failed);
    ReservationOutcome out;
    out.status = ReservationOutcome::Status::Failed;
    out.reservation_id = reservation_id;
    out.request_id = mem->selection.request_id;
    out.itinerary_id = mem->selection.itinerary_id;
    out.reason = mem->reason;
    send(c, Performative::Inform, mem->origin.sender, mem->origin.conversation_id, std::move(out));
    return emit("informed");
  };
  launch(ctx, goal.name, conv, mem->inbox, std::move(caps));
}

// ---- Handle_Amendment

void BrokerAgent::handle_amendment(AgentContext& ctx, const Goal& goal) {
  struct Memory {
    AclMessage origin;
    market::Amendment amendment;
    std::vector<market::AmendmentShare> shares;
    std::map<std::string, bool> decisions;
    std::optional<Tick> deadline;
    std::shared_ptr<PlanInbox> inbox = std::make_shared<PlanInbox>();
  };
  auto mem = std::make_shared<Memory>();
  mem->origin = goal.message;
  mem->amendment = std::get<messaging::AmendmentBody>(goal.message.content.body).amendment;
  const std::string conv = goal.conversation_id();

  std::map<std::string, Capability> caps;
  caps["ResolveProposal"] = [this, mem](AgentContext& c) {
    const auto& a = mem->amendment;
    auto it = requests_.find(a.request_id);
    const market::Proposal* p = it == requests_.end() ? nullptr : it->second.book.find(a.itinerary_id);
    if (!p || it->second.customer.name != mem->origin.sender.name) {
      reply(c, mem->origin, Performative::Failure,
            ErrorInfo{"unknown-proposal", "no proposal " + a.itinerary_id + " for " + a.request_id});
      return emit("unknown");
    }
    try {
      market::validate(a);
    } catch (const market::InvalidValue& e) {
      reply(c, mem->origin, Performative::Failure, ErrorInfo{"invalid-amendment", e.what()});
      return emit("invalid");
    }
    if (market::is_decided(p->status)) {
      reply(c, mem->origin, Performative::Failure,
            ErrorInfo{"already-decided", "proposal " + a.itinerary_id + " is " +
                                             std::string(market::to_string(p->status))});
      return emit("already_decided");
    }
    mem->shares = market::split_amendment(*p, a);
    return emit("resolved");
  };
  caps["ForwardAmendment"] = [this, mem, conv](AgentContext& c) {
    expect(conv, "amendment-reply", mem->inbox);
    for (const auto& share : mem->shares) {
      const AgentId* live = c.lookup(share.provider.name);
      if (!live) {
        mem->decisions[share.provider.name] = false;
        continue;
      }
      send(c, Performative::Propose, *live, conv, messaging::AmendmentBody{mem->amendment, share});
    }
    if (config_.reply_deadline) mem->deadline = c.now() + *config_.reply_deadline;
    return emit("forwarded");
  };
  caps["CollectAnswers"] = [mem](AgentContext& c) {
    while (auto m = mem->inbox->pop()) {
      const auto& who = m->sender.name;
      bool party = std::any_of(mem->shares.begin(), mem->shares.end(),
                               [&](const auto& s) { return s.provider.name == who; });
      if (!party || mem->decisions.contains(who)) continue;
      mem->decisions[who] = m->performative == Performative::AcceptProposal;
    }
    if (mem->decisions.size() == mem->shares.size()) return emit("answered");
    if (mem->deadline && c.now() >= *mem->deadline) return emit("timeout");
    if (mem->deadline) c.block_until(*mem->deadline);
    return wait();
  };
  caps["InformOutcome"] = [this, mem](AgentContext& c) {
    auto& rec = requests_.at(mem->amendment.request_id);
    const market::Proposal* p = rec.book.find(mem->amendment.itinerary_id);
    market::AmendmentOutcome outcome;
    try {
      outcome = market::apply_amendment(*p, mem->amendment, [&](const market::AmendmentShare& s) {
        auto d = mem->decisions.find(s.provider.name);
        return d != mem->decisions.end() && d->second;
      });
    } catch (const market::AlreadyDecided& e) {
      reply(c, mem->origin, Performative::Failure, ErrorInfo{"already-decided", e.what()});
      return emit("already_decided");
    }
    if (outcome.accepted()) rec.book.update(outcome.proposal);
    reply(c, mem->origin,
          outcome.accepted() ? Performative::AcceptProposal : Performative::RejectProposal,
          messaging::ProposalSet{mem->amendment.request_id, rec.book.weights(), rec.book.ranked()});
    return emit("informed");
  };
  launch(ctx, goal.name, conv, mem->inbox, std::move(caps));
}

// ---- Rerank_Proposals

void BrokerAgent::rerank(AgentContext& ctx, const Goal& goal) {
  auto inbox = std::make_shared<PlanInbox>();
  const AclMessage origin = goal.message;
  launch(ctx, goal.name, goal.conversation_id(), inbox,
         {{"Rerank", [this, origin, inbox](AgentContext& c) {
             const auto& update = std::get<messaging::CriteriaUpdate>(origin.content.body);
             auto it = requests_.find(update.request_id);
             if (it == requests_.end() || it->second.customer.name != origin.sender.name ||
                 it->second.phase != RequestRecord::Phase::Presented) {
               reply(c, origin, Performative::Failure,
                     ErrorInfo{"unknown-request", "no presented proposals for " + update.request_id});
               return emit("unknown");
             }
             auto& book = it->second.book;
             book.rerank(update.weights);
             reply(c, origin, Performative::Inform,
                   messaging::ProposalSet{update.request_id, book.weights(), book.ranked()});
             return emit("reranked");
           }}});
}

// ---- Update_Network_Cache

void BrokerAgent::update_network(AgentContext& ctx, const Goal& goal) {
  auto inbox = std::make_shared<PlanInbox>();
  const AclMessage origin = goal.message;
  launch(ctx, goal.name, goal.conversation_id(), inbox,
         {{"ApplyUpdate", [this, origin, inbox](AgentContext&) {
             const auto& update = std::get<messaging::PlanUpdate>(origin.content.body);
             if (update.provider.name != origin.sender.name) return emit("rejected");
             auto legs = update.legs;
             for (auto& leg : legs) leg.provider = origin.sender;
             cache_legs(origin.sender.name, legs);
             auto& known = network_[origin.sender.name];
             for (const auto& id : update.removed) known.erase(id);
             return emit("applied");
           }}});
}

}  // namespace agmarket::agents
