#include "agmarket/agents/customer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agmarket/agents/broker.hpp"

namespace agmarket::agents {

using kernel::AgentContext;
using kernel::CapabilityResult;
using kernel::emit;
using kernel::wait;
using messaging::AclMessage;
using messaging::ErrorInfo;
using messaging::Performative;
using Status = RequestView::Status;

namespace {

const char* const kContinueGoals[] = {"proposals-received", "evaluation-failed", "request-rejected",
                                      "amendment-outcome",  "selection-outcome", "broker-failure"};

std::string error_text(const AclMessage& m) {
  if (const auto* e = m.content.get_if<ErrorInfo>()) return e->code + ": " + e->message;
  return messaging::summarize(m.content);
}

}  // namespace

bool RequestView::finished() const {
  switch (status) {
    case Status::Confirmed:
    case Status::Failed:
    case Status::NoSolution:
    case Status::Rejected:
    case Status::Closed:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(RequestView::Status status) {
  switch (status) {
    case Status::Queued: return "queued";
    case Status::AwaitingProposals: return "awaiting-proposals";
    case Status::Reviewing: return "reviewing";
    case Status::AwaitingAmendment: return "awaiting-amendment";
    case Status::AwaitingOutcome: return "awaiting-outcome";
    case Status::Confirmed: return "confirmed";
    case Status::Failed: return "failed";
    case Status::NoSolution: return "no-solution";
    case Status::Rejected: return "rejected";
    case Status::Closed: return "closed";
  }
  return "?";
}

struct CustomerAgent::Session {
  std::string request_id;
  std::deque<ScriptStep> steps;
  std::shared_ptr<PlanInbox> inbox = std::make_shared<PlanInbox>();
  AgentId broker;
  std::string conversation;
  int counter = 0;
  std::optional<kernel::BehaviourHandle> handle;
};

CustomerAgent::CustomerAgent(std::string actor, std::vector<ScriptEntry> script, bool interactive)
    : MarketAgent(model::Role::Customer, std::move(actor)), interactive_(interactive) {
  for (auto& entry : script) {
    const auto rid = entry.request.request_id;
    if (views_.contains(rid)) throw DuplicateRequest("duplicate request_id " + rid);
    views_[rid].request = entry.request;
    views_[rid].weights = entry.request.weights;
    queue_.push_back(std::move(entry));
  }
}

const RequestView* CustomerAgent::view(const std::string& request_id) const {
  auto it = views_.find(request_id);
  return it == views_.end() ? nullptr : &it->second;
}

void CustomerAgent::submit(kernel::Runtime& rt, ScriptEntry entry) {
  const auto rid = entry.request.request_id;
  if (views_.contains(rid)) throw DuplicateRequest("duplicate request_id " + rid);
  views_[rid].request = entry.request;
  views_[rid].weights = entry.request.weights;
  queue_.push_back(std::move(entry));
  if (launcher_) rt.wake(*launcher_);
}

void CustomerAgent::push_step(kernel::Runtime& rt, const std::string& request_id, ScriptStep step) {
  auto v = views_.find(request_id);
  if (v == views_.end()) throw std::out_of_range("unknown request " + request_id);
  if (v->second.finished())
    throw kernel::PreconditionViolation("request " + request_id + " is already " +
                                        std::string(to_string(v->second.status)));
  auto s = sessions_.find(request_id);
  if (s == sessions_.end()) {
    for (auto& entry : queue_)
      if (entry.request.request_id == request_id) entry.steps.push_back(std::move(step));
    return;
  }
  s->second->steps.push_back(std::move(step));
  if (s->second->handle) rt.wake(*s->second->handle);
}

void CustomerAgent::on_setup(AgentContext& ctx) {
  launcher_ = ctx.add_behaviour(
      std::make_unique<kernel::CyclicBehaviour>("launcher", [this](AgentContext& c) { launcher(c); }));
}

void CustomerAgent::start_plan(AgentContext&, const Goal& goal) {
  throw NoPlan("customer plans start from its script, not from " + goal.name);
}

void CustomerAgent::launcher(AgentContext& ctx) {
  Tick next = std::numeric_limits<Tick>::max();
  for (auto it = queue_.begin(); it != queue_.end();) {
    if (it->start_at <= ctx.now()) {
      auto entry = std::move(*it);
      it = queue_.erase(it);
      begin(ctx, std::move(entry));
    } else {
      next = std::min(next, it->start_at);
      ++it;
    }
  }
  if (next != std::numeric_limits<Tick>::max())
    ctx.block_until(next);
  else
    ctx.block();
}

std::string CustomerAgent::next_conversation(Session& s) {
  s.conversation = s.request_id + "/" + std::to_string(++s.counter);
  for (const char* goal : kContinueGoals) expect(s.conversation, goal, s.inbox);
  views_[s.request_id].conversations.push_back(s.conversation);
  return s.conversation;
}

void CustomerAgent::begin(AgentContext& ctx, ScriptEntry entry) {
  auto s = std::make_shared<Session>();
  s->request_id = entry.request.request_id;
  s->steps.assign(entry.steps.begin(), entry.steps.end());
  sessions_[s->request_id] = s;
  entry.request.customer = ctx.self();
  const auto request = entry.request;
  const auto rid = s->request_id;

  std::map<std::string, kernel::Capability> caps;
  caps["DecideRequirements"] = [this, s, request, rid](AgentContext& c) {
    auto& v = views_[rid];
    auto brokers = c.search(kBrokerService);
    if (brokers.empty()) {
      v.status = Status::Failed;
      v.detail = "no broker registered";
      return emit("no_broker");
    }
    s->broker = brokers.front().agent;
    const auto conv = next_conversation(*s);
    send(c, Performative::Request, s->broker, conv, request);
    v.status = Status::AwaitingProposals;
    return emit("requested");
  };
  caps["AwaitProposals"] = [this, s, rid](AgentContext&) {
    auto& v = views_[rid];
    while (auto m = s->inbox->pop()) {
      if (m->conversation_id != s->conversation) continue;
      if (const auto* ps = m->content.get_if<messaging::ProposalSet>()) {
        v.proposals = ps->proposals;
        v.weights = ps->weights;
        v.status = Status::Reviewing;
        return emit("proposals");
      }
      if (m->performative == Performative::NotUnderstood) {
        v.status = Status::Rejected;
        v.detail = error_text(*m);
        return emit("rejected");
      }
      if (m->performative == Performative::Inform) {
        v.status = Status::NoSolution;
        v.detail = error_text(*m);
        return emit("no_solution");
      }
      if (m->performative == Performative::Failure) {
        // A refused re-ranking leaves the previous ranking in place.
        v.detail = error_text(*m);
        v.status = Status::Reviewing;
        return emit("proposals");
      }
    }
    return wait();
  };
  caps["ReviewProposals"] = [this, s](AgentContext& c) { return review(c, *s); };
  caps["AwaitAmendment"] = [this, s, rid](AgentContext&) {
    auto& v = views_[rid];
    while (auto m = s->inbox->pop()) {
      if (m->conversation_id != s->conversation) continue;
      if (const auto* ps = m->content.get_if<messaging::ProposalSet>()) {
        v.proposals = ps->proposals;
        v.weights = ps->weights;
        v.last_amendment_accepted = m->performative == Performative::AcceptProposal;
        v.status = Status::Reviewing;
        return emit("answered");
      }
      if (m->performative == Performative::Failure || m->performative == Performative::NotUnderstood) {
        v.last_amendment_accepted = false;
        v.detail = error_text(*m);
        v.status = Status::Reviewing;
        return emit("failed");
      }
    }
    return wait();
  };
  caps["AwaitOutcome"] = [this, s, rid](AgentContext&) {
    auto& v = views_[rid];
    while (auto m = s->inbox->pop()) {
      if (m->conversation_id != s->conversation) continue;
      if (const auto* out = m->content.get_if<messaging::ReservationOutcome>()) {
        v.reservation_id = out->reservation_id;
        if (out->status == messaging::ReservationOutcome::Status::Confirmed) {
          v.status = Status::Confirmed;
          return emit("confirmed");
        }
        v.status = Status::Failed;
        v.detail = out->reason;
        return emit("refused");
      }
      if (m->performative == Performative::Failure || m->performative == Performative::NotUnderstood) {
        v.status = Status::Failed;
        v.detail = error_text(*m);
        return emit("failed");
      }
    }
    return wait();
  };

  s->handle = launch(ctx, "itinerary-be-decided", rid, s->inbox, std::move(caps),
                     [this, rid](AgentContext&, const kernel::FsmRun& run) {
                       auto& v = views_[rid];
                       if (!v.finished())
                         v.status = run.outcome() == kernel::Outcome::Ok ? Status::Closed : Status::Failed;
                       sessions_[rid]->handle.reset();
                     });
}

CapabilityResult CustomerAgent::review(AgentContext& ctx, Session& s) {
  auto& v = views_[s.request_id];
  while (!s.steps.empty()) {
    ScriptStep step = std::move(s.steps.front());
    s.steps.pop_front();
    ++v.steps_done;

    if (auto* rw = std::get_if<ReweightStep>(&step)) {
      const auto conv = next_conversation(s);
      send(ctx, Performative::Request, s.broker, conv,
           messaging::CriteriaUpdate{s.request_id, rw->weights});
      v.status = Status::AwaitingProposals;
      return emit("reweighted");
    }

    if (auto* am = std::get_if<AmendStep>(&step)) {
      const market::Proposal* target = nullptr;
      if (am->itinerary_id) {
        for (const auto& p : v.proposals)
          if (p.itinerary.itinerary_id == *am->itinerary_id) target = &p;
      } else if (am->index < v.proposals.size()) {
        target = &v.proposals[am->index];
      }
      if (!target) {
        v.detail = "amend: no such proposal";
        continue;
      }
      const auto& p = *target;
      market::Amendment a;
      a.request_id = s.request_id;
      a.itinerary_id = p.itinerary.itinerary_id;
      a.target_delivery_time = am->target_delivery_time;
      a.target_insurance = am->target_insurance;
      a.target_cost = am->target_cost;
      if (am->cost_factor)
        a.target_cost = market::Money::from_cents(static_cast<std::int64_t>(
            std::llround(static_cast<double>(p.itinerary.total_cost.cents()) * *am->cost_factor)));
      const auto conv = next_conversation(s);
      send(ctx, Performative::Propose, s.broker, conv, messaging::AmendmentBody{a, std::nullopt});
      v.status = Status::AwaitingAmendment;
      return emit("amending");
    }

    const auto& sel = std::get<SelectStep>(step);
    std::optional<std::string> chosen;
    switch (sel.kind) {
      case SelectStep::Kind::None:
        return emit("done");
      case SelectStep::Kind::BestScore:
        if (!v.proposals.empty()) chosen = v.proposals.front().itinerary.itinerary_id;
        break;
      case SelectStep::Kind::Index:
        if (sel.index < v.proposals.size()) chosen = v.proposals[sel.index].itinerary.itinerary_id;
        break;
      case SelectStep::Kind::ItineraryId:
        chosen = sel.itinerary_id;
        break;
      case SelectStep::Kind::Legs:
        for (const auto& p : v.proposals) {
          std::vector<std::string> ids;
          for (const auto& leg : p.itinerary.legs) ids.push_back(leg.leg_id);
          if (ids == sel.legs) chosen = p.itinerary.itinerary_id;
        }
        break;
    }
    if (!chosen) {
      v.detail = "select: no matching proposal";
      continue;
    }
    v.selected = *chosen;
    const auto conv = next_conversation(s);
    send(ctx, Performative::Inform, s.broker, conv, messaging::Selection{s.request_id, *chosen});
    v.status = Status::AwaitingOutcome;
    return emit("selected");
  }
  if (interactive_) {
    v.status = Status::Reviewing;
    return wait();
  }
  return emit("done");
}

}  // namespace agmarket::agents
