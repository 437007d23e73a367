#include "agmarket/agents/market_agent.hpp"

#include <algorithm>

namespace agmarket::agents {

using kernel::AgentContext;
using messaging::AclMessage;
using messaging::ErrorInfo;
using messaging::Performative;

MarketAgent::MarketAgent(model::Role role, std::string actor)
    : role_(role),
      actor_(std::move(actor)),
      perception_(perception_for(role)),
      library_(library_for(role)) {}

std::size_t MarketAgent::running_plans() const {
  return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(),
                                                [](const PlanRecord& r) { return !r.outcome; }));
}

void MarketAgent::setup(AgentContext& ctx) {
  ctx.add_behaviour(std::make_unique<kernel::CyclicBehaviour>(
      "perception", [this](AgentContext& c) { perceive_all(c); }));
  on_setup(ctx);
}

void MarketAgent::perceive_all(AgentContext& ctx) {
  while (auto m = ctx.try_receive()) handle(ctx, *m);
  ctx.block();
}

void MarketAgent::handle(AgentContext& ctx, const AclMessage& m) {
  auto goals = perceive(perception_, m);
  if (goals.empty()) {
    if (is_notice(m)) {
      start_record_notice(ctx, {kRecordNotice, GoalKind::Initiate, m});
      return;
    }
    reply(ctx, m, Performative::NotUnderstood,
          ErrorInfo{"not-understood", std::string(to_string(m.performative)) + " " +
                                          std::string(to_string(m.content.tag()))});
    return;
  }
  for (const auto& goal : goals) {
    if (goal.kind == GoalKind::Continue) {
      if (route(ctx, goal)) continue;
      if (is_notice(m)) {
        start_record_notice(ctx, goal);
      } else {
        reply(ctx, m, Performative::NotUnderstood,
              ErrorInfo{"no-conversation", "no active " + goal.name + " in " + m.conversation_id});
      }
      continue;
    }
    if (goal.name == kRecordNotice) {
      start_record_notice(ctx, goal);
      continue;
    }
    try {
      start_plan(ctx, goal);
    } catch (const NoPlan& e) {
      reply(ctx, m, Performative::Failure, ErrorInfo{"no-plan", e.what()});
    }
  }
}

bool MarketAgent::route(AgentContext& ctx, const Goal& goal) {
  auto it = expectations_.find({goal.conversation_id(), goal.name});
  if (it == expectations_.end()) return false;
  it->second->push(goal.message);
  auto owner = inbox_owner_.find(it->second.get());
  if (owner != inbox_owner_.end()) ctx.wake(owner->second);
  return true;
}

void MarketAgent::start_record_notice(AgentContext& ctx, const Goal& goal) {
  const AclMessage m = goal.message;
  launch(ctx, kRecordNotice, m.conversation_id, std::make_shared<PlanInbox>(),
         {{"Record", [this, m](AgentContext& c) {
             notices_.push_back({c.now(), m.sender.name, m.conversation_id, m.performative,
                                 messaging::summarize(m.content)});
             return kernel::emit("recorded");
           }}});
}

kernel::BehaviourHandle MarketAgent::launch(AgentContext& ctx, const std::string& goal,
                                            const std::string& conversation_id,
                                            const std::shared_ptr<PlanInbox>& inbox,
                                            std::map<std::string, kernel::Capability> capabilities,
                                            FinishHandler on_finish) {
  auto spec = library_.retrieve(goal);
  auto fsm = std::make_unique<kernel::FsmBehaviour>(spec, std::move(capabilities), conversation_id);
  const std::size_t record = records_.size();
  records_.push_back({goal, conversation_id, spec->name, ctx.now(), std::nullopt, {spec->initial},
                      std::nullopt, false});
  const PlanInbox* key = inbox.get();
  fsm->on_finish([this, record, key, on_finish = std::move(on_finish)](AgentContext& c,
                                                                        const kernel::FsmRun& run) {
    auto& r = records_[record];
    r.finished = c.now();
    r.path = run.path();
    r.outcome = run.outcome();
    r.no_transition = run.no_transition();
    std::erase_if(expectations_, [key](const auto& kv) { return kv.second.get() == key; });
    inbox_owner_.erase(key);
    if (on_finish) on_finish(c, run);
  });
  auto handle = ctx.add_behaviour(std::move(fsm));
  inbox_owner_[key] = handle;
  return handle;
}

void MarketAgent::expect(const std::string& conversation_id, const std::string& goal,
                         const std::shared_ptr<PlanInbox>& inbox) {
  expectations_[{conversation_id, goal}] = inbox;
}

void MarketAgent::send(AgentContext& ctx, Performative p, const AgentId& to,
                       const std::string& conversation_id, messaging::Body body) {
  AclMessage m;
  m.performative = p;
  m.receivers = {to};
  m.conversation_id = conversation_id;
  m.content = messaging::make_payload(std::move(body));
  ctx.send(std::move(m));
}

void MarketAgent::reply(AgentContext& ctx, const AclMessage& original, Performative p,
                        messaging::Body body) {
  ctx.send(messaging::make_reply(original, p, messaging::make_payload(std::move(body))));
}

}  // namespace agmarket::agents
