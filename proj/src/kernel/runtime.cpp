#include "agmarket/kernel/runtime.hpp"

#include <algorithm>

namespace agmarket::kernel {

std::string_view to_string(BehaviourState state) {
  switch (state) {
    case BehaviourState::Ready: return "ready";
    case BehaviourState::Blocked: return "blocked";
    case BehaviourState::Done: return "done";
  }
  return "?";
}

// ---- AgentContext

Tick AgentContext::now() const { return rt_.tick_; }

messaging::DeliveryReceipt AgentContext::send(messaging::AclMessage message) {
  message.sender = agent_.id();
  message.sent_tick = rt_.tick_;
  if (!message.reply_with) message.reply_with = rt_.next_reply_id(agent_.id().name);
  return rt_.post_.send(message);
}

std::optional<messaging::AclMessage> AgentContext::receive(
    const messaging::MessagePattern& pattern) {
  auto m = try_receive(pattern);
  if (!m && current_) block();
  return m;
}

std::optional<messaging::AclMessage> AgentContext::try_receive(
    const messaging::MessagePattern& pattern) {
  return rt_.post_.receive_matching(agent_.id().name, pattern, rt_.tick_);
}

Behaviour& AgentContext::current_behaviour() {
  if (!current_) throw PreconditionViolation("no behaviour is executing");
  return *agent_.behaviours_.at(*current_);
}

void AgentContext::block() {
  auto& b = current_behaviour();
  b.state_ = BehaviourState::Blocked;
  b.wake_at_.reset();
}

void AgentContext::block_until(Tick tick) {
  auto& b = current_behaviour();
  b.state_ = BehaviourState::Blocked;
  b.wake_at_ = tick;
}

void AgentContext::stay_ready() {
  auto& b = current_behaviour();
  if (b.state_ == BehaviourState::Blocked) b.state_ = BehaviourState::Ready;
  b.wake_at_.reset();
}

void AgentContext::wake(const BehaviourHandle& handle) { rt_.wake(handle); }

BehaviourHandle AgentContext::add_behaviour(std::unique_ptr<Behaviour> behaviour) {
  return rt_.add_behaviour(agent_.id().name, std::move(behaviour));
}

std::optional<BehaviourHandle> AgentContext::current() const {
  if (!current_) return std::nullopt;
  return BehaviourHandle{agent_.id().name, *current_};
}

void AgentContext::register_service(const std::string& type,
                                    std::map<std::string, std::string> attributes) {
  rt_.post_.register_service({agent_.id(), type, std::move(attributes)});
}

std::vector<messaging::DirectoryEntry> AgentContext::search(const std::string& type) const {
  return rt_.post_.search_directory(type);
}

const AgentId* AgentContext::lookup(const std::string& name) const {
  const Agent* a = rt_.find(name);
  return a ? &a->id() : nullptr;
}

void AgentContext::record_failure(const std::string& conversation_id, const std::string& summary) {
  rt_.post_.record_failure(agent_.id(), conversation_id, summary, rt_.tick_);
}

// ---- Runtime

AgentId Runtime::spawn(const std::string& name, std::unique_ptr<Agent> agent) {
  if (name.empty()) throw std::invalid_argument("agent name is empty");
  if (!agent) throw std::invalid_argument("null agent");
  if (find(name)) throw DuplicateName("agent name already live: " + name);
  agent->id_ = AgentId{name, next_ordinal_++};
  post_.attach(agent->id_);
  agents_.push_back(std::move(agent));
  Agent& ref = *agents_.back();
  AgentContext ctx(*this, ref, std::nullopt);
  ref.setup(ctx);
  return ref.id_;
}

AgentId Runtime::spawn_agent(const std::string& name,
                             std::vector<std::unique_ptr<Behaviour>> behaviours) {
  auto id = spawn(name, std::make_unique<Agent>());
  for (auto& b : behaviours) add_behaviour(name, std::move(b));
  return id;
}

void Runtime::kill_agent(const std::string& name) {
  Agent* a = find(name);
  if (!a) throw UnknownAgent("unknown agent: " + name);
  a->takedown();
  a->alive_ = false;
  post_.detach(name);
  if (!stepping_) std::erase_if(agents_, [](const auto& p) { return !p->alive_; });
}

bool Runtime::is_live(const std::string& name) const { return find(name) != nullptr; }

Agent& Runtime::agent(const std::string& name) {
  Agent* a = find(name);
  if (!a) throw UnknownAgent("unknown agent: " + name);
  return *a;
}

std::vector<AgentId> Runtime::live_agents() const {
  std::vector<AgentId> out;
  for (const auto& a : agents_)
    if (a->alive_) out.push_back(a->id_);
  return out;
}

BehaviourHandle Runtime::add_behaviour(const std::string& agent,
                                       std::unique_ptr<Behaviour> behaviour) {
  Agent* a = find(agent);
  if (!a) throw UnknownAgent("unknown agent: " + agent);
  if (!behaviour) throw std::invalid_argument("null behaviour");
  a->behaviours_.push_back(std::move(behaviour));
  return {agent, a->behaviours_.size() - 1};
}

const Behaviour& Runtime::behaviour(const BehaviourHandle& handle) const {
  Agent* a = find(handle.agent);
  if (!a) throw UnknownAgent("unknown agent: " + handle.agent);
  return *a->behaviours_.at(handle.index);
}

void Runtime::wake(const BehaviourHandle& handle) {
  Agent* owner = find(handle.agent);
  if (!owner) throw UnknownAgent("unknown agent: " + handle.agent);
  auto& b = *owner->behaviours_.at(handle.index);
  if (b.state_ == BehaviourState::Blocked) {
    b.state_ = BehaviourState::Ready;
    b.wake_at_.reset();
  }
}

void Runtime::schedule_message(Tick tick, messaging::AclMessage message) {
  if (tick <= tick_) throw PreconditionViolation("cannot schedule a message in the past");
  messaging::validate_envelope(message);
  scheduled_.emplace(tick, std::move(message));
}

void Runtime::step() {
  ++tick_;
  stepping_ = true;

  auto due = scheduled_.upper_bound(tick_);
  for (auto it = scheduled_.begin(); it != due; ++it) {
    it->second.sent_tick = tick_;
    post_.send(it->second);
  }
  scheduled_.erase(scheduled_.begin(), due);

  for (const auto& name : post_.take_due_wakes(tick_))
    if (Agent* a = find(name)) wake_blocked(*a);
  for (auto& a : agents_) {
    if (!a->alive_) continue;
    for (auto& b : a->behaviours_) {
      if (b->state_ == BehaviourState::Blocked && b->wake_at_ && *b->wake_at_ <= tick_) {
        b->state_ = BehaviourState::Ready;
        b->wake_at_.reset();
      }
    }
  }

  // Indices, not iterators: agents and behaviours may be added mid-tick.
  for (std::size_t ai = 0; ai < agents_.size(); ++ai) {
    Agent& a = *agents_[ai];
    for (std::size_t bi = 0; bi < a.behaviours_.size() && a.alive_; ++bi)
      if (a.behaviours_[bi]->state_ == BehaviourState::Ready) run_slice(a, bi);
  }

  stepping_ = false;
  std::erase_if(agents_, [](const auto& p) { return !p->alive_; });
}

RunResult Runtime::run_until_quiescent(Tick max_ticks) {
  if (max_ticks <= 0) throw PreconditionViolation("max_ticks must be positive");
  const Tick start = tick_;
  while (!quiescent()) {
    if (tick_ - start >= max_ticks) return {false, true, tick_};
    step();
  }
  return {true, false, tick_};
}

bool Runtime::quiescent() const {
  if (!scheduled_.empty() || post_.has_pending_wakes()) return false;
  for (const auto& a : agents_) {
    if (!a->alive_) continue;
    for (const auto& b : a->behaviours_) {
      if (b->state_ == BehaviourState::Ready || b->wake_at_) return false;
      if (b->holds_runtime()) return false;
    }
  }
  return true;
}

Agent* Runtime::find(const std::string& name) const {
  for (const auto& a : agents_)
    if (a->alive_ && a->id_.name == name) return a.get();
  return nullptr;
}

void Runtime::wake_blocked(Agent& agent) {
  for (auto& b : agent.behaviours_) {
    if (b->state_ == BehaviourState::Blocked) {
      b->state_ = BehaviourState::Ready;
      b->wake_at_.reset();
    }
  }
}

void Runtime::run_slice(Agent& agent, std::size_t index) {
  Behaviour& b = *agent.behaviours_[index];
  log_.push_back({tick_, agent.id_.name, index, b.label()});
  AgentContext ctx(*this, agent, index);
  try {
    b.action(ctx);
  } catch (const std::exception& e) {
    b.state_ = BehaviourState::Done;
    b.wake_at_.reset();
    post_.record_failure(agent.id_, b.conversation_id(), b.label() + ": " + e.what(), tick_);
  }
}

std::string Runtime::next_reply_id(const std::string& agent) {
  return agent + "-" + std::to_string(++reply_counters_[agent]);
}

}  // namespace agmarket::kernel
