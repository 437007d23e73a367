#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "agmarket/kernel/agent_id.hpp"
#include "agmarket/messaging/post_office.hpp"

namespace agmarket::kernel {

class DuplicateName : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using UnknownAgent = messaging::UnknownAgent;

/// Raised when an operation is called outside its precondition.
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class BehaviourKind { Cyclic, OneShot, Fsm };
enum class BehaviourState { Ready, Blocked, Done };

std::string_view to_string(BehaviourState state);

class AgentContext;

class Behaviour {
 public:
  Behaviour(BehaviourKind kind, std::string label) : kind_(kind), label_(std::move(label)) {}
  virtual ~Behaviour() = default;

  /// One action slice.
  virtual void action(AgentContext& ctx) = 0;
  /// Unfinished behaviours of this kind keep the runtime from quiescing
  /// even while blocked (a plan waiting for a reply that never comes).
  virtual bool holds_runtime() const { return false; }
  /// Conversation to attribute failures of this behaviour to.
  virtual std::string conversation_id() const { return {}; }

  BehaviourKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  BehaviourState state() const { return state_; }

 protected:
  void finish() { state_ = BehaviourState::Done; }

 private:
  friend class Runtime;
  friend class AgentContext;

  BehaviourKind kind_;
  std::string label_;
  BehaviourState state_ = BehaviourState::Ready;
  std::optional<Tick> wake_at_;
};

class CyclicBehaviour : public Behaviour {
 public:
  using Action = std::function<void(AgentContext&)>;
  CyclicBehaviour(std::string label, Action fn)
      : Behaviour(BehaviourKind::Cyclic, std::move(label)), fn_(std::move(fn)) {}
  void action(AgentContext& ctx) override { fn_(ctx); }

 private:
  Action fn_;
};

class OneShotBehaviour : public Behaviour {
 public:
  using Action = std::function<void(AgentContext&)>;
  OneShotBehaviour(std::string label, Action fn)
      : Behaviour(BehaviourKind::OneShot, std::move(label)), fn_(std::move(fn)) {}
  void action(AgentContext& ctx) override {
    fn_(ctx);
    finish();
  }

 private:
  Action fn_;
};

struct BehaviourHandle {
  std::string agent;
  std::size_t index = 0;

  friend bool operator==(const BehaviourHandle&, const BehaviourHandle&) = default;
};

class Agent {
 public:
  Agent() = default;
  virtual ~Agent() = default;
  Agent(const Agent&) = delete;
  Agent& operator=(const Agent&) = delete;

  const AgentId& id() const { return id_; }
  const std::vector<std::unique_ptr<Behaviour>>& behaviours() const { return behaviours_; }

 protected:
  /// Runs once at spawn, before the first tick.
  virtual void setup(AgentContext&) {}
  virtual void takedown() {}

 private:
  friend class Runtime;
  friend class AgentContext;

  AgentId id_;
  std::vector<std::unique_ptr<Behaviour>> behaviours_;
  bool alive_ = true;
};

class Runtime;

/// What a behaviour (or setup) sees of the runtime.
class AgentContext {
 public:
  AgentContext(Runtime& rt, Agent& agent, std::optional<std::size_t> current)
      : rt_(rt), agent_(agent), current_(current) {}

  const AgentId& self() const { return agent_.id(); }
  Tick now() const;

  /// Stamps sender and sent_tick, assigns reply_with when missing.
  messaging::DeliveryReceipt send(messaging::AclMessage message);
  /// Blocking receive: an empty result blocks the current behaviour.
  std::optional<messaging::AclMessage> receive(const messaging::MessagePattern& pattern = {});
  std::optional<messaging::AclMessage> try_receive(const messaging::MessagePattern& pattern = {});

  void block();
  /// Blocks until a message arrives or the tick is reached.
  void block_until(Tick tick);
  /// Makes the current behaviour Ready again (undoes a block in this slice).
  void stay_ready();
  void wake(const BehaviourHandle& handle);

  BehaviourHandle add_behaviour(std::unique_ptr<Behaviour> behaviour);
  std::optional<BehaviourHandle> current() const;

  void register_service(const std::string& type, std::map<std::string, std::string> attributes = {});
  std::vector<messaging::DirectoryEntry> search(const std::string& type) const;
  const AgentId* lookup(const std::string& name) const;

  void record_failure(const std::string& conversation_id, const std::string& summary);

 private:
  Behaviour& current_behaviour();

  Runtime& rt_;
  Agent& agent_;
  std::optional<std::size_t> current_;
};

struct RunResult {
  bool quiescent = false;
  bool budget_exceeded = false;
  Tick ticks = 0;
};

struct ExecutionRecord {
  Tick tick = 0;
  std::string agent;
  std::size_t behaviour = 0;
  std::string label;

  friend bool operator==(const ExecutionRecord&, const ExecutionRecord&) = default;
};

/// Single-threaded logical-time scheduler. Each step executes one action
/// slice of every Ready behaviour, ordered by (agent ordinal, add order).
/// A message sent at tick t becomes receivable, and wakes its receiver's
/// blocked behaviours, at tick t+1.
class Runtime {
 public:
  explicit Runtime(std::uint64_t seed = 0) : seed_(seed) {}

  /// Assigns the next ordinal, attaches the mailbox and runs setup.
  AgentId spawn(const std::string& name, std::unique_ptr<Agent> agent);
  AgentId spawn_agent(const std::string& name, std::vector<std::unique_ptr<Behaviour>> behaviours);
  template <typename A, typename... Args>
  A& spawn_as(const std::string& name, Args&&... args) {
    auto owned = std::make_unique<A>(std::forward<Args>(args)...);
    A& ref = *owned;
    spawn(name, std::move(owned));
    return ref;
  }

  void kill_agent(const std::string& name);
  bool is_live(const std::string& name) const;
  Agent& agent(const std::string& name);
  std::vector<AgentId> live_agents() const;

  BehaviourHandle add_behaviour(const std::string& agent, std::unique_ptr<Behaviour> behaviour);
  const Behaviour& behaviour(const BehaviourHandle& handle) const;
  /// Makes a blocked behaviour Ready; for use between steps.
  void wake(const BehaviourHandle& handle);

  /// Delivers `message` at the start of `tick` (stamped with that tick).
  void schedule_message(Tick tick, messaging::AclMessage message);

  void step();
  /// Throws PreconditionViolation when max_ticks <= 0.
  RunResult run_until_quiescent(Tick max_ticks);
  bool quiescent() const;

  Tick tick() const { return tick_; }
  std::uint64_t seed() const { return seed_; }
  messaging::PostOffice& post_office() { return post_; }
  const messaging::PostOffice& post_office() const { return post_; }
  const std::vector<ExecutionRecord>& execution_log() const { return log_; }

 private:
  friend class AgentContext;

  Agent* find(const std::string& name) const;
  void wake_blocked(Agent& agent);
  void run_slice(Agent& agent, std::size_t index);
  std::string next_reply_id(const std::string& agent);

  std::uint64_t seed_;
  Tick tick_ = 0;
  std::uint32_t next_ordinal_ = 0;
  bool stepping_ = false;
  std::vector<std::unique_ptr<Agent>> agents_;
  messaging::PostOffice post_;
  std::multimap<Tick, messaging::AclMessage> scheduled_;
  std::map<std::string, std::uint64_t> reply_counters_;
  std::vector<ExecutionRecord> log_;
};

}  // namespace agmarket::kernel
