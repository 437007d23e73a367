#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agmarket/agents/perception.hpp"
#include "agmarket/agents/plan_library.hpp"
#include "agmarket/kernel/fsm.hpp"
#include "agmarket/kernel/runtime.hpp"

namespace agmarket::agents {

/// Messages routed to one running plan.
class PlanInbox {
 public:
  void push(messaging::AclMessage m) { queue_.push_back(std::move(m)); }
  std::optional<messaging::AclMessage> pop() {
    if (queue_.empty()) return std::nullopt;
    auto m = std::move(queue_.front());
    queue_.pop_front();
    return m;
  }
  bool empty() const { return queue_.empty(); }

 private:
  std::deque<messaging::AclMessage> queue_;
};

struct PlanRecord {
  std::string goal;
  std::string conversation_id;
  std::string plan;
  Tick started = 0;
  std::optional<Tick> finished;
  std::vector<std::string> path;
  std::optional<kernel::Outcome> outcome;
  bool no_transition = false;
};

struct Notice {
  Tick tick = 0;
  std::string from;
  std::string conversation_id;
  messaging::Performative performative = messaging::Performative::Inform;
  std::string summary;
};

/// Common skeleton of the three roles: a cyclic perception behaviour turns
/// each message into goals, and each goal either starts a plan from the
/// library or is routed to the plan already running for its conversation.
class MarketAgent : public kernel::Agent {
 public:
  MarketAgent(model::Role role, std::string actor);

  model::Role role() const { return role_; }
  const std::string& actor() const { return actor_; }
  const PlanLibrary& library() const { return library_; }
  const PerceptionTable& perception() const { return perception_; }

  const std::vector<PlanRecord>& plans() const { return records_; }
  std::size_t running_plans() const;
  const std::vector<Notice>& notices() const { return notices_; }

 protected:
  void setup(kernel::AgentContext& ctx) final;
  virtual void on_setup(kernel::AgentContext&) {}
  /// Starts the plan for an Initiate goal. May throw NoPlan.
  virtual void start_plan(kernel::AgentContext& ctx, const Goal& goal) = 0;

  using FinishHandler = std::function<void(kernel::AgentContext&, const kernel::FsmRun&)>;

  /// Schedules the library plan for `goal` as a new behaviour.
  kernel::BehaviourHandle launch(kernel::AgentContext& ctx, const std::string& goal,
                                 const std::string& conversation_id,
                                 const std::shared_ptr<PlanInbox>& inbox,
                                 std::map<std::string, kernel::Capability> capabilities,
                                 FinishHandler on_finish = {});
  /// Routes later Continue goals of this conversation to `inbox`.
  void expect(const std::string& conversation_id, const std::string& goal,
              const std::shared_ptr<PlanInbox>& inbox);

  void send(kernel::AgentContext& ctx, messaging::Performative p, const AgentId& to,
            const std::string& conversation_id, messaging::Body body);
  void reply(kernel::AgentContext& ctx, const messaging::AclMessage& original,
             messaging::Performative p, messaging::Body body);

 private:
  void perceive_all(kernel::AgentContext& ctx);
  void handle(kernel::AgentContext& ctx, const messaging::AclMessage& m);
  bool route(kernel::AgentContext& ctx, const Goal& goal);
  void start_record_notice(kernel::AgentContext& ctx, const Goal& goal);

  model::Role role_;
  std::string actor_;
  PerceptionTable perception_;
  PlanLibrary library_;
  std::map<std::pair<std::string, std::string>, std::shared_ptr<PlanInbox>> expectations_;
  std::map<const PlanInbox*, kernel::BehaviourHandle> inbox_owner_;
  std::vector<PlanRecord> records_;
  std::vector<Notice> notices_;
};

}  // namespace agmarket::agents
