#pragma once

#include <string>
#include <vector>

#include "agmarket/messaging/acl_message.hpp"
#include "agmarket/model/organization.hpp"

namespace agmarket::agents {

/// Initiate goals start a new plan; Continue goals feed a plan that is
/// already running in the same conversation.
enum class GoalKind { Initiate, Continue };

struct Goal {
  std::string name;
  GoalKind kind = GoalKind::Initiate;
  messaging::AclMessage message;

  const std::string& conversation_id() const { return message.conversation_id; }
};

struct PerceptionRule {
  messaging::Performative performative;
  messaging::BodyTag body;
  std::string goal;
  GoalKind kind = GoalKind::Initiate;
};

using PerceptionTable = std::vector<PerceptionRule>;

inline const std::string kRecordNotice = "record-notice";

PerceptionTable broker_perception();
PerceptionTable provider_perception();
PerceptionTable customer_perception();
PerceptionTable perception_for(model::Role role);

/// Goals for `m` under `table`; empty when the combination is unknown.
std::vector<Goal> perceive(const PerceptionTable& table, const messaging::AclMessage& m);

/// NotUnderstood, Failure and ErrorInfo informs: never answered with
/// another NotUnderstood.
bool is_notice(const messaging::AclMessage& m);

}  // namespace agmarket::agents
