#pragma once

#include <string>

#include "agmarket/agents/market_agent.hpp"
#include "agmarket/market/amendment.hpp"
#include "agmarket/market/provider_plan.hpp"

namespace agmarket::agents {

struct ProviderConfig {
  market::ConcessionPolicy policy;
  /// A silent provider never answers calls for proposals.
  bool silent = false;
};

class ProviderAgent : public MarketAgent {
 public:
  /// The plan's provider id is rebound to the spawned agent in setup.
  ProviderAgent(std::string actor, market::ProviderPlan plan, ProviderConfig config = {});

  const market::ProviderPlan& plan() const { return plan_; }
  const ProviderConfig& config() const { return config_; }

 protected:
  void on_setup(kernel::AgentContext& ctx) override;
  void start_plan(kernel::AgentContext& ctx, const Goal& goal) override;

 private:
  void answer_cfp(kernel::AgentContext& ctx, const Goal& goal);
  void treat_reservation(kernel::AgentContext& ctx, const Goal& goal);
  void answer_amendment(kernel::AgentContext& ctx, const Goal& goal);

  market::ProviderPlan plan_;
  ProviderConfig config_;
};

}  // namespace agmarket::agents
