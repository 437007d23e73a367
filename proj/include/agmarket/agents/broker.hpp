#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agmarket/agents/market_agent.hpp"
#include "agmarket/market/composition.hpp"
#include "agmarket/market/proposal_book.hpp"

namespace agmarket::agents {

inline const std::string kProviderService = "transport-provider";
inline const std::string kBrokerService = "broker";

struct BrokerConfig {
  /// Ticks the broker waits for provider replies; nullopt waits forever.
  std::optional<Tick> reply_deadline = 20;
  market::CompositionLimits limits;
  std::size_t k_best = 5;
};

/// The broker's record of one customer request.
struct RequestRecord {
  enum class Phase { Evaluating, Presented, NoSolution, Rejected };

  market::TransportRequest request;
  AgentId customer;
  std::string conversation_id;
  Phase phase = Phase::Evaluating;
  std::size_t providers_queried = 0;
  std::size_t providers_replied = 0;
  market::ProposalBook book;
  std::string reason;
};

std::string_view to_string(RequestRecord::Phase phase);

class BrokerAgent : public MarketAgent {
 public:
  explicit BrokerAgent(std::string actor = "Broker", BrokerConfig config = {});

  const BrokerConfig& config() const { return config_; }
  const RequestRecord* find_request(const std::string& request_id) const;
  const std::map<std::string, RequestRecord>& requests() const { return requests_; }
  /// Provider name -> leg id -> last known leg (capacity = remaining).
  const std::map<std::string, std::map<std::string, market::RouteLeg>>& network() const {
    return network_;
  }

 protected:
  void on_setup(kernel::AgentContext& ctx) override;
  void start_plan(kernel::AgentContext& ctx, const Goal& goal) override;

 private:
  void evaluate(kernel::AgentContext& ctx, const Goal& goal);
  void handle_selection(kernel::AgentContext& ctx, const Goal& goal);
  void handle_amendment(kernel::AgentContext& ctx, const Goal& goal);
  void rerank(kernel::AgentContext& ctx, const Goal& goal);
  void update_network(kernel::AgentContext& ctx, const Goal& goal);
  void cache_legs(const std::string& provider, const std::vector<market::RouteLeg>& legs);

  BrokerConfig config_;
  std::map<std::string, RequestRecord> requests_;
  std::map<std::string, std::map<std::string, market::RouteLeg>> network_;
};

}  // namespace agmarket::agents
