#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "agmarket/agents/market_agent.hpp"
#include "agmarket/market/amendment.hpp"

namespace agmarket::agents {

struct ReweightStep {
  market::CriteriaProfile weights;
};

/// Amends the proposal named by `itinerary_id`, or else the one at `index`
/// of the current ranking. Exactly one of the targets (or cost_factor,
/// applied to the current total cost) is set.
struct AmendStep {
  std::size_t index = 0;
  std::optional<std::string> itinerary_id;
  std::optional<double> cost_factor;
  std::optional<market::Money> target_cost;
  std::optional<market::Minutes> target_delivery_time;
  std::optional<int> target_insurance;
};

struct SelectStep {
  enum class Kind { BestScore, None, Index, ItineraryId, Legs };
  Kind kind = Kind::BestScore;
  std::size_t index = 0;
  std::string itinerary_id;
  std::vector<std::string> legs;
};

using ScriptStep = std::variant<ReweightStep, AmendStep, SelectStep>;

struct ScriptEntry {
  market::TransportRequest request;
  std::vector<ScriptStep> steps;
  /// Earliest tick at which the request is sent.
  Tick start_at = 0;
};

/// What the customer currently knows about one of its requests.
struct RequestView {
  enum class Status {
    Queued,
    AwaitingProposals,
    Reviewing,
    AwaitingAmendment,
    AwaitingOutcome,
    Confirmed,
    Failed,
    NoSolution,
    Rejected,
    Closed,
  };

  market::TransportRequest request;
  Status status = Status::Queued;
  market::CriteriaProfile weights;
  std::vector<market::Proposal> proposals;
  std::optional<std::string> selected;
  std::string reservation_id;
  /// Last error or refusal reason, if any.
  std::string detail;
  std::vector<std::string> conversations;
  std::size_t steps_done = 0;
  std::optional<bool> last_amendment_accepted;

  bool finished() const;
};

std::string_view to_string(RequestView::Status status);

class DuplicateRequest : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CustomerAgent : public MarketAgent {
 public:
  /// Interactive customers keep each request open until a select step
  /// arrives; scripted ones finish once the steps run out. Requests run
  /// concurrently, each from its start_at tick.
  CustomerAgent(std::string actor, std::vector<ScriptEntry> script, bool interactive = false);

  bool interactive() const { return interactive_; }
  const std::map<std::string, RequestView>& views() const { return views_; }
  const RequestView* view(const std::string& request_id) const;

  /// Queues a new request; call between steps. Throws DuplicateRequest.
  void submit(kernel::Runtime& rt, ScriptEntry entry);
  /// Appends a step to an open request; call between steps. Throws
  /// std::out_of_range for unknown ids, PreconditionViolation when the
  /// request is already finished.
  void push_step(kernel::Runtime& rt, const std::string& request_id, ScriptStep step);

 protected:
  void on_setup(kernel::AgentContext& ctx) override;
  void start_plan(kernel::AgentContext& ctx, const Goal& goal) override;

 private:
  struct Session;

  void launcher(kernel::AgentContext& ctx);
  void begin(kernel::AgentContext& ctx, ScriptEntry entry);
  std::string next_conversation(Session& s);
  kernel::CapabilityResult review(kernel::AgentContext& ctx, Session& s);

  bool interactive_;
  std::deque<ScriptEntry> queue_;
  std::map<std::string, RequestView> views_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::optional<kernel::BehaviourHandle> launcher_;
};

}  // namespace agmarket::agents
