#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "agmarket/kernel/runtime.hpp"

namespace agmarket::kernel {

enum class Outcome { Ok, Fail };

std::string_view to_string(Outcome outcome);

class InvalidFsm : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// States are capabilities; terminals carry an outcome.
struct FsmSpec {
  std::string name;
  std::vector<std::string> states;
  std::string initial;
  std::map<std::string, Outcome> terminals;
  std::map<std::pair<std::string, std::string>, std::string> transitions;

  FsmSpec& on(const std::string& from, const std::string& event, const std::string& to) {
    transitions[{from, event}] = to;
    return *this;
  }

  bool has_state(const std::string& s) const;
  bool is_terminal(const std::string& s) const { return terminals.contains(s); }
  /// The terminal that undefined transitions fall into.
  const std::string& fail_terminal() const;
  std::optional<std::string> target(const std::string& state, const std::string& event) const;

  /// Throws InvalidFsm on the first broken invariant.
  void validate() const;
  /// One line per transition, "From --event--> To", in table order.
  std::string describe() const;
};

/// A running instance of an FsmSpec.
class FsmRun {
 public:
  explicit FsmRun(std::shared_ptr<const FsmSpec> spec);

  const FsmSpec& spec() const { return *spec_; }
  const std::string& state() const { return state_; }
  bool finished() const { return spec_->is_terminal(state_); }
  std::optional<Outcome> outcome() const;
  /// Set when the run reached Fail through an undefined transition.
  bool no_transition() const { return no_transition_; }
  /// States visited so far, starting with the initial state.
  const std::vector<std::string>& path() const { return path_; }

  /// Throws PreconditionViolation from a terminal state.
  const std::string& advance(const std::string& event);

 private:
  std::shared_ptr<const FsmSpec> spec_;
  std::string state_;
  bool no_transition_ = false;
  std::vector<std::string> path_;
};

struct CapabilityResult {
  std::optional<std::string> event;
};

inline CapabilityResult emit(std::string event) { return {std::move(event)}; }
inline CapabilityResult wait() { return {}; }

using Capability = std::function<CapabilityResult(AgentContext&)>;

/// Runs one capability per slice. An emitted event advances the FSM and the
/// next state's capability runs on the following tick; a wait blocks the
/// behaviour unless the capability already armed a timer.
class FsmBehaviour : public Behaviour {
 public:
  using FinishHandler = std::function<void(AgentContext&, const FsmRun&)>;

  /// Throws InvalidFsm if the FsmSpec is invalid or a non-terminal state has
  /// no capability.
  FsmBehaviour(std::shared_ptr<const FsmSpec> spec, std::map<std::string, Capability> capabilities,
               std::string trace_tag);

  void on_finish(FinishHandler handler) { on_finish_ = std::move(handler); }
  const FsmRun& run() const { return run_; }
  const std::string& trace_tag() const { return trace_tag_; }

  void action(AgentContext& ctx) override;
  bool holds_runtime() const override { return state() != BehaviourState::Done; }
  std::string conversation_id() const override { return trace_tag_; }

 private:
  FsmRun run_;
  std::map<std::string, Capability> capabilities_;
  std::string trace_tag_;
  FinishHandler on_finish_;
};

}  // namespace agmarket::kernel
