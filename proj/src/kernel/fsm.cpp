#include "agmarket/kernel/fsm.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace agmarket::kernel {

std::string_view to_string(Outcome outcome) { return outcome == Outcome::Ok ? "ok" : "fail"; }

bool FsmSpec::has_state(const std::string& s) const {
  return is_terminal(s) || std::find(states.begin(), states.end(), s) != states.end();
}

const std::string& FsmSpec::fail_terminal() const {
  for (const auto& [state, outcome] : terminals)
    if (outcome == Outcome::Fail) return state;
  throw InvalidFsm(name + ": no Fail terminal");
}

std::optional<std::string> FsmSpec::target(const std::string& state,
                                           const std::string& event) const {
  auto it = transitions.find({state, event});
  if (it == transitions.end()) return std::nullopt;
  return it->second;
}

void FsmSpec::validate() const {
  auto fail = [&](const std::string& why) { throw InvalidFsm(name + ": " + why); };
  std::set<std::string> seen;
  for (const auto& s : states) {
    if (s.empty()) fail("empty state name");
    if (!seen.insert(s).second) fail("duplicate state " + s);
    if (is_terminal(s)) fail("state " + s + " is also a terminal");
  }
  if (terminals.empty()) fail("no terminal states");
  fail_terminal();
  if (!has_state(initial)) fail("initial state " + initial + " does not exist");
  for (const auto& [key, to] : transitions) {
    if (!has_state(key.first)) fail("transition from unknown state " + key.first);
    if (is_terminal(key.first)) fail("transition out of terminal " + key.first);
    if (!has_state(to)) fail("transition to unknown state " + to);
  }
  for (const auto& s : states) {
    bool outgoing = std::any_of(transitions.begin(), transitions.end(),
                                [&](const auto& kv) { return kv.first.first == s; });
    if (!outgoing) fail("state " + s + " has no outgoing transition");
  }
}

std::string FsmSpec::describe() const {
  std::ostringstream out;
  out << name << " (initial " << initial << ")\n";
  for (const auto& s : states)
    for (const auto& [key, to] : transitions)
      if (key.first == s) out << "  " << s << " --" << key.second << "--> " << to << "\n";
  for (const auto& [t, outcome] : terminals) out << "  [" << t << ": " << to_string(outcome) << "]\n";
  return out.str();
}

FsmRun::FsmRun(std::shared_ptr<const FsmSpec> spec) : spec_(std::move(spec)) {
  if (!spec_) throw InvalidFsm("null spec");
  spec_->validate();
  state_ = spec_->initial;
  path_.push_back(state_);
}

std::optional<Outcome> FsmRun::outcome() const {
  auto it = spec_->terminals.find(state_);
  if (it == spec_->terminals.end()) return std::nullopt;
  return it->second;
}

const std::string& FsmRun::advance(const std::string& event) {
  if (finished())
    throw PreconditionViolation(spec_->name + ": advance from terminal " + state_);
  if (auto to = spec_->target(state_, event)) {
    state_ = *to;
  } else {
    state_ = spec_->fail_terminal();
    no_transition_ = true;
  }
  path_.push_back(state_);
  return state_;
}

FsmBehaviour::FsmBehaviour(std::shared_ptr<const FsmSpec> spec,
                           std::map<std::string, Capability> capabilities, std::string trace_tag)
    : Behaviour(BehaviourKind::Fsm, spec ? spec->name : std::string{}),
      run_(std::move(spec)),
      capabilities_(std::move(capabilities)),
      trace_tag_(std::move(trace_tag)) {
  for (const auto& s : run_.spec().states)
    if (!capabilities_.contains(s)) throw InvalidFsm(run_.spec().name + ": no capability for " + s);
}

void FsmBehaviour::action(AgentContext& ctx) {
  const std::string from = run_.state();
  CapabilityResult result = capabilities_.at(from)(ctx);
  if (!result.event) {
    if (state() == BehaviourState::Ready) ctx.block();
    return;
  }
  ctx.stay_ready();
  run_.advance(*result.event);
  if (run_.no_transition())
    ctx.record_failure(trace_tag_, run_.spec().name + ": no transition from " + from + " on " +
                                       *result.event);
  if (run_.finished()) {
    finish();
    if (on_finish_) on_finish_(ctx, run_);
  }
}

}  // namespace agmarket::kernel
