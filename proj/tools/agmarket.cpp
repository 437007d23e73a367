#include <iostream>

#include <CLI11.hpp>

#include "agmarket/gateway/cli.hpp"

namespace gw = agmarket::gateway;

int main(int argc, char** argv) {
  CLI::App app{"agmarket: agent-based freight brokerage simulator"};
  app.require_subcommand(1);

  gw::RunOptions run;
  std::uint64_t run_seed = 0;
  long long run_max = 0;
  std::string snapshot;
  auto* run_cmd = app.add_subcommand("run", "run a scenario to quiescence and write its trace");
  run_cmd->add_option("--scenario", run.scenario, "scenario JSON")->required();
  auto* seed_opt = run_cmd->add_option("--seed", run_seed, "override the scenario seed");
  run_cmd->add_option("--trace", run.trace, "JSONL trace output")->required();
  auto* max_opt = run_cmd->add_option("--max-ticks", run_max, "tick budget")->check(CLI::PositiveNumber);
  auto* snap_opt = run_cmd->add_option("--snapshot", snapshot, "market snapshot JSON output");
  run_cmd->add_flag("--quiet", run.quiet, "do not print the sequence diagram");

  std::string validate_path;
  bool validate_json = false;
  auto* validate_cmd = app.add_subcommand("validate", "check the organizational model of a scenario");
  validate_cmd->add_option("--scenario", validate_path, "scenario JSON")->required();
  validate_cmd->add_flag("--json", validate_json, "print the report as JSON");

  gw::ServeOptions serve;
  std::uint64_t serve_seed = 0;
  int cadence_ms = 50;
  bool no_live = false;
  auto* serve_cmd = app.add_subcommand("serve", "run a scenario behind the HTTP API");
  serve_cmd->add_option("--scenario", serve.scenario, "scenario JSON with an interactive customer")->required();
  serve_cmd->add_option("--port", serve.port, "TCP port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", serve.host, "bind address");
  auto* serve_seed_opt = serve_cmd->add_option("--seed", serve_seed, "override the scenario seed");
  serve_cmd->add_option("--cadence-ms", cadence_ms, "wall time per tick")->check(CLI::PositiveNumber);
  serve_cmd->add_flag("--no-live-conformance", no_live, "do not report violations as they happen");

  std::string diagram_path, conversation;
  auto* diagram_cmd = app.add_subcommand("diagram", "render a trace file as a sequence chart");
  diagram_cmd->add_option("--trace", diagram_path, "JSONL trace")->required();
  auto* conv_opt = diagram_cmd->add_option("--conversation", conversation, "only this conversation (or request)");

  std::string replay_scenario, replay_snapshot, replay_trace;
  auto* replay_cmd = app.add_subcommand("replay", "re-run a scenario and compare with a snapshot and trace");
  replay_cmd->add_option("--scenario", replay_scenario, "scenario JSON")->required();
  replay_cmd->add_option("--snapshot", replay_snapshot, "snapshot JSON")->required();
  replay_cmd->add_option("--trace", replay_trace, "JSONL trace")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gw::kExitInvalid;
  }

  if (*run_cmd) {
    if (*seed_opt) run.seed = run_seed;
    if (*max_opt) run.max_ticks = run_max;
    if (*snap_opt) run.snapshot = snapshot;
    return gw::cli_run(run, std::cout, std::cerr);
  }
  if (*validate_cmd) return gw::cli_validate(validate_path, validate_json, std::cout, std::cerr);
  if (*serve_cmd) {
    if (*serve_seed_opt) serve.seed = serve_seed;
    serve.cadence = std::chrono::milliseconds(cadence_ms);
    serve.live_conformance = !no_live;
    return gw::cli_serve(serve, std::cout, std::cerr);
  }
  if (*diagram_cmd) {
    std::optional<std::string> conv;
    if (*conv_opt) conv = conversation;
    return gw::cli_diagram(diagram_path, conv, std::cout, std::cerr);
  }
  if (*replay_cmd) return gw::cli_replay(replay_scenario, replay_snapshot, replay_trace, std::cout, std::cerr);
  return gw::kExitInvalid;
}
