#include "agmarket/gateway/cli.hpp"

#include <atomic>
#include <csignal>
#include <fstream>
#include <sstream>
#include <thread>

#include "agmarket/gateway/market_run.hpp"
#include "agmarket/gateway/scenario.hpp"
#include "agmarket/gateway/service.hpp"

namespace agmarket::gateway {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::optional<Scenario> load(const fs::path& path, std::ostream& err) {
  try {
    return load_scenario_file(path);
  } catch (const ScenarioIoError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const model::UnknownActorReference& e) {
    err << "error: " << path.string() << ": UnknownActorReference at " << e.what() << "\n";
  } catch (const model::ParseError& e) {
    err << "error: " << path.string() << ": " << e.what() << "\n";
  }
  return std::nullopt;
}

bool write_file(const fs::path& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (f) f << text;
  if (!f) {
    err << "error: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

std::optional<std::string> read_file(const fs::path& path, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot read " << path.string() << "\n";
    return std::nullopt;
  }
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void print_report(const model::ValidationReport& r, std::ostream& out) {
  if (r.valid()) {
    out << "valid\n";
    return;
  }
  out << "invalid\n";
  for (const auto& u : r.uncovered)
    out << "  uncovered: " << u.dependency.dependum << " (" << u.dependency.dependor << " -> "
        << u.dependency.dependee << ", no capacity of " << u.actor << ")\n";
  for (const auto& c : r.idle_capacities) out << "  idle capacity: " << c << "\n";
  for (const auto& m : r.missing_edges)
    out << "  missing acquaintance: " << m.edge.first << " -> " << m.edge.second << " for "
        << m.dependency.dependum << "\n";
}

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

}  // namespace

int cli_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  auto scenario = load(options.scenario, err);
  if (!scenario) return kExitInvalid;
  const auto report = model::validate_model(scenario->model);
  if (!report.valid()) {
    err << "error: " << options.scenario.string() << ": organizational model is invalid\n";
    print_report(report, err);
    return kExitInvalid;
  }

  MarketRun run(std::move(*scenario), options.seed);
  kernel::RunResult result;
  try {
    result = run.run(options.max_ticks);
  } catch (const kernel::PreconditionViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  const auto trace = run.trace();
  if (!write_file(options.trace, messaging::to_jsonl(trace), err)) return kExitIo;
  if (options.snapshot && !write_file(*options.snapshot, run.snapshot().dump(2) + "\n", err)) return kExitIo;

  if (!options.quiet) out << messaging::render_sequence_diagram(trace) << "\n";
  const auto violations = run.violations();
  const auto protocol = run.protocol();
  out << "ticks: " << result.ticks << (result.quiescent ? " (quiescent)" : " (budget exceeded)") << "\n";
  out << "events: " << trace.size() << "\n";
  out << "conformance: " << violations.size() << " violation(s)\n";
  for (const auto& v : violations)
    out << "  #" << v.event_seq << " " << v.sender << " -> " << v.receiver << ": " << v.reason << "\n";
  out << "protocol: " << protocol.conversations << " conversation(s), " << protocol.deviations.size()
      << " deviation(s), " << protocol.unfinished.size() << " unfinished\n";
  for (const auto& d : protocol.deviations)
    out << "  #" << d.seq << " " << d.conversation_id << " in " << d.state << ": " << d.reason << "\n";
  for (const auto& u : protocol.unfinished) out << "  " << u.conversation_id << " stuck in " << u.state << "\n";
  for (const auto* c : run.customers())
    for (const auto& [rid, v] : c->views())
      out << "request " << rid << ": " << agents::to_string(v.status)
          << (v.reservation_id.empty() ? "" : " " + v.reservation_id) << "\n";

  if (!result.quiescent) return kExitBudget;
  if (!violations.empty() || !protocol.valid()) return kExitNonConformant;
  return kExitOk;
}

int cli_validate(const fs::path& path, bool as_json, std::ostream& out, std::ostream& err) {
  auto scenario = load(path, err);
  if (!scenario) return kExitInvalid;
  const auto report = model::validate_model(scenario->model);
  if (as_json) {
    auto j = report.to_json();
    j["valid"] = report.valid();
    out << j.dump(2) << "\n";
  } else {
    print_report(report, out);
  }
  return report.valid() ? kExitOk : kExitIo;
}

int cli_diagram(const fs::path& path, const std::optional<std::string>& conversation, std::ostream& out,
                std::ostream& err) {
  auto text = read_file(path, err);
  if (!text) return kExitIo;
  try {
    auto events = messaging::parse_jsonl(*text);
    if (conversation) {
      std::erase_if(events, [&](const messaging::TraceEvent& e) {
        return e.conversation_id != *conversation && e.conversation_id.rfind(*conversation + "/", 0) != 0;
      });
      for (std::size_t i = 0; i < events.size(); ++i) events[i].seq = i;
    }
    out << messaging::render_sequence_diagram(events);
  } catch (const messaging::MalformedTrace& e) {
    err << "error: " << path.string() << ": " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}

int cli_replay(const fs::path& scenario_path, const fs::path& snapshot_path, const fs::path& trace_path,
               std::ostream& out, std::ostream& err) {
  auto scenario = load(scenario_path, err);
  if (!scenario) return kExitInvalid;
  auto snap_text = read_file(snapshot_path, err);
  auto trace_text = read_file(trace_path, err);
  if (!snap_text || !trace_text) return kExitIo;
  json snapshot;
  std::vector<messaging::TraceEvent> trace;
  try {
    snapshot = json::parse(*snap_text);
    trace = messaging::parse_jsonl(*trace_text);
  } catch (const json::exception& e) {
    err << "error: " << snapshot_path.string() << ": " << e.what() << "\n";
    return kExitInvalid;
  } catch (const messaging::MalformedTrace& e) {
    err << "error: " << trace_path.string() << ": " << e.what() << "\n";
    return kExitInvalid;
  }
  ReplayReport r;
  try {
    r = replay(*scenario, snapshot, trace);
  } catch (const std::exception& e) {
    err << "error: replay failed: " << e.what() << "\n";
    return kExitInvalid;
  }
  out << "trace: " << (r.trace_matches ? "identical" : "diverged");
  if (r.first_divergence) out << " at #" << *r.first_divergence;
  out << "\nstate: " << (r.state_matches ? "identical" : "diverged") << "\n";
  return r.identical() ? kExitOk : kExitDiverged;
}

int cli_serve(const ServeOptions& options, std::ostream& out, std::ostream& err) {
  auto scenario = load(options.scenario, err);
  if (!scenario) return kExitInvalid;
  if (!scenario->interactive_customer()) {
    err << "error: " << options.scenario.string() << ": no customer is marked interactive\n";
    return kExitInvalid;
  }
  Session session(std::move(*scenario), options.seed);
  if (options.live_conformance) {
    session.execute([&err](MarketRun& run) -> Reply {
      run.set_live_conformance([&err](const model::Violation& v) {
        err << "violation #" << v.event_seq << " " << v.sender << " -> " << v.receiver << ": " << v.reason << "\n";
      });
      return {200, nullptr};
    });
  }
  HttpService http(session);
  int port = 0;
  try {
    port = http.start(options.host, options.port);
  } catch (const BindError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  session.start(options.cadence);
  out << "listening on http://" << options.host << ":" << port << "\n" << std::flush;

  g_interrupted = false;
  auto prev_int = std::signal(SIGINT, on_signal);
  auto prev_term = std::signal(SIGTERM, on_signal);
  while (!g_interrupted && http.running()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  std::signal(SIGINT, prev_int);
  std::signal(SIGTERM, prev_term);

  http.stop();
  session.stop();
  out << "stopped\n";
  return kExitOk;
}

}  // namespace agmarket::gateway
