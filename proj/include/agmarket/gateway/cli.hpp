#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "agmarket/kernel/agent_id.hpp"

namespace agmarket::gateway {

/// Process exit statuses shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,  // also: validate found an invalid model
  kExitInvalid = 2,
  kExitBudget = 3,
  kExitNonConformant = 4,
  kExitDiverged = 5,
};

struct RunOptions {
  std::filesystem::path scenario;
  std::optional<std::uint64_t> seed;
  std::filesystem::path trace;
  std::optional<Tick> max_ticks;
  std::optional<std::filesystem::path> snapshot;
  bool quiet = false;  // skip the diagram
};

int cli_run(const RunOptions& options, std::ostream& out, std::ostream& err);
/// `as_json` prints the report object instead of text.
int cli_validate(const std::filesystem::path& scenario, bool as_json, std::ostream& out, std::ostream& err);
int cli_diagram(const std::filesystem::path& trace, const std::optional<std::string>& conversation,
                std::ostream& out, std::ostream& err);
int cli_replay(const std::filesystem::path& scenario, const std::filesystem::path& snapshot,
               const std::filesystem::path& trace, std::ostream& out, std::ostream& err);

struct ServeOptions {
  std::filesystem::path scenario;
  std::optional<std::uint64_t> seed;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::chrono::milliseconds cadence{50};
  bool live_conformance = true;
};

/// Runs until SIGINT/SIGTERM.
int cli_serve(const ServeOptions& options, std::ostream& out, std::ostream& err);

}  // namespace agmarket::gateway
