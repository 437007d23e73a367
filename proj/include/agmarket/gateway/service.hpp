#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include <json.hpp>

#include "agmarket/gateway/market_run.hpp"

namespace agmarket::gateway {

class BindError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Reply {
  int status = 200;
  nlohmann::json body;
};

/// {code, message, detail}
Reply error_reply(int status, std::string code, std::string message, nlohmann::json detail = nullptr);

/// Serialized access to one MarketRun: commands queue up from any thread
/// and are applied, in arrival order, between kernel steps.
class Session {
 public:
  using Command = std::function<Reply(MarketRun&)>;

  /// Throws kernel::PreconditionViolation unless the scenario marks a
  /// customer as interactive.
  explicit Session(Scenario scenario, std::optional<std::uint64_t> seed = std::nullopt);
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// Starts the stepping thread: one tick per `cadence`.
  void start(std::chrono::milliseconds cadence);
  void stop();

  /// Blocks until the command has been applied. Without a running
  /// stepping thread the command runs inline. After stop(), replies 503.
  Reply execute(Command command);
  /// Steps the kernel directly; only while the stepping thread is not
  /// running (tests drive the session this way).
  void advance(Tick ticks);

  // Handlers for the HTTP API; each runs as a queued command.
  Reply post_request(const std::string& body);
  Reply get_proposals(const std::string& request_id);
  Reply put_weights(const std::string& request_id, const std::string& body);
  Reply post_amendment(const std::string& request_id, const std::string& body);
  Reply post_selection(const std::string& request_id, const std::string& body);
  Reply get_trace(const std::optional<std::string>& conversation);
  Reply get_network();

 private:
  struct Pending {
    Command command;
    std::promise<Reply> reply;
  };

  void loop(std::chrono::milliseconds cadence);
  static void apply(MarketRun& run, Pending& pending);
  bool decided(const agents::RequestView& view, const std::string& request_id) const;

  MarketRun run_;
  /// Selections accepted but not yet seen by the customer.
  std::map<std::string, std::string> pending_selection_;
  std::size_t generated_ids_ = 0;

  std::mutex mutex_;
  std::condition_variable wake_;
  std::deque<Pending> queue_;
  bool stopping_ = false;
  bool running_ = false;
  std::thread ticker_;
};

/// HTTP front end over a Session.
class HttpService {
 public:
  explicit HttpService(Session& session);
  ~HttpService();

  /// Binds (port 0 picks a free port) and serves on a background thread.
  /// Returns the bound port; throws BindError.
  int start(const std::string& host, int port);
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace agmarket::gateway
