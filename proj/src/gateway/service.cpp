#include "agmarket/gateway/service.hpp"

#include <httplib.h>

#include "agmarket/market/json.hpp"

namespace agmarket::gateway {

using nlohmann::json;
using agents::RequestView;

Reply error_reply(int status, std::string code, std::string message, json detail) {
  return {status, {{"code", std::move(code)}, {"message", std::move(message)}, {"detail", std::move(detail)}}};
}

namespace {

std::optional<json> parse_body(const std::string& body, Reply& error) {
  try {
    auto j = json::parse(body);
    if (!j.is_object()) {
      error = error_reply(422, "ValidationError", "request body must be a JSON object");
      return std::nullopt;
    }
    return j;
  } catch (const json::parse_error& e) {
    error = error_reply(400, "InvalidJson", "request body is not valid JSON", e.what());
    return std::nullopt;
  }
}

struct Located {
  const RequestView* view = nullptr;
  bool interactive = false;
};

Located locate(const MarketRun& run, const std::string& request_id) {
  if (auto* c = run.interactive_customer())
    if (const auto* v = c->view(request_id)) return {v, true};
  for (const auto* c : run.customers())
    if (const auto* v = c->view(request_id)) return {v, false};
  return {};
}

bool collecting(const MarketRun& run, const std::string& request_id, const RequestView& view) {
  const auto* rec = run.broker().find_request(request_id);
  return !view.finished() && (!rec || rec->phase == agents::RequestRecord::Phase::Evaluating);
}

Reply unknown_request(const std::string& id) {
  return error_reply(404, "UnknownRequest", "no request " + id);
}

}  // namespace

Session::Session(Scenario scenario, std::optional<std::uint64_t> seed) : run_(std::move(scenario), seed) {
  if (!run_.interactive_customer())
    throw kernel::PreconditionViolation("serving needs a customer marked interactive");
}

Session::~Session() { stop(); }

void Session::start(std::chrono::milliseconds cadence) {
  std::lock_guard lk(mutex_);
  if (running_ || stopping_) return;
  running_ = true;
  ticker_ = std::thread([this, cadence] { loop(cadence); });
}

void Session::stop() {
  {
    std::lock_guard lk(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  if (ticker_.joinable()) ticker_.join();
  std::lock_guard lk(mutex_);
  for (auto& p : queue_) p.reply.set_value(error_reply(503, "Unavailable", "service is shutting down"));
  queue_.clear();
}

void Session::apply(MarketRun& run, Pending& pending) {
  try {
    pending.reply.set_value(pending.command(run));
  } catch (const std::exception& e) {
    pending.reply.set_value(error_reply(500, "InternalError", e.what()));
  }
}

void Session::loop(std::chrono::milliseconds cadence) {
  std::unique_lock lk(mutex_);
  while (!stopping_) {
    wake_.wait_for(lk, cadence, [this] { return stopping_; });
    if (stopping_) break;
    std::deque<Pending> batch;
    batch.swap(queue_);
    lk.unlock();
    for (auto& p : batch) apply(run_, p);
    run_.step();
    lk.lock();
  }
}

Reply Session::execute(Command command) {
  std::future<Reply> result;
  {
    std::lock_guard lk(mutex_);
    if (stopping_) return error_reply(503, "Unavailable", "service is shutting down");
    Pending p{std::move(command), {}};
    result = p.reply.get_future();
    if (running_) {
      queue_.push_back(std::move(p));
    } else {
      apply(run_, p);
    }
  }
  return result.get();
}

void Session::advance(Tick ticks) {
  std::lock_guard lk(mutex_);
  if (running_) throw kernel::PreconditionViolation("session is stepping on its own");
  for (Tick i = 0; i < ticks; ++i) run_.step();
}

bool Session::decided(const RequestView& view, const std::string& request_id) const {
  return view.finished() || view.selected.has_value() || pending_selection_.contains(request_id);
}

Reply Session::post_request(const std::string& body) {
  Reply error;
  auto j = parse_body(body, error);
  if (!j) return error;
  market::TransportRequest request;
  try {
    request = j->get<market::TransportRequest>();
  } catch (const json::exception& e) {
    return error_reply(422, "ValidationError", "malformed transport request", e.what());
  } catch (const market::InvalidValue& e) {
    return error_reply(422, "ValidationError", e.what());
  }
  auto probe = request;
  if (probe.request_id.empty()) probe.request_id = "pending";
  if (auto problem = market::check(probe)) return error_reply(422, "ValidationError", *problem);

  return execute([this, request](MarketRun& run) mutable -> Reply {
    if (request.request_id.empty()) {
      do {
        request.request_id = "req-" + std::to_string(++generated_ids_);
      } while (locate(run, request.request_id).view);
    }
    if (locate(run, request.request_id).view || run.broker().find_request(request.request_id))
      return error_reply(409, "DuplicateRequest", "request " + request.request_id + " already exists");
    const auto id = request.request_id;
    run.submit({std::move(request), {}, run.tick()});
    return {201, {{"request_id", id}}};
  });
}

Reply Session::get_proposals(const std::string& request_id) {
  return execute([request_id](MarketRun& run) -> Reply {
    auto [view, interactive] = locate(run, request_id);
    if (!view) return unknown_request(request_id);
    const auto* rec = run.broker().find_request(request_id);
    if (collecting(run, request_id, *view)) {
      return {202,
              {{"request_id", request_id},
               {"status", "collecting"},
               {"providers_queried", rec ? rec->providers_queried : 0},
               {"providers_replied", rec ? rec->providers_replied : 0},
               {"tick", run.tick()}}};
    }
    json last = nullptr;
    if (view->last_amendment_accepted) last = *view->last_amendment_accepted ? "accepted" : "rejected";
    return {200,
            {{"request_id", request_id},
             {"status", std::string(agents::to_string(view->status))},
             {"phase", rec ? json(std::string(agents::to_string(rec->phase))) : json(nullptr)},
             {"weights", rec ? rec->book.weights() : view->weights},
             {"proposals", rec ? json(rec->book.ranked()) : json::array()},
             {"selected", view->selected ? json(*view->selected) : json(nullptr)},
             {"reservation_id", view->reservation_id},
             {"last_amendment", last},
             {"detail", view->detail},
             {"tick", run.tick()}}};
  });
}

Reply Session::put_weights(const std::string& request_id, const std::string& body) {
  Reply error;
  auto j = parse_body(body, error);
  if (!j) return error;
  market::CriteriaProfile weights;
  try {
    weights = j->get<market::CriteriaProfile>();
  } catch (const market::InvalidValue& e) {
    return error_reply(422, "ValidationError", e.what());
  } catch (const json::exception& e) {
    return error_reply(422, "ValidationError", "weights must be numbers", e.what());
  }
  return execute([this, request_id, weights](MarketRun& run) -> Reply {
    auto [view, interactive] = locate(run, request_id);
    if (!view) return unknown_request(request_id);
    if (!interactive) return error_reply(409, "NotInteractive", "request " + request_id + " is scripted");
    if (decided(*view, request_id))
      return error_reply(409, "AlreadyDecided", "request " + request_id + " already has a selection");
    const bool early = collecting(run, request_id, *view);
    run.push_step(request_id, agents::ReweightStep{weights});
    return {early ? 202 : 200,
            {{"request_id", request_id}, {"status", early ? "queued" : "reranking"}, {"weights", weights}}};
  });
}

Reply Session::post_amendment(const std::string& request_id, const std::string& body) {
  Reply error;
  auto j = parse_body(body, error);
  if (!j) return error;
  agents::AmendStep step;
  market::Amendment amendment;
  try {
    amendment = j->get<market::Amendment>();
    if (j->contains("cost_factor")) step.cost_factor = j->at("cost_factor").get<double>();
  } catch (const json::exception& e) {
    return error_reply(422, "ValidationError", "malformed amendment", e.what());
  } catch (const market::InvalidValue& e) {
    return error_reply(422, "ValidationError", e.what());
  }
  const int targets = int(amendment.target_cost.has_value()) + int(amendment.target_delivery_time.has_value()) +
                      int(amendment.target_insurance.has_value()) + int(step.cost_factor.has_value());
  if (targets != 1)
    return error_reply(422, "ValidationError",
                       "exactly one of target_cost, target_delivery_time, target_insurance, cost_factor");
  if (step.cost_factor && !(*step.cost_factor > 0.0))
    return error_reply(422, "ValidationError", "cost_factor must be positive");
  step.itinerary_id = amendment.itinerary_id;
  step.target_cost = amendment.target_cost;
  step.target_delivery_time = amendment.target_delivery_time;
  step.target_insurance = amendment.target_insurance;

  return execute([this, request_id, step](MarketRun& run) -> Reply {
    auto [view, interactive] = locate(run, request_id);
    if (!view) return unknown_request(request_id);
    if (!interactive) return error_reply(409, "NotInteractive", "request " + request_id + " is scripted");
    if (collecting(run, request_id, *view))
      return error_reply(409, "NotPresented", "proposals for " + request_id + " are still being collected");
    const auto* rec = run.broker().find_request(request_id);
    const auto* p = rec ? rec->book.find(*step.itinerary_id) : nullptr;
    if (!p) return error_reply(404, "UnknownProposal", "no proposal " + *step.itinerary_id);
    if (decided(*view, request_id) || market::is_decided(p->status))
      return error_reply(409, "AlreadyDecided", "proposal " + *step.itinerary_id + " can no longer be amended",
                         std::string(market::to_string(p->status)));
    run.push_step(request_id, step);
    return {202, {{"request_id", request_id}, {"itinerary_id", *step.itinerary_id}, {"status", "pending"}}};
  });
}

Reply Session::post_selection(const std::string& request_id, const std::string& body) {
  Reply error;
  auto j = parse_body(body, error);
  if (!j) return error;
  auto it = j->find("itinerary_id");
  if (it == j->end() || !it->is_string())
    return error_reply(422, "ValidationError", "itinerary_id (string) is required");
  const std::string itinerary_id = *it;

  return execute([this, request_id, itinerary_id](MarketRun& run) -> Reply {
    auto [view, interactive] = locate(run, request_id);
    if (!view) return unknown_request(request_id);
    if (!interactive) return error_reply(409, "NotInteractive", "request " + request_id + " is scripted");
    if (collecting(run, request_id, *view))
      return error_reply(409, "NotPresented", "proposals for " + request_id + " are still being collected");
    const auto* rec = run.broker().find_request(request_id);
    const auto* p = rec ? rec->book.find(itinerary_id) : nullptr;
    if (!p) return error_reply(404, "UnknownProposal", "no proposal " + itinerary_id);
    if (decided(*view, request_id) || market::is_decided(p->status))
      return error_reply(409, "AlreadyDecided", "request " + request_id + " already has a selection",
                         std::string(market::to_string(p->status)));
    agents::SelectStep step;
    step.kind = agents::SelectStep::Kind::ItineraryId;
    step.itinerary_id = itinerary_id;
    run.push_step(request_id, step);
    pending_selection_[request_id] = itinerary_id;
    return {202, {{"request_id", request_id}, {"itinerary_id", itinerary_id}, {"status", "pending"}}};
  });
}

Reply Session::get_trace(const std::optional<std::string>& conversation) {
  return execute([conversation](MarketRun& run) -> Reply {
    std::vector<messaging::TraceEvent> events;
    for (const auto& e : run.trace()) {
      if (conversation && e.conversation_id != *conversation &&
          e.conversation_id.rfind(*conversation + "/", 0) != 0)
        continue;
      events.push_back(e);
    }
    json rows = json::array();
    for (const auto& e : events) rows.push_back(json::parse(messaging::to_json_line(e)));
    auto renumbered = events;
    for (std::size_t i = 0; i < renumbered.size(); ++i) renumbered[i].seq = i;
    return {200, {{"tick", run.tick()}, {"events", rows}, {"diagram", messaging::render_sequence_diagram(renumbered)}}};
  });
}

Reply Session::get_network() {
  return execute([](MarketRun& run) -> Reply {
    json cache = json::object();
    for (const auto& [provider, legs] : run.broker().network()) {
      json list = json::array();
      for (const auto& [id, leg] : legs) list.push_back(leg);
      cache[provider] = list;
    }
    return {200, {{"tick", run.tick()}, {"providers", run.snapshot()["providers"]}, {"broker_view", cache}}};
  });
}

// ---- HTTP

struct HttpService::Impl {
  explicit Impl(Session& s) : session(s) {}

  Session& session;
  httplib::Server server;
  std::thread thread;
};

namespace {

void send(httplib::Response& res, const Reply& reply) {
  res.status = reply.status;
  res.set_content(reply.body.dump(), "application/json");
}

}  // namespace

HttpService::HttpService(Session& session) : impl_(std::make_unique<Impl>(session)) {
  auto& svr = impl_->server;
  Session& s = session;
  // no SO_REUSEPORT: a second server on a busy port must fail to bind
  svr.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  svr.Post("/api/requests", [&s](const httplib::Request& req, httplib::Response& res) {
    send(res, s.post_request(req.body));
  });
  svr.Get(R"(/api/requests/([^/]+)/proposals)", [&s](const httplib::Request& req, httplib::Response& res) {
    send(res, s.get_proposals(req.matches[1]));
  });
  svr.Put(R"(/api/requests/([^/]+)/weights)", [&s](const httplib::Request& req, httplib::Response& res) {
    send(res, s.put_weights(req.matches[1], req.body));
  });
  svr.Post(R"(/api/requests/([^/]+)/amendments)", [&s](const httplib::Request& req, httplib::Response& res) {
    send(res, s.post_amendment(req.matches[1], req.body));
  });
  svr.Post(R"(/api/requests/([^/]+)/selection)", [&s](const httplib::Request& req, httplib::Response& res) {
    send(res, s.post_selection(req.matches[1], req.body));
  });
  svr.Get("/api/trace", [&s](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> conv;
    if (req.has_param("conversation")) conv = req.get_param_value("conversation");
    send(res, s.get_trace(conv));
  });
  svr.Get("/api/network", [&s](const httplib::Request&, httplib::Response& res) { send(res, s.get_network()); });
  svr.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  svr.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    send(res, error_reply(res.status, res.status == 404 ? "NotFound" : "HttpError",
                          "no route for " + req.method + " " + req.path));
  });
}

HttpService::~HttpService() { stop(); }

int HttpService::start(const std::string& host, int port) {
  auto& svr = impl_->server;
  int bound = port;
  if (port == 0) {
    bound = svr.bind_to_any_port(host);
    if (bound < 0) throw BindError("cannot bind " + host + " to a free port");
  } else if (!svr.bind_to_port(host, port)) {
    throw BindError("cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([&svr] { svr.listen_after_bind(); });
  svr.wait_until_ready();
  return bound;
}

void HttpService::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

bool HttpService::running() const { return impl_->server.is_running(); }

}  // namespace agmarket::gateway
