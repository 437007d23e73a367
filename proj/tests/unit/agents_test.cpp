#include <gtest/gtest.h>

#include <algorithm>

#include "agmarket/agents/broker.hpp"
#include "agmarket/agents/customer.hpp"
#include "agmarket/agents/protocol.hpp"
#include "agmarket/agents/provider.hpp"
#include "agmarket/market/scoring.hpp"
#include "oracles.hpp"

using namespace agmarket;
using namespace agmarket::agents;
using market::Money;
using market::RouteLeg;
using messaging::AclMessage;
using messaging::BodyTag;
using messaging::ErrorInfo;
using messaging::Performative;

namespace {

RouteLeg leg(std::string id, std::string from, std::string to, market::Minutes dep, market::Minutes arr,
             double cost, market::CargoUnits cap, int insurance) {
  return {std::move(id), {}, std::move(from), std::move(to), dep, arr, Money::from_decimal(cost), cap, insurance};
}

std::vector<RouteLeg> provider1_legs() {
  return {leg("p1-tun-sou", "TUN", "SOU", 0, 90, 120, 10, 3),
          leg("p1-sou-gab", "SOU", "GAB", 120, 240, 150, 10, 3),
          leg("p1-tun-gab", "TUN", "GAB", 30, 330, 320, 6, 4)};
}

std::vector<RouteLeg> provider2_legs() {
  return {leg("p2-tun-sfx", "TUN", "SFX", 10, 130, 140, 8, 2),
          leg("p2-sfx-gab", "SFX", "GAB", 150, 230, 90, 8, 2),
          leg("p2-sou-gab", "SOU", "GAB", 100, 200, 110, 4, 1)};
}

market::TransportRequest request(std::string id, market::CargoUnits cargo = 3) {
  market::TransportRequest r;
  r.request_id = std::move(id);
  r.origin = "TUN";
  r.destination = "GAB";
  r.cargo_size = cargo;
  r.earliest_pickup = 0;
  r.latest_delivery = 600;
  r.constraints.max_legs = 3;
  r.weights = market::CriteriaProfile(0.5, 0.3, 0.2);
  return r;
}

ScriptEntry entry(market::TransportRequest r, std::vector<ScriptStep> steps) {
  return {std::move(r), std::move(steps), 0};
}

SelectStep best() { return {}; }

SelectStep by_legs(std::vector<std::string> legs) {
  SelectStep s;
  s.kind = SelectStep::Kind::Legs;
  s.legs = std::move(legs);
  return s;
}

/// Baseline market: customers first, then the broker and two providers.
struct Market {
  kernel::Runtime rt{42};
  std::vector<CustomerAgent*> customers;
  BrokerAgent* broker = nullptr;
  ProviderAgent* p1 = nullptr;
  ProviderAgent* p2 = nullptr;
  RoleMap roles;

  explicit Market(std::vector<std::vector<ScriptEntry>> scripts, BrokerConfig config = {},
                  ProviderConfig c1 = {market::ConcessionPolicy::from_fraction(0.10), false},
                  ProviderConfig c2 = {market::ConcessionPolicy::from_fraction(0.05), false}) {
    config.limits.transfer_slack = 10;
    int n = 0;
    for (auto& script : scripts) {
      std::string name = "customer" + std::to_string(++n);
      customers.push_back(&rt.spawn_as<CustomerAgent>(name, "Customer", std::move(script)));
      roles[name] = model::Role::Customer;
    }
    broker = &rt.spawn_as<BrokerAgent>("broker", "Broker", config);
    p1 = &rt.spawn_as<ProviderAgent>("provider1", "Provider",
                                     market::ProviderPlan({"provider1", 0}, provider1_legs()), c1);
    p2 = &rt.spawn_as<ProviderAgent>("provider2", "Provider",
                                     market::ProviderPlan({"provider2", 0}, provider2_legs()), c2);
    roles["broker"] = model::Role::Broker;
    roles["provider1"] = model::Role::Provider;
    roles["provider2"] = model::Role::Provider;
  }

  kernel::RunResult run(Tick max = 400) { return rt.run_until_quiescent(max); }
  std::vector<messaging::TraceEvent> trace() const { return rt.post_office().export_trace(); }
  ProtocolReport protocol() const {
    auto t = trace();
    return check_protocol(t, roles);
  }
};

std::set<std::string> legs_of(const market::Proposal& p) {
  std::set<std::string> ids;
  for (const auto& l : p.itinerary.legs) ids.insert(l.leg_id);
  return ids;
}

AclMessage message(Performative p, messaging::Body body) {
  AclMessage m;
  m.performative = p;
  m.sender = {"x", 0};
  m.receivers = {{"y", 1}};
  m.conversation_id = "c";
  m.content = messaging::make_payload(std::move(body));
  return m;
}

}  // namespace

TEST(Perception, BrokerMapsRequestsToInitiateAndRepliesToContinue) {
  auto t = broker_perception();
  auto g = perceive(t, message(Performative::Request, request("r")));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].name, "serve-transport-request");
  EXPECT_EQ(g[0].kind, GoalKind::Initiate);

  g = perceive(t, message(Performative::Inform, request("r")));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].name, "serve-transport-request");

  g = perceive(t, message(Performative::Propose, messaging::LegOffer{"r", {}}));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].name, "provider-response");
  EXPECT_EQ(g[0].kind, GoalKind::Continue);

  EXPECT_TRUE(perceive(t, message(Performative::Cfp, request("r"))).empty());
}

TEST(Perception, NoticesAreRecognised) {
  EXPECT_TRUE(is_notice(message(Performative::NotUnderstood, ErrorInfo{"a", "b"})));
  EXPECT_TRUE(is_notice(message(Performative::Failure, ErrorInfo{"a", "b"})));
  EXPECT_TRUE(is_notice(message(Performative::Inform, ErrorInfo{"a", "b"})));
  EXPECT_FALSE(is_notice(message(Performative::Inform, messaging::Selection{"r", "i"})));
}

TEST(PlanLibrary, EveryPerceivedGoalHasAPlan) {
  for (auto role : {model::Role::Customer, model::Role::Broker, model::Role::Provider}) {
    auto lib = library_for(role);
    for (const auto& rule : perception_for(role)) EXPECT_TRUE(lib.contains(rule.goal)) << rule.goal;
    EXPECT_TRUE(lib.contains(kRecordNotice));
  }
}

TEST(PlanLibrary, UnknownGoalThrowsNoPlan) {
  EXPECT_THROW(broker_library().retrieve("fly-to-the-moon"), NoPlan);
  EXPECT_NE(broker_library().describe().find("ValidateRequirements --valid--> QueryProviders"),
            std::string::npos);
}

TEST(Market, BaselineRequestIsConfirmed) {
  Market m({{entry(request("req-1"), {best()})}});
  auto result = m.run();
  ASSERT_TRUE(result.quiescent);

  const auto* view = m.customers[0]->view("req-1");
  ASSERT_NE(view, nullptr);
  EXPECT_EQ(view->status, RequestView::Status::Confirmed) << view->detail;
  EXPECT_EQ(view->proposals.size(), 4u);

  const auto* rec = m.broker->find_request("req-1");
  ASSERT_NE(rec, nullptr);
  EXPECT_EQ(rec->phase, RequestRecord::Phase::Presented);
  EXPECT_EQ(rec->providers_queried, 2u);
  EXPECT_EQ(rec->providers_replied, 2u);
  const auto* chosen = rec->book.find(*view->selected);
  ASSERT_NE(chosen, nullptr);
  EXPECT_EQ(chosen->status, market::ProposalStatus::Confirmed);
  EXPECT_EQ(*view->selected, view->proposals.front().itinerary.itinerary_id);

  // Capacity moved by exactly the cargo size on the chosen legs.
  for (const auto& l : chosen->itinerary.legs) {
    const auto& plan = l.provider.name == "provider1" ? m.p1->plan() : m.p2->plan();
    EXPECT_EQ(plan.reserved_units(l.leg_id), 3);
    EXPECT_EQ(plan.leg(l.leg_id).capacity, plan.initial_capacity(l.leg_id) - 3);
    // The broker's cache saw the plan update.
    EXPECT_EQ(m.broker->network().at(l.provider.name).at(l.leg_id).capacity,
              plan.leg(l.leg_id).capacity);
  }

  auto report = m.protocol();
  EXPECT_TRUE(report.valid()) << report.to_json().dump(2);
  EXPECT_EQ(m.broker->running_plans(), 0u);
}

TEST(Market, PlanPathsFollowTheirSpecs) {
  Market m({{entry(request("req-1"), {best()})}});
  m.run();
  std::vector<const MarketAgent*> agents{m.customers[0], m.broker, m.p1, m.p2};
  std::size_t checked = 0;
  for (const auto* a : agents) {
    for (const auto& rec : a->plans()) {
      auto spec = a->library().retrieve(rec.goal);
      ASSERT_TRUE(rec.outcome) << rec.plan;
      EXPECT_FALSE(rec.no_transition) << rec.plan;
      ASSERT_FALSE(rec.path.empty());
      EXPECT_EQ(rec.path.front(), spec->initial);
      EXPECT_TRUE(spec->is_terminal(rec.path.back()));
      for (std::size_t i = 1; i < rec.path.size(); ++i) {
        bool linked = std::any_of(spec->transitions.begin(), spec->transitions.end(), [&](const auto& t) {
          return t.first.first == rec.path[i - 1] && t.second == rec.path[i];
        });
        EXPECT_TRUE(linked) << rec.plan << ": " << rec.path[i - 1] << " -> " << rec.path[i];
      }
      ++checked;
    }
  }
  EXPECT_GE(checked, 8u);
}

TEST(Market, IdenticalSeedsGiveIdenticalTraces) {
  auto once = [] {
    Market m({{entry(request("req-1"), {best()})}, {entry(request("req-2", 2), {best()})}});
    m.run();
    auto t = m.trace();
    return messaging::to_jsonl(t);
  };
  EXPECT_EQ(once(), once());
}

TEST(Market, MalformedRequestIsNotUnderstood) {
  auto bad = request("req-bad");
  bad.cargo_size = 0;
  Market m({{entry(bad, {best()})}});
  ASSERT_TRUE(m.run().quiescent);
  const auto* view = m.customers[0]->view("req-bad");
  EXPECT_EQ(view->status, RequestView::Status::Rejected);
  EXPECT_NE(view->detail.find("invalid-request"), std::string::npos);
  EXPECT_EQ(m.broker->find_request("req-bad")->phase, RequestRecord::Phase::Rejected);
  auto t = m.trace();
  ASSERT_FALSE(t.empty());
  EXPECT_EQ(t.back().performative, Performative::NotUnderstood);
  EXPECT_TRUE(m.protocol().valid());
}

TEST(Market, ProvidersRefuseWhenNothingFits) {
  auto r = request("req-huge", 50);
  Market m({{entry(r, {best()})}});
  ASSERT_TRUE(m.run().quiescent);
  EXPECT_EQ(m.customers[0]->view("req-huge")->status, RequestView::Status::NoSolution);
  auto t = m.trace();
  EXPECT_EQ(std::count_if(t.begin(), t.end(), [](const auto& e) { return e.performative == Performative::Refuse; }),
            2);
  EXPECT_TRUE(m.protocol().valid());
}

TEST(Market, NoFeasibleChainIsReported) {
  auto r = request("req-far");
  r.destination = "XYZ";
  Market m({{entry(r, {best()})}});
  ASSERT_TRUE(m.run().quiescent);
  const auto* view = m.customers[0]->view("req-far");
  EXPECT_EQ(view->status, RequestView::Status::NoSolution);
  EXPECT_NE(view->detail.find("no-solution"), std::string::npos);
}

TEST(Market, RefusedReservationRollsBack) {
  const std::vector<std::string> path{"p1-tun-sou", "p2-sou-gab"};
  Market m({{entry(request("req-a"), {by_legs(path)})}, {entry(request("req-b"), {by_legs(path)})}});
  ASSERT_TRUE(m.run().quiescent);

  EXPECT_EQ(m.customers[0]->view("req-a")->status, RequestView::Status::Confirmed);
  const auto* lost = m.customers[1]->view("req-b");
  EXPECT_EQ(lost->status, RequestView::Status::Failed);
  EXPECT_NE(lost->detail.find("provider2"), std::string::npos);

  // Only the winner's units stay reserved.
  EXPECT_EQ(m.p1->plan().reserved_units("p1-tun-sou"), 3);
  EXPECT_EQ(m.p1->plan().leg("p1-tun-sou").capacity, 7);
  EXPECT_EQ(m.p2->plan().reserved_units("p2-sou-gab"), 3);
  EXPECT_EQ(m.p2->plan().leg("p2-sou-gab").capacity, 1);
  EXPECT_EQ(m.p1->plan().reservations().size(), 1u);

  const auto* rec = m.broker->find_request("req-b");
  EXPECT_EQ(rec->book.find(*lost->selected)->status, market::ProposalStatus::Failed);
  auto report = m.protocol();
  EXPECT_TRUE(report.valid()) << report.to_json().dump(2);
}

TEST(Market, UnknownSelectionFails) {
  SelectStep s;
  s.kind = SelectStep::Kind::ItineraryId;
  s.itinerary_id = "it-0000000000000000";
  Market m({{entry(request("req-1"), {s})}});
  ASSERT_TRUE(m.run().quiescent);
  const auto* view = m.customers[0]->view("req-1");
  EXPECT_EQ(view->status, RequestView::Status::Failed);
  EXPECT_NE(view->detail.find("unknown-proposal"), std::string::npos);
  EXPECT_TRUE(m.p1->plan().reservations().empty());
  EXPECT_TRUE(m.p2->plan().reservations().empty());
}

TEST(Market, AmendmentWithinConcessionIsAccepted) {
  AmendStep amend;
  amend.cost_factor = 0.96;
  Market m({{entry(request("req-1"), {amend, best()})}});
  ASSERT_TRUE(m.run().quiescent);
  const auto* view = m.customers[0]->view("req-1");
  ASSERT_TRUE(view->last_amendment_accepted);
  EXPECT_TRUE(*view->last_amendment_accepted);
  auto amended = std::find_if(view->proposals.begin(), view->proposals.end(), [](const auto& p) {
    return p.status == market::ProposalStatus::Amended;
  });
  ASSERT_NE(amended, view->proposals.end());
  EXPECT_TRUE(m.protocol().valid());
}

TEST(Market, AmendmentBeyondConcessionIsRejected) {
  AmendStep amend;
  amend.cost_factor = 0.5;
  Market m({{entry(request("req-1"), {amend, SelectStep{SelectStep::Kind::None, 0, {}, {}}})}});
  ASSERT_TRUE(m.run().quiescent);
  const auto* view = m.customers[0]->view("req-1");
  ASSERT_TRUE(view->last_amendment_accepted);
  EXPECT_FALSE(*view->last_amendment_accepted);
  EXPECT_EQ(view->status, RequestView::Status::Closed);
  for (const auto& p : view->proposals) EXPECT_EQ(p.status, market::ProposalStatus::Offered);
}

TEST(Market, ReweightReranksAgainstOracle) {
  const market::CriteriaProfile time_only(0.0, 1.0, 0.0);
  Market m({{entry(request("req-1"), {ReweightStep{time_only}, SelectStep{SelectStep::Kind::None, 0, {}, {}}})}});
  ASSERT_TRUE(m.run().quiescent);
  const auto* view = m.customers[0]->view("req-1");
  ASSERT_EQ(view->proposals.size(), 4u);
  EXPECT_EQ(view->weights, time_only);

  std::vector<market::Itinerary> pool;
  for (const auto& p : view->proposals) pool.push_back(p.itinerary);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto o = agmarket::testing::oracle_score(pool[i], pool, 0.0, 1.0, 0.0);
    EXPECT_NEAR(view->proposals[i].score, static_cast<double>(o.total), 1e-9);
    if (i > 0) EXPECT_GE(view->proposals[i - 1].score + 1e-9, view->proposals[i].score);
  }
  // Fastest delivery first: TUN-SOU by provider1, then SOU-GAB by provider2.
  EXPECT_EQ(legs_of(view->proposals.front()), (std::set<std::string>{"p1-tun-sou", "p2-sou-gab"}));
  EXPECT_EQ(view->conversations.size(), 2u);
  EXPECT_TRUE(m.protocol().valid());
}

TEST(Market, SilentProviderIsCutOffByDeadline) {
  BrokerConfig config;
  config.reply_deadline = 15;
  Market m({{entry(request("req-1"), {best()})}}, config, {market::ConcessionPolicy{}, true});
  auto result = m.run();
  ASSERT_TRUE(result.quiescent);
  const auto* rec = m.broker->find_request("req-1");
  EXPECT_EQ(rec->providers_replied, 1u);
  const auto* view = m.customers[0]->view("req-1");
  EXPECT_EQ(view->status, RequestView::Status::Confirmed);
  for (const auto& p : view->proposals)
    for (const auto& l : p.itinerary.legs) EXPECT_EQ(l.provider.name, "provider2");
  EXPECT_GE(result.ticks, 15);
}

TEST(Market, SilentProviderWithoutDeadlineNeverSettles) {
  BrokerConfig config;
  config.reply_deadline = std::nullopt;
  Market m({{entry(request("req-1"), {best()})}}, config, {market::ConcessionPolicy{}, true});
  auto result = m.run(100);
  EXPECT_FALSE(result.quiescent);
  EXPECT_TRUE(result.budget_exceeded);
  EXPECT_FALSE(m.protocol().valid());
}

TEST(Market, InteractiveCustomerWaitsForSteps) {
  kernel::Runtime rt(7);
  auto& customer = rt.spawn_as<CustomerAgent>("customer1", "Customer", std::vector<ScriptEntry>{}, true);
  rt.spawn_as<BrokerAgent>("broker", "Broker", BrokerConfig{20, {4, 10}, 5});
  auto& p1 = rt.spawn_as<ProviderAgent>("provider1", "Provider",
                                        market::ProviderPlan({"provider1", 0}, provider1_legs()));
  for (int i = 0; i < 5; ++i) rt.step();

  customer.submit(rt, entry(request("req-9"), {}));
  EXPECT_THROW(customer.submit(rt, entry(request("req-9"), {})), DuplicateRequest);
  for (int i = 0; i < 30; ++i) rt.step();
  EXPECT_EQ(customer.view("req-9")->status, RequestView::Status::Reviewing);
  EXPECT_FALSE(rt.quiescent());

  customer.push_step(rt, "req-9", best());
  for (int i = 0; i < 30; ++i) rt.step();
  EXPECT_EQ(customer.view("req-9")->status, RequestView::Status::Confirmed);
  EXPECT_FALSE(p1.plan().reservations().empty());
  EXPECT_THROW(customer.push_step(rt, "req-9", best()), kernel::PreconditionViolation);
  EXPECT_THROW(customer.push_step(rt, "nope", best()), std::out_of_range);
  EXPECT_TRUE(rt.quiescent());
}

TEST(Protocol, ForeignMessageIsADeviation) {
  std::vector<messaging::TraceEvent> trace{
      {0, 1, "x/1", Performative::Inform, "customer1", "provider1", "ErrorInfo{note: hi}"}};
  RoleMap roles{{"customer1", model::Role::Customer}, {"provider1", model::Role::Provider}};
  auto report = check_protocol(trace, roles);
  ASSERT_EQ(report.deviations.size(), 1u);
  EXPECT_EQ(report.deviations[0].seq, 0u);
  EXPECT_TRUE(report.unfinished.empty());
}

TEST(Protocol, UnansweredRequestIsUnfinished) {
  std::vector<messaging::TraceEvent> trace{
      {0, 1, "r/1", Performative::Request, "c", "b", "TransportRequest{r TUN->GAB}"}};
  auto report = check_protocol(trace, {{"c", model::Role::Customer}, {"b", model::Role::Broker}});
  EXPECT_TRUE(report.deviations.empty());
  ASSERT_EQ(report.unfinished.size(), 1u);
  EXPECT_EQ(report.unfinished[0].state, "Requested");
  EXPECT_EQ(summary_tag("ReservationResult{confirmed x}"), BodyTag::ReservationResult);
  EXPECT_FALSE(summary_tag("garbage"));
}
