#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "agmarket/market/amendment.hpp"
#include "agmarket/market/composition.hpp"
#include "agmarket/market/json.hpp"
#include "agmarket/market/network_generator.hpp"
#include "agmarket/market/proposal_book.hpp"
#include "agmarket/market/provider_plan.hpp"
#include "agmarket/market/scoring.hpp"
#include "oracles.hpp"

namespace agmarket::market {
namespace {

const AgentId kP1{"provider1", 2};
const AgentId kP2{"provider2", 3};

RouteLeg make_leg(std::string id, const AgentId& provider, std::string from, std::string to,
                  Minutes depart, Minutes arrive, std::int64_t cents, CargoUnits capacity = 10,
                  int insurance = 3) {
  return RouteLeg{std::move(id), provider, std::move(from), std::move(to), depart, arrive,
                  Money::from_cents(cents), capacity, insurance};
}

TransportRequest make_request(std::string from, std::string to, Minutes earliest = 0,
                              Minutes latest = 1000, CargoUnits cargo = 2) {
  TransportRequest r;
  r.request_id = "req-1";
  r.customer = AgentId{"customer", 0};
  r.origin = std::move(from);
  r.destination = std::move(to);
  r.cargo_size = cargo;
  r.earliest_pickup = earliest;
  r.latest_delivery = latest;
  return r;
}

std::vector<std::string> leg_ids(const Itinerary& it) {
  std::vector<std::string> ids;
  for (const auto& leg : it.legs) ids.push_back(leg.leg_id);
  return ids;
}

TEST(MoneyTest, FormatsAndRounds) {
  EXPECT_EQ(Money::from_decimal(12.5).to_string(), "12.50");
  EXPECT_EQ(Money::from_decimal(0.005).cents(), 1);
  EXPECT_EQ(Money::from_cents(-5).to_string(), "-0.05");
  EXPECT_EQ((Money::from_cents(150) + Money::from_cents(75)).cents(), 225);
}

TEST(ValueInvariantsTest, RejectsMalformedValues) {
  EXPECT_THROW(validate(make_leg("x", kP1, "A", "A", 0, 10, 100)), InvalidValue);
  EXPECT_THROW(validate(make_leg("x", kP1, "A", "B", 10, 10, 100)), InvalidValue);
  EXPECT_THROW(validate(make_leg("x", kP1, "A", "B", 0, 10, 100, 1, 6)), InvalidValue);
  EXPECT_THROW(CriteriaProfile(0, 0, 0), InvalidValue);
  EXPECT_THROW(CriteriaProfile(-1, 1, 1), InvalidValue);

  auto req = make_request("A", "B", 100, 100);
  EXPECT_TRUE(check(req).has_value());
  req = make_request("A", "B");
  EXPECT_FALSE(check(req).has_value());
}

TEST(ItineraryTest, DerivedFieldsAndDeterministicId) {
  auto it = Itinerary::from_legs({make_leg("a", kP1, "A", "B", 0, 50, 1000, 10, 4),
                                  make_leg("b", kP2, "B", "C", 60, 90, 250, 10, 2)});
  EXPECT_EQ(it.total_cost.cents(), 1250);
  EXPECT_EQ(it.delivery_time, 90);
  EXPECT_EQ(it.min_insurance, 2);
  EXPECT_EQ(it.itinerary_id, itinerary_id_for(it.legs));
  EXPECT_EQ(it.itinerary_id.size(), 19u);
  EXPECT_NE(it.itinerary_id,
            itinerary_id_for(std::vector<RouteLeg>{it.legs[1], it.legs[0]}));
  EXPECT_EQ(it.providers(), (std::vector<AgentId>{kP1, kP2}));
  EXPECT_THROW(Itinerary::from_legs({make_leg("a", kP1, "A", "B", 0, 50, 1),
                                     make_leg("b", kP1, "C", "D", 60, 90, 1)}),
               InvalidValue);
}

// --- compose_itineraries ---------------------------------------------------

TEST(ComposeTest, SingleMatchingLeg) {
  std::vector<RouteLeg> legs{make_leg("ab", kP1, "A", "B", 10, 50, 1000)};
  auto result = compose_itineraries(make_request("A", "B"), legs, 5);
  ASSERT_EQ(result.itineraries.size(), 1u);
  EXPECT_EQ(leg_ids(result.itineraries[0]), std::vector<std::string>{"ab"});
}

TEST(ComposeTest, TemporallyInfeasibleTransferYieldsNoSolution) {
  std::vector<RouteLeg> legs{make_leg("ab", kP1, "A", "B", 0, 100, 1000),
                             make_leg("bc", kP2, "B", "C", 90, 150, 1000)};
  auto result = compose_itineraries(make_request("A", "C"), legs, 5, {4, 0});
  EXPECT_TRUE(result.no_solution());
}

TEST(ComposeTest, TransferSlackIsRespected) {
  std::vector<RouteLeg> legs{make_leg("ab", kP1, "A", "B", 0, 100, 1000),
                             make_leg("bc", kP2, "B", "C", 110, 150, 1000)};
  EXPECT_EQ(compose_itineraries(make_request("A", "C"), legs, 5, {4, 10}).itineraries.size(), 1u);
  EXPECT_TRUE(compose_itineraries(make_request("A", "C"), legs, 5, {4, 11}).no_solution());
}

TEST(ComposeTest, OrdersByCostThenIdAndTruncatesToK) {
  std::vector<RouteLeg> legs{make_leg("direct", kP1, "A", "C", 0, 300, 5000),
                             make_leg("ab", kP1, "A", "B", 0, 100, 1000),
                             make_leg("bc", kP2, "B", "C", 120, 200, 1500),
                             make_leg("ab2", kP2, "A", "B", 10, 80, 3000)};
  auto all = compose_itineraries(make_request("A", "C"), legs, 10);
  ASSERT_EQ(all.itineraries.size(), 3u);
  EXPECT_EQ(leg_ids(all.itineraries[0]), (std::vector<std::string>{"ab", "bc"}));
  EXPECT_EQ(leg_ids(all.itineraries[1]), (std::vector<std::string>{"ab2", "bc"}));
  EXPECT_EQ(leg_ids(all.itineraries[2]), std::vector<std::string>{"direct"});

  auto top = compose_itineraries(make_request("A", "C"), legs, 1);
  ASSERT_EQ(top.itineraries.size(), 1u);
  EXPECT_EQ(top.itineraries[0].itinerary_id, all.itineraries[0].itinerary_id);
}

TEST(ComposeTest, HardConstraintsExcludeBeforeRanking) {
  std::vector<RouteLeg> legs{make_leg("direct", kP1, "A", "C", 0, 300, 5000, 10, 5),
                             make_leg("ab", kP1, "A", "B", 0, 100, 1000, 10, 1),
                             make_leg("bc", kP2, "B", "C", 120, 200, 1500, 10, 4)};
  auto req = make_request("A", "C");
  req.constraints.min_insurance = 2;
  auto r1 = compose_itineraries(req, legs, 10);
  ASSERT_EQ(r1.itineraries.size(), 1u);
  EXPECT_EQ(r1.itineraries[0].legs[0].leg_id, "direct");

  req.constraints = {};
  req.constraints.max_cost = Money::from_cents(4000);
  auto r2 = compose_itineraries(req, legs, 10);
  ASSERT_EQ(r2.itineraries.size(), 1u);
  EXPECT_EQ(r2.itineraries[0].legs.size(), 2u);

  req.constraints = {};
  req.constraints.max_legs = 1;
  auto r3 = compose_itineraries(req, legs, 10);
  ASSERT_EQ(r3.itineraries.size(), 1u);
  EXPECT_EQ(r3.itineraries[0].legs[0].leg_id, "direct");
}

TEST(ComposeTest, SkipsLegsWithoutCapacityAndTimeWindow) {
  std::vector<RouteLeg> legs{make_leg("small", kP1, "A", "B", 10, 50, 100, 1),
                             make_leg("early", kP1, "A", "B", 0, 50, 100),
                             make_leg("late", kP1, "A", "B", 100, 600, 100)};
  auto result = compose_itineraries(make_request("A", "B", 5, 500, 2), legs, 10);
  EXPECT_TRUE(result.no_solution());
}

TEST(ComposeTest, NeverRevisitsALocation) {
  std::vector<RouteLeg> legs{make_leg("ab", kP1, "A", "B", 0, 10, 100),
                             make_leg("ba", kP1, "B", "A", 20, 30, 100),
                             make_leg("ac", kP1, "A", "C", 40, 50, 100)};
  auto result = compose_itineraries(make_request("A", "C"), legs, 10);
  ASSERT_EQ(result.itineraries.size(), 1u);
  EXPECT_EQ(leg_ids(result.itineraries[0]), std::vector<std::string>{"ac"});
}

TEST(ComposeTest, MatchesExhaustiveOracleOnSmallNetworks) {
  std::mt19937_64 rng(20240611);
  int with_solutions = 0;
  for (int round = 0; round < 40; ++round) {
    auto legs = testing::random_network(rng, 6, 12, {kP1, kP2});
    auto req = testing::random_request(rng, 6);
    auto expected = testing::enumerate_paths_exhaustively(
        req, legs, std::min(4, req.constraints.max_legs.value_or(4)), 0);
    auto result = compose_itineraries(req, legs, 1'000'000, {4, 0});
    std::set<testing::LegSequence> got;
    for (const auto& it : result.itineraries) got.insert(leg_ids(it));
    EXPECT_EQ(got, expected) << "round " << round;
    with_solutions += !expected.empty();
  }
  EXPECT_GT(with_solutions, 0);
}

// --- score_itinerary / rank_proposals --------------------------------------

std::vector<Itinerary> three_pool() {
  return {Itinerary::from_legs({make_leg("i1", kP1, "A", "B", 0, 500, 10000, 10, 3)}),
          Itinerary::from_legs({make_leg("i2", kP1, "A", "B", 0, 400, 15000, 10, 5)}),
          Itinerary::from_legs({make_leg("i3", kP2, "A", "B", 0, 450, 12000, 10, 1)})};
}

TEST(ScoreTest, PoolOfOneScoresOne) {
  auto pool = std::vector<Itinerary>{three_pool()[0]};
  auto p = score_itinerary(pool[0], pool, CriteriaProfile(0.2, 0.5, 0.3));
  EXPECT_DOUBLE_EQ(p.breakdown.cost, 1.0);
  EXPECT_DOUBLE_EQ(p.breakdown.time, 1.0);
  EXPECT_DOUBLE_EQ(p.breakdown.insurance, 1.0);
  EXPECT_NEAR(p.score, 1.0, 1e-12);
}

TEST(ScoreTest, SingleCriterionExtremes) {
  auto pool = std::vector<Itinerary>{three_pool()[0], three_pool()[1]};
  CriteriaProfile cost_only(1, 0, 0);
  EXPECT_NEAR(score_itinerary(pool[0], pool, cost_only).score, 1.0, 1e-12);
  EXPECT_NEAR(score_itinerary(pool[1], pool, cost_only).score, 0.0, 1e-12);
}

TEST(ScoreTest, ThreeItineraryPoolMatchesHandComputation) {
  // Hand-derived: u_cost = (1, 0, 0.6), u_time = (0, 1, 0.5), u_ins = (0.5, 1, 0)
  // score = 0.5 u_cost + 0.3 u_time + 0.2 u_ins = (0.6, 0.5, 0.45).
  const double frozen[] = {0.6, 0.5, 0.45};
  auto pool = three_pool();
  CriteriaProfile w(0.5, 0.3, 0.2);
  for (std::size_t k = 0; k < pool.size(); ++k) {
    auto p = score_itinerary(pool[k], pool, w);
    auto oracle = testing::oracle_score(pool[k], pool, 0.5, 0.3, 0.2);
    EXPECT_NEAR(p.score, frozen[k], 1e-9);
    EXPECT_NEAR(p.score, oracle.total, 1e-9);
    EXPECT_NEAR(p.breakdown.cost, oracle.cost, 1e-9);
    EXPECT_NEAR(p.breakdown.time, oracle.time, 1e-9);
    EXPECT_NEAR(p.breakdown.insurance, oracle.insurance, 1e-9);
  }
}

TEST(ScoreTest, ItineraryMustBelongToPool) {
  auto pool = three_pool();
  auto stranger = Itinerary::from_legs({make_leg("zz", kP1, "A", "B", 0, 5, 1)});
  EXPECT_THROW(score_itinerary(stranger, pool, CriteriaProfile{}), std::invalid_argument);
}

TEST(RankTest, OrdersByScoreAndBreaksTiesByCostThenId) {
  auto pool = three_pool();
  auto ranked = rank_proposals(pool, CriteriaProfile(0.5, 0.3, 0.2));
  ASSERT_EQ(ranked.size(), 3u);
  EXPECT_EQ(ranked[0].itinerary.legs[0].leg_id, "i1");
  EXPECT_EQ(ranked[1].itinerary.legs[0].leg_id, "i2");
  EXPECT_EQ(ranked[2].itinerary.legs[0].leg_id, "i3");

  // Equal scores (all utilities 1): cheaper first, then id.
  std::vector<Itinerary> ties{
      Itinerary::from_legs({make_leg("t1", kP1, "A", "B", 0, 100, 500, 10, 2)}),
      Itinerary::from_legs({make_leg("t2", kP1, "A", "B", 0, 100, 500, 10, 2)})};
  auto tied = rank_proposals(ties, CriteriaProfile(0, 1, 0));
  EXPECT_LT(tied[0].itinerary.itinerary_id, tied[1].itinerary.itinerary_id);
}

TEST(RankTest, ScalingWeightsKeepsOrder) {
  auto pool = three_pool();
  auto base = rank_proposals(pool, CriteriaProfile(0.5, 0.3, 0.2));
  auto scaled = rank_proposals(pool, CriteriaProfile(1.5, 0.9, 0.6));
  for (std::size_t k = 0; k < base.size(); ++k) {
    EXPECT_EQ(base[k].itinerary.itinerary_id, scaled[k].itinerary.itinerary_id);
  }
}

TEST(RankTest, RandomPoolsMatchNaiveSortOracle) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  for (int round = 0; round < 100; ++round) {
    auto pool = testing::random_pool(rng, 5);
    double wc = weight(rng), wt = weight(rng), wi = weight(rng) + 1e-3;
    auto ranked = rank_proposals(pool, CriteriaProfile(wc, wt, wi));

    struct Row {
      double score;
      std::int64_t cost;
      std::string id;
    };
    std::vector<Row> rows;
    for (const auto& it : pool) {
      rows.push_back({testing::oracle_score(it, pool, wc, wt, wi).total, it.total_cost.cents(),
                      it.itinerary_id});
    }
    // Naive O(n^2) selection sort with the documented tie rule.
    auto before = [](const Row& a, const Row& b) {
      if (std::abs(a.score - b.score) > 1e-9) return a.score > b.score;
      if (a.cost != b.cost) return a.cost < b.cost;
      return a.id < b.id;
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = i + 1; j < rows.size(); ++j) {
        if (before(rows[j], rows[i])) std::swap(rows[i], rows[j]);
      }
    }
    for (std::size_t k = 0; k < rows.size(); ++k) {
      EXPECT_EQ(ranked[k].itinerary.itinerary_id, rows[k].id) << "round " << round;
    }
  }
}

// --- apply_amendment --------------------------------------------------------

const std::map<std::string, ConcessionPolicy> kNoOverrides;

Proposal single_provider_proposal(std::int64_t cents) {
  std::vector<Itinerary> pool{Itinerary::from_legs({make_leg("ab", kP1, "A", "B", 0, 100, cents)})};
  return rank_proposals(pool, CriteriaProfile{})[0];
}

Amendment cost_amendment(const Proposal& p, std::int64_t cents) {
  Amendment a;
  a.request_id = "req-1";
  a.itinerary_id = p.itinerary.itinerary_id;
  a.target_cost = Money::from_cents(cents);
  return a;
}

TEST(AmendmentTest, TargetAboveCurrentIsTriviallyAccepted) {
  auto p = single_provider_proposal(20000);
  auto outcome = apply_amendment(p, cost_amendment(p, 25000), kNoOverrides);
  EXPECT_TRUE(outcome.accepted());
  EXPECT_EQ(outcome.proposal.itinerary.total_cost.cents(), 20000);
  EXPECT_EQ(outcome.proposal.status, ProposalStatus::Amended);
}

TEST(AmendmentTest, BelowFloorIsRejectedUnchanged) {
  // 10% default discount: floor of 200.00 is 180.00.
  auto p = single_provider_proposal(20000);
  auto outcome = apply_amendment(p, cost_amendment(p, 17999), kNoOverrides);
  EXPECT_FALSE(outcome.accepted());
  EXPECT_EQ(outcome.proposal, p);
}

TEST(AmendmentTest, WithinBandAcceptedAtTarget) {
  auto p = single_provider_proposal(20000);
  for (std::int64_t target : {18000, 19000, 19999}) {
    auto outcome = apply_amendment(p, cost_amendment(p, target), kNoOverrides);
    ASSERT_TRUE(outcome.accepted()) << target;
    // cost = max(target, floor)
    EXPECT_EQ(outcome.proposal.itinerary.total_cost.cents(), std::max<std::int64_t>(target, 18000));
    EXPECT_EQ(outcome.proposal.itinerary.itinerary_id, p.itinerary.itinerary_id);
  }
}

TEST(AmendmentTest, MultiProviderSharesFollowEachPolicy) {
  // 120.00 (provider1, 10%) + 80.00 (provider2, 5%).
  std::vector<Itinerary> pool{Itinerary::from_legs(
      {make_leg("ab", kP1, "A", "B", 0, 100, 12000), make_leg("bc", kP2, "B", "C", 100, 200, 8000)})};
  auto p = rank_proposals(pool, CriteriaProfile{})[0];
  std::map<std::string, ConcessionPolicy> policies{{"provider1", ConcessionPolicy{1000}},
                                                   {"provider2", ConcessionPolicy{500}}};
  // 185.00 -> shares 111.00 / 74.00; provider2 floor is 76.00.
  auto rejected = apply_amendment(p, cost_amendment(p, 18500), policies);
  EXPECT_FALSE(rejected.accepted());
  ASSERT_EQ(rejected.shares.size(), 2u);
  EXPECT_EQ(rejected.shares[0].target_cost->cents(), 11100);
  EXPECT_EQ(rejected.shares[1].target_cost->cents(), 7400);

  // 190.00 -> 114.00 / 76.00, both at or above their floors.
  auto accepted = apply_amendment(p, cost_amendment(p, 19000), policies);
  ASSERT_TRUE(accepted.accepted());
  EXPECT_EQ(accepted.proposal.itinerary.legs[0].cost.cents(), 11400);
  EXPECT_EQ(accepted.proposal.itinerary.legs[1].cost.cents(), 7600);
  EXPECT_EQ(accepted.proposal.itinerary.total_cost.cents(), 19000);
  EXPECT_EQ(accepted.proposal.offered_leg_costs, p.offered_leg_costs);
}

TEST(AmendmentTest, NoConcessionOnTimeOrInsurance) {
  auto p = single_provider_proposal(20000);
  Amendment later{"req-1", p.itinerary.itinerary_id, {}, 150, {}};
  Amendment sooner{"req-1", p.itinerary.itinerary_id, {}, 90, {}};
  Amendment more_insurance{"req-1", p.itinerary.itinerary_id, {}, {}, 5};
  EXPECT_TRUE(apply_amendment(p, later, kNoOverrides).accepted());
  EXPECT_FALSE(apply_amendment(p, sooner, kNoOverrides).accepted());
  EXPECT_FALSE(apply_amendment(p, more_insurance, kNoOverrides).accepted());
}

TEST(AmendmentTest, DecidedProposalsAndMalformedAmendments) {
  auto p = single_provider_proposal(20000);
  Amendment two_targets = cost_amendment(p, 100);
  two_targets.target_insurance = 2;
  EXPECT_THROW(apply_amendment(p, two_targets, kNoOverrides), InvalidValue);
  p.transition_to(ProposalStatus::Selected);
  EXPECT_THROW(apply_amendment(p, cost_amendment(p, 19000), kNoOverrides), AlreadyDecided);
}

TEST(ProposalStatusTest, OnlyTheDocumentedMachine) {
  using S = ProposalStatus;
  const S all[] = {S::Offered, S::Amended, S::Selected, S::Confirmed, S::Failed};
  int allowed = 0;
  for (S a : all) {
    for (S b : all) allowed += can_transition(a, b);
  }
  EXPECT_EQ(allowed, 6);
  EXPECT_TRUE(can_transition(S::Amended, S::Amended));
  EXPECT_FALSE(can_transition(S::Offered, S::Confirmed));
  EXPECT_FALSE(can_transition(S::Confirmed, S::Failed));
}

TEST(ProposalBookTest, StatusesSurviveReranking) {
  ProposalBook book(three_pool(), CriteriaProfile(0.5, 0.3, 0.2));
  const auto top = book.ranked()[0].itinerary.itinerary_id;
  book.set_status(top, ProposalStatus::Selected);
  book.rerank(CriteriaProfile(0, 1, 0));
  EXPECT_EQ(book.find(top)->status, ProposalStatus::Selected);
  EXPECT_EQ(book.ranked()[0].itinerary.legs[0].leg_id, "i2");
  EXPECT_TRUE(book.has_selection());
  EXPECT_THROW(book.set_status(top, ProposalStatus::Amended), InvalidStatusTransition);
}

// --- reserve_leg / release_reservation / update_itinerary_plan --------------

ProviderPlan plan_with(CargoUnits capacity) {
  return ProviderPlan(kP1, {make_leg("ab", kP1, "A", "B", 0, 100, 1000, capacity)});
}

TEST(ReservationTest, ConfirmsWhenCapacitySuffices) {
  auto plan = plan_with(10);
  auto r = plan.reserve_leg("ab", 4, "r1");
  EXPECT_TRUE(r.confirmed());
  EXPECT_EQ(r.remaining, 6);
  EXPECT_EQ(plan.leg("ab").capacity, 6);
}

TEST(ReservationTest, RefusesWithoutChangingCapacity) {
  auto plan = plan_with(3);
  auto r = plan.reserve_leg("ab", 4, "r1");
  EXPECT_FALSE(r.confirmed());
  EXPECT_EQ(r.remaining, 3);
  EXPECT_EQ(plan.leg("ab").capacity, 3);
}

TEST(ReservationTest, IdempotentOnReservationId) {
  auto plan = plan_with(10);
  plan.reserve_leg("ab", 4, "r1");
  auto again = plan.reserve_leg("ab", 4, "r1");
  EXPECT_TRUE(again.confirmed());
  EXPECT_EQ(plan.leg("ab").capacity, 6);
}

TEST(ReservationTest, ErrorsAndRelease) {
  auto plan = plan_with(10);
  EXPECT_THROW(plan.reserve_leg("zz", 1, "r1"), UnknownLeg);
  EXPECT_THROW(plan.reserve_leg("ab", 0, "r1"), InvalidValue);
  plan.reserve_leg("ab", 4, "r1");
  plan.release_reservation("r1");
  EXPECT_EQ(plan.leg("ab").capacity, 10);
  EXPECT_THROW(plan.release_reservation("r1"), UnknownReservation);
}

TEST(ReservationTest, RollbackRestoresBothLegs) {
  ProviderPlan first(kP1, {make_leg("ab", kP1, "A", "B", 0, 100, 1000, 5)});
  ProviderPlan second(kP2, {make_leg("bc", kP2, "B", "C", 100, 200, 1000, 2)});
  EXPECT_TRUE(first.reserve_leg("ab", 3, "sel/ab").confirmed());
  EXPECT_FALSE(second.reserve_leg("bc", 3, "sel/bc").confirmed());
  first.release_reservation("sel/ab");
  EXPECT_EQ(first.leg("ab").capacity, 5);
  EXPECT_EQ(second.leg("bc").capacity, 2);
}

TEST(ReservationTest, RandomInterleavingsConserveCapacity) {
  std::mt19937_64 rng(7);
  ProviderPlan plan(kP1, {make_leg("a", kP1, "A", "B", 0, 10, 1, 20),
                          make_leg("b", kP1, "B", "C", 0, 10, 1, 7)});
  std::vector<std::string> live;
  for (int op = 0; op < 2000; ++op) {
    if (live.empty() || rng() % 3 != 0) {
      const std::string leg = rng() % 2 ? "a" : "b";
      const std::string id = "r" + std::to_string(op);
      if (plan.reserve_leg(leg, 1 + rng() % 5, id).confirmed()) live.push_back(id);
    } else {
      auto idx = rng() % live.size();
      plan.release_reservation(live[idx]);
      live.erase(live.begin() + static_cast<long>(idx));
    }
    for (const auto& leg : plan.legs()) {
      ASSERT_GE(leg.capacity, 0);
      ASSERT_EQ(plan.initial_capacity(leg.leg_id), leg.capacity + plan.reserved_units(leg.leg_id));
    }
  }
}

TEST(PlanUpdateTest, AddRemoveAndCapacityDelta) {
  auto plan = plan_with(10);
  auto added = update_itinerary_plan(plan, AddLeg{make_leg("bc", kP1, "B", "C", 100, 200, 500)});
  EXPECT_TRUE(added.has_leg("bc"));
  EXPECT_EQ(added.legs().back().leg_id, "bc");

  auto via_delta = update_itinerary_plan(plan, CapacityDelta{"ab", "r1", -4});
  auto via_reserve = plan;
  via_reserve.reserve_leg("ab", 4, "r1");
  EXPECT_EQ(via_delta, via_reserve);

  auto released = update_itinerary_plan(via_delta, CapacityDelta{"ab", "r1", 4});
  EXPECT_EQ(released.leg("ab").capacity, 10);

  EXPECT_THROW(update_itinerary_plan(plan, RemoveLeg{"zz"}), UnknownLeg);
  EXPECT_THROW(update_itinerary_plan(plan, CapacityDelta{"zz", "r", -1}), UnknownLeg);
  EXPECT_FALSE(update_itinerary_plan(plan, RemoveLeg{"ab"}).has_leg("ab"));
}

TEST(NetworkGeneratorTest, DeterministicAndValid) {
  NetworkParams params;
  auto a = generate_network(5, params, {kP1, kP2});
  auto b = generate_network(5, params, {kP1, kP2});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, generate_network(6, params, {kP1, kP2}));
  for (const auto& leg : a) EXPECT_NO_THROW(validate(leg));
}

TEST(MarketJsonTest, RequestRoundTrip) {
  auto req = make_request("A", "C");
  req.constraints.max_cost = Money::from_cents(12345);
  req.weights = CriteriaProfile(2, 1, 0);
  nlohmann::json j = req;
  EXPECT_EQ(j.get<TransportRequest>(), req);
  EXPECT_DOUBLE_EQ(j["constraints"]["max_cost"].get<double>(), 123.45);
}

}  // namespace
}  // namespace agmarket::market
