#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tic/audit.hpp"
#include "tic/instance_gen.hpp"

using namespace tic;

TEST(Ratio, States) {
  EXPECT_EQ(Ratio::of(5, 3).value(), Coord(5, 3));
  EXPECT_EQ(Ratio::of(0, 0).value(), Coord(1));
  EXPECT_TRUE(Ratio::of(1, 0).unbounded());
  EXPECT_EQ(Ratio::of(1, 0).to_string(), "UNBOUNDED");
  EXPECT_TRUE(Ratio::of(1, 0).at_least(1000));
  EXPECT_FALSE(Ratio::of(1, 0).at_most(1000));
  EXPECT_THROW(Ratio::of(1, 0).value(), std::logic_error);
}

TEST(ApproximationRatio, ZeroOptimum) {
  Instance one = Instance::unit({3});
  EXPECT_EQ(approximation_ratio(make_median(), one).ratio.value(), Coord(1));
  Instance pair = Instance::unit({0, 0});
  EXPECT_TRUE(approximation_ratio(controls::mean_of_left_endpoints(), Instance::unit({0, 0, 6})).ratio.value() > 1);
  EXPECT_EQ(approximation_ratio(make_median(), pair).optimal_cost, Coord(0));
}

TEST(DeviationSearch, FindsProfitableMisreport) {
  Instance inst = Instance::unit({0, 2});
  // mean-left covers [1,2]; agent 0 pays 1. Reporting [-2,-1] pulls C to [0,1].
  std::vector<Interval> lie{{-2, 1}};
  auto w = deviation_search(controls::mean_of_left_endpoints(), inst, 0, lie);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->true_cost, Coord(1));
  EXPECT_EQ(w->deviated_cost, Coord(0));
  EXPECT_EQ(w->misreport, (Interval{-2, 1}));
}

TEST(DeviationSearch, Validation) {
  Instance inst = Instance::unit({0, 2});
  EXPECT_THROW(deviation_search(make_median(), inst, 0, {}), std::invalid_argument);
  std::vector<Interval> longer{{0, 2}};
  EXPECT_THROW(deviation_search(make_median(), inst, 0, longer), std::invalid_argument);
  EXPECT_NO_THROW(deviation_search(make_weighted_median(), inst, 0, longer));
}

TEST(DeviationSearch, RealizationLevelWitness) {
  // Realizations {s} and {s+1}: shifting left by one trades the first
  // realization for the second, so the mean is unchanged but realization 1
  // improves.
  Mechanism shift("shift",
                  [](const Instance& inst) {
                    Coord s = inst.agents().front().s;
                    return std::vector<Realization>{{Coord(1, 2), {s}}, {Coord(1, 2), {s + 1}}};
                  },
                  {.deterministic = false, .equal_unit_only = true, .claims_truthful = false});
  Instance inst = Instance::unit({0});
  std::vector<Interval> lie{{-1, 1}};
  auto w = deviation_search(shift, inst, 0, lie);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->kind, DeviationWitness::Kind::Realization);
  EXPECT_EQ(w->realization, 1u);
  EXPECT_EQ(w->true_cost, Coord(1));
  EXPECT_EQ(w->deviated_cost, Coord(0));
}

TEST(DefaultMisreports, ContainsAnchorsAndGrid) {
  Instance inst = Instance::unit({0, 3});
  auto xs = default_misreport_positions(inst, 1);
  for (Coord x : {Coord(-2), Coord(-1), Coord(0), Coord(1), Coord(2), Coord(3), Coord(4), Coord(5)}) {
    EXPECT_NE(std::find(xs.begin(), xs.end(), x), xs.end()) << x;
  }
  EXPECT_TRUE(std::is_sorted(xs.begin(), xs.end()));
  auto reports = default_misreports(Instance::from_intervals({{0, 2}, {3, 1}}, 1), 0, 1);
  for (const auto& r : reports) EXPECT_EQ(r.length, Coord(2));
}

namespace {

Instance random_unit(std::mt19937_64& rng, std::size_t n) {
  std::vector<Coord> lefts;
  for (std::size_t i = 0; i < n; ++i) lefts.push_back(Coord(static_cast<std::int64_t>(rng() % 9), 2));
  return Instance::unit(lefts);
}

}  // namespace

TEST(TruthfulnessProperties, OrderStatisticsHaveNoWitness) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + rng() % 5;
    Instance inst = random_unit(rng, n);
    auto xs = default_misreport_positions(inst, Coord(1, 2));
    ASSERT_TRUE(audit_all_agents(make_median(), inst, xs).empty());
    ASSERT_TRUE(audit_all_agents(make_uniform_statistic(), inst, xs).empty());
    ASSERT_TRUE(audit_all_agents(make_kth_statistic(1 + rng() % n), inst, xs).empty());
  }
}

TEST(TruthfulnessProperties, MeanLeftIsCaught) {
  std::size_t caught = 0;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    Instance inst = random_unit(rng, 2 + rng() % 3);
    auto found = audit_all_agents(controls::mean_of_left_endpoints(), inst, default_misreport_positions(inst, Coord(1, 2)));
    for (const auto& w : found) {
      // Re-measure the witness directly.
      Coord before = oracle::uncovered(w.truth.s, w.truth.length, controls::mean_of_left_endpoints().place(inst).s, 1);
      Coord after = oracle::uncovered(w.truth.s, w.truth.length,
                                      controls::mean_of_left_endpoints().place(inst.with_report(w.agent, w.misreport)).s, 1);
      ASSERT_LT(after, before);
    }
    caught += found.empty() ? 0 : 1;
  }
  EXPECT_GT(caught, 0u);
}

TEST(AdversaryGame, MedianReachesLowerBound) {
  for (std::size_t n : {4u, 6u, 8u}) {
    GameTranscript tr = adversary_game(make_median(), n);
    ASSERT_TRUE(std::holds_alternative<RatioWitness>(tr.status)) << n;
    const auto& w = std::get<RatioWitness>(tr.status);
    Coord sn(static_cast<std::int64_t>(n));
    EXPECT_EQ(w.mechanism_cost, sn - 1);
    EXPECT_EQ(w.optimal_cost, sn / 2);
    EXPECT_EQ(w.ratio.value(), 2 - 2 / sn);
    // Independent re-measurement of the final instance.
    EXPECT_EQ(oracle::social_cost(w.instance, w.placement.s), w.mechanism_cost);
    auto [gx, gv] = oracle::grid_minimum(w.instance, -2, sn + 2, Coord(1, 1000), oracle::anchored_points(w.instance));
    EXPECT_EQ(gv, w.optimal_cost);
  }
}

TEST(AdversaryGame, MedianSixAgents) {
  GameTranscript tr = adversary_game(make_median(), 6);
  EXPECT_EQ(std::get<RatioWitness>(tr.status).ratio.value(), Coord(5, 3));
  EXPECT_FALSE(tr.steps.empty());
}

TEST(AdversaryGame, MeanLeftLosesAtOnce) {
  GameTranscript tr = adversary_game(controls::mean_of_left_endpoints(), 4);
  ASSERT_TRUE(std::holds_alternative<RatioWitness>(tr.status));
  EXPECT_EQ(std::get<RatioWitness>(tr.status).ratio.value(), Coord(2));
  EXPECT_EQ(tr.steps.size(), 1u);
}

TEST(AdversaryGame, RightStatisticIsMirrored) {
  GameTranscript tr = adversary_game(make_kth_statistic(4), 4);
  EXPECT_TRUE(tr.mirrored);
  EXPECT_FALSE(std::holds_alternative<TruthfulnessViolation>(tr.status));
}

TEST(AdversaryGame, ArgumentChecks) {
  EXPECT_THROW(adversary_game(make_median(), 5), std::invalid_argument);
  EXPECT_THROW(adversary_game(make_uniform_statistic(), 4), std::invalid_argument);
  EXPECT_THROW(adversary_game(make_median(), 4, {Coord(1, 2), 0}), std::invalid_argument);
}

TEST(AdversaryGame, IterationCap) {
  GameTranscript tr = adversary_game(make_median(), 8, {Coord(1, 1000), 1});
  ASSERT_TRUE(std::holds_alternative<Exhausted>(tr.status));
}

TEST(AdversaryGame, ViolationWitnessReplays) {
  GameTranscript tr = adversary_game(controls::cover_leftmost(), 4);
  if (auto* v = std::get_if<TruthfulnessViolation>(&tr.status)) {
    Mechanism m = controls::cover_leftmost();
    Coord honest = agent_cost(v->witness.truth, m.place(v->instance), 1);
    Coord lied = agent_cost(v->witness.truth, m.place(v->instance.with_report(v->witness.agent, v->witness.misreport)), 1);
    EXPECT_LT(lied, honest);
  }
}

TEST(OrderStatisticLowerBound, Examples) {
  EXPECT_EQ(order_statistic_lower_bound({Coord(1, 4), Coord(1, 4), Coord(1, 4), Coord(1, 4)}, 4), Coord(5, 4));
  EXPECT_EQ(order_statistic_lower_bound({0, 0, 0, 1}, 4), Coord(3, 2));
  EXPECT_EQ(order_statistic_lower_bound({0, 0, 1, 0}, 4), Coord(3, 2));
  EXPECT_THROW(order_statistic_lower_bound({1, 0, 0}, 3), std::invalid_argument);
}

TEST(OrderStatisticLowerBound, ClosedFormNeverExceedsExact) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 * (1 + rng() % 5);
    std::vector<Coord> w(n);
    std::int64_t total = 0;
    std::vector<std::int64_t> raw(n);
    for (auto& r : raw) total += (r = static_cast<std::int64_t>(rng() % 10));
    if (total == 0) continue;
    for (std::size_t i = 0; i < n; ++i) w[i] = Coord(raw[i], total);
    ASSERT_GE(order_statistic_lower_bound(w, n), order_statistic_lower_bound_closed_form(w, n));
  }
}

TEST(UnknownLengthsProbe, Controls) {
  const Coord eps(1, 2);
  ProbeResult a = unknown_lengths_probe(controls::cover_leftmost(), eps);
  ASSERT_TRUE(std::holds_alternative<RatioWitness>(a.outcome));
  EXPECT_EQ(std::get<RatioWitness>(a.outcome).ratio.value(), Coord(2));

  ProbeResult b = unknown_lengths_probe(controls::cover_rightmost(), eps);
  ASSERT_TRUE(std::holds_alternative<RatioWitness>(b.outcome));
  EXPECT_EQ(std::get<RatioWitness>(b.outcome).ratio.value(), Coord(2));

  ProbeResult c = unknown_lengths_probe(controls::cover_then_flee(), eps);
  EXPECT_TRUE(std::holds_alternative<TruthfulnessViolation>(c.outcome));

  ProbeResult d = unknown_lengths_probe(make_weighted_median(), eps);
  EXPECT_TRUE(std::holds_alternative<TruthfulnessViolation>(d.outcome));

  ProbeResult e = unknown_lengths_probe(controls::coin_left_right(), eps);
  EXPECT_TRUE(e.lottery_path);
}

TEST(UnknownLengthsProbe, WitnessesMeetTheirBound) {
  for (Coord eps : {Coord(1, 2), Coord(1, 10), Coord(1, 100)}) {
    for (const char* name : {"cover-leftmost", "cover-rightmost", "cover-then-flee", "weighted-median",
                             "mean-left", "coin-left-right"}) {
      ProbeResult r = unknown_lengths_probe(parse_mechanism(name), eps);
      if (auto* w = std::get_if<RatioWitness>(&r.outcome)) {
        EXPECT_TRUE(w->ratio.at_least(w->bound)) << name << " eps=" << eps;
      } else {
        const auto& v = std::get<TruthfulnessViolation>(r.outcome).witness;
        EXPECT_LT(v.deviated_cost, v.true_cost) << name;
      }
    }
  }
}

TEST(WelfareBound, Example) {
  EXPECT_EQ(welfare_ratio_bound(Coord(5, 3), 6, 3), Coord(7, 5));
  EXPECT_EQ(welfare_ratio_bound(1, 6, 3), Coord(1));
  EXPECT_THROW(welfare_ratio_bound(Coord(1, 2), 6, 3), std::invalid_argument);
}
