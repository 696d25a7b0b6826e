#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "tic/audit.hpp"
#include "tic/instance_gen.hpp"
#include "tic/mechanisms.hpp"
#include "tic/solver.hpp"

// The claim table printed by `tic reproduce`. Each function re-derives one
// family of bounds from scratch and reports expected vs measured values.

namespace tic::reproduce {

struct ClaimRow {
  std::string claim;
  std::string parameter;
  std::string expected;
  std::string measured;
  bool pass = false;
};

/// Seed of the i-th random instance with n agents in the sweeps.
inline std::uint64_t sweep_seed(std::size_t n, std::size_t i) {
  return (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(i);
}

inline gen::GeneratorParams sweep_params(std::size_t n, std::size_t i) {
  gen::GeneratorParams p;
  p.n = n;
  p.seed = sweep_seed(n, i);
  p.grid_step = Coord{1, 4};
  p.span = 8;
  return p;
}

inline Coord sn(std::size_t n) { return Coord(static_cast<std::int64_t>(n)); }

struct SweepOptions {
  std::size_t samples_per_n = 10000;
  std::size_t min_n = 2;
  std::size_t max_n = 12;
};

/// Random equal-unit sweep: median <= 2 - 2/n for every n, and
/// uniform-statistic <= 5/3 when 6 | n.
inline std::vector<ClaimRow> random_sweep(const SweepOptions& opt = {}) {
  std::vector<ClaimRow> rows;
  Mechanism median = make_median();
  Mechanism uniform = make_uniform_statistic();
  std::vector<ClaimRow> uniform_rows;
  for (std::size_t n = opt.min_n; n <= opt.max_n; ++n) {
    Coord bound = Coord{2} - Coord{2} / sn(n);
    Coord worst = 1;
    Coord worst_uniform = 1;
    std::size_t violations = 0;
    std::size_t uniform_violations = 0;
    for (std::size_t i = 0; i < opt.samples_per_n; ++i) {
      Instance inst = gen::random_instance(sweep_params(n, i));
      Optimum opt_pl = optimal_placement(inst);
      Ratio r = Ratio::of(social_cost(inst, median_mechanism(inst)), opt_pl.social_cost);
      if (!r.at_most(bound)) ++violations;
      if (!r.unbounded()) worst = std::max(worst, r.value());
      if (n % 6 == 0) {
        Ratio u = Ratio::of(expected_social_cost(inst, uniform_statistic(inst)), opt_pl.social_cost);
        if (!u.at_most(Coord{5, 3})) ++uniform_violations;
        if (!u.unbounded()) worst_uniform = std::max(worst_uniform, u.value());
      }
    }
    rows.push_back({"median ≤ 2−2/n", "n=" + std::to_string(n),
                    "≤ " + bound.to_string(),
                    "max " + worst.to_string() + ", " + std::to_string(violations) + " violations",
                    violations == 0});
    if (n % 6 == 0) {
      uniform_rows.push_back({"uniform-statistic ≤ 5/3", "sweep n=" + std::to_string(n), "≤ 5/3",
                              "max " + worst_uniform.to_string() + ", " + std::to_string(uniform_violations) +
                                  " violations",
                              uniform_violations == 0});
    }
  }
  rows.insert(rows.end(), uniform_rows.begin(), uniform_rows.end());
  return rows;
}

inline std::vector<ClaimRow> median_tightness() {
  std::vector<ClaimRow> rows;
  Mechanism median = make_median();
  for (std::size_t n : {6, 12, 60}) {
    Coord expected = Coord{2} - Coord{2} / sn(n);
    Ratio r = approximation_ratio(median, gen::wci2(n)).ratio;
    rows.push_back({"median tight on WCI2 = 2−2/n", "n=" + std::to_string(n), expected.to_string(), r.to_string(),
                    r == Ratio::of(expected, 1)});
  }
  return rows;
}

inline std::vector<ClaimRow> median_lower_bound(const Coord& delta = Coord{1, 1000}) {
  std::vector<ClaimRow> rows;
  Mechanism median = make_median();
  for (std::size_t n = 4; n <= 20; n += 2) {
    Coord bound = Coord{2} - Coord{2} / sn(n);
    GameTranscript tr = adversary_game(median, n, {delta, 0});
    std::string measured;
    bool pass = false;
    if (const auto* w = std::get_if<RatioWitness>(&tr.status)) {
      measured = "witness " + w->ratio.to_string() + " after " + std::to_string(tr.steps.size()) + " steps";
      pass = w->ratio.at_least(bound);
    } else if (std::holds_alternative<TruthfulnessViolation>(tr.status)) {
      measured = "truthfulness violation";
    } else {
      measured = "exhausted: " + std::get<Exhausted>(tr.status).reason;
    }
    rows.push_back({"median LB = 2−2/n", "n=" + std::to_string(n), "witness ≥ " + bound.to_string(), measured, pass});
  }
  return rows;
}

inline std::vector<ClaimRow> uniform_statistic_exact() {
  std::vector<ClaimRow> rows;
  Mechanism uniform = make_uniform_statistic();
  for (std::size_t n : {6, 12, 60}) {
    Coord e1 = Coord{5, 3} - Coord{1} / sn(n);
    Ratio r1 = approximation_ratio(uniform, gen::wci1(n)).ratio;
    rows.push_back({"uniform-statistic on WCI1 = 5/3−1/n", "n=" + std::to_string(n), e1.to_string(),
                    r1.to_string(), r1 == Ratio::of(e1, 1)});
    Coord e2 = Coord{5, 3} - Coord{4, 3} / sn(n);
    Ratio r2 = approximation_ratio(uniform, gen::wci2(n)).ratio;
    rows.push_back({"uniform-statistic on WCI2 = 5/3−4/(3n)", "n=" + std::to_string(n), e2.to_string(),
                    r2.to_string(), r2 == Ratio::of(e2, 1)});
  }
  return rows;
}

/// Random rational weight vector over n indices; about a quarter of the
/// entries are zero so point masses and sparse mixtures are covered.
inline std::vector<Coord> random_weights(std::mt19937_64& engine, std::size_t n) {
  while (true) {
    std::vector<std::int64_t> raw(n);
    std::int64_t total = 0;
    for (auto& w : raw) {
      std::uint64_t x = engine();
      w = (x & 3) == 0 ? 0 : static_cast<std::int64_t>((x >> 2) % 100) + 1;
      total += w;
    }
    if (total == 0) continue;
    std::vector<Coord> out;
    out.reserve(n);
    for (auto w : raw) out.emplace_back(w, total);
    return out;
  }
}

inline std::vector<ClaimRow> order_statistic_bound(std::size_t vectors_per_n = 1000, std::uint64_t seed = 7) {
  std::vector<ClaimRow> rows;
  std::mt19937_64 engine(seed);
  for (std::size_t n : {4, 6, 8, 12}) {
    Coord bound = Coord{3, 2} - Coord{1} / sn(n);
    Coord lowest = 2;
    std::size_t below = 0;
    for (std::size_t i = 0; i < vectors_per_n; ++i) {
      Coord v = order_statistic_lower_bound(random_weights(engine, n), n);
      if (v < bound) ++below;
      lowest = std::min(lowest, v);
    }
    rows.push_back({"order-statistic LB ≥ 3/2−1/n", "n=" + std::to_string(n) + " random",
                    "≥ " + bound.to_string(),
                    "min " + lowest.to_string() + ", " + std::to_string(below) + " below", below == 0});
    std::vector<Coord> uniform(n, Coord{1} / sn(n));
    Coord at_half = order_statistic_lower_bound(uniform, n);
    rows.push_back({"order-statistic LB ≥ 3/2−1/n", "n=" + std::to_string(n) + " half-mass", bound.to_string(),
                    at_half.to_string(), at_half == bound});
  }
  return rows;
}

inline std::vector<ClaimRow> weighted_median_worst_case() {
  std::vector<ClaimRow> rows;
  Mechanism wm = make_weighted_median();
  const std::pair<std::size_t, Coord> cases[] = {{1, Coord{1, 2}}, {1, Coord{1, 4}}, {2, Coord{1, 10}}};
  for (const auto& [k, eps] : cases) {
    Coord expected = Coord{1} / eps;
    Ratio r = approximation_ratio(wm, gen::weighted_median_worst(k, eps)).ratio;
    rows.push_back({"weighted-median = 1/ε", "k=" + std::to_string(k) + " ε=" + eps.to_string(),
                    expected.to_string(), r.to_string(), r == Ratio::of(expected, 1)});
  }
  return rows;
}

inline std::vector<ClaimRow> unknown_lengths() {
  std::vector<ClaimRow> rows;
  for (const Coord& eps : {Coord{1, 2}, Coord{1, 10}}) {
    for (const Mechanism& m : {controls::cover_leftmost(), controls::cover_rightmost()}) {
      ProbeResult res = unknown_lengths_probe(m, eps);
      Coord bound = Coord{1} / eps;
      std::string measured = "violation";
      bool pass = false;
      if (const auto* w = std::get_if<RatioWitness>(&res.outcome)) {
        measured = "witness " + w->ratio.to_string();
        pass = w->ratio.at_least(bound);
      }
      rows.push_back({"unknown lengths Ω(1/ε)", m.name() + " ε=" + eps.to_string(),
                      "witness ≥ " + bound.to_string(), measured, pass});
    }
    ProbeResult res = unknown_lengths_probe(controls::cover_then_flee(), eps);
    bool violation = std::holds_alternative<TruthfulnessViolation>(res.outcome);
    rows.push_back({"unknown lengths Ω(1/ε)", "cover-then-flee ε=" + eps.to_string(), "violation",
                    violation ? "violation" : "witness", violation});
  }
  return rows;
}

inline std::vector<ClaimRow> solver_agreement(std::size_t instances = 1000) {
  std::size_t mismatches = 0;
  std::size_t unanchored = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    gen::GeneratorParams p;
    p.n = 1 + i % 12;
    p.seed = 0x50u + i;
    Instance inst = gen::random_instance(p);
    Optimum fast = optimal_placement(inst);
    Optimum slow = brute_force_optimal(inst, Coord{1, 16});
    if (fast.social_cost != slow.social_cost) ++mismatches;
    bool anchored = false;
    for (const auto& a : inst.agents()) {
      for (const Coord& e : {a.s, a.t()}) {
        if (fast.placement.s == e || fast.placement.s == e - inst.covering_length()) anchored = true;
      }
    }
    if (!anchored) ++unanchored;
  }
  return {{"solver = brute force", std::to_string(instances) + " instances", "0 mismatches, 0 unanchored",
           std::to_string(mismatches) + " mismatches, " + std::to_string(unanchored) + " unanchored",
           mismatches == 0 && unanchored == 0}};
}

/// Every profile of n <= max_n unit agents with left endpoints on `grid`.
inline std::vector<Instance> grid_profiles(const std::vector<Coord>& grid, std::size_t max_n) {
  std::vector<Instance> out;
  for (std::size_t n = 1; n <= max_n; ++n) {
    std::vector<std::size_t> digits(n, 0);
    while (true) {
      std::vector<Coord> lefts;
      for (auto d : digits) lefts.push_back(grid[d]);
      out.push_back(Instance::unit(lefts));
      std::size_t pos = 0;
      while (pos < n && ++digits[pos] == grid.size()) digits[pos++] = 0;
      if (pos == n) break;
    }
  }
  return out;
}

inline std::size_t count_witnesses(const Mechanism& mech, const std::vector<Instance>& profiles, const Coord& step) {
  std::size_t found = 0;
  for (const auto& inst : profiles) {
    found += audit_all_agents(mech, inst, default_misreport_positions(inst, step)).size();
  }
  return found;
}

inline std::vector<ClaimRow> truthfulness_suite(std::size_t max_n = 4) {
  const std::vector<Coord> grid = {0, Coord{1, 2}, 1, Coord{3, 2}, 2};
  const Coord step{1, 4};
  std::vector<Instance> profiles = grid_profiles(grid, max_n);
  std::vector<ClaimRow> rows;

  std::size_t kth_found = 0;
  for (const auto& inst : profiles) {
    auto positions = default_misreport_positions(inst, step);
    for (std::size_t k = 1; k <= inst.size(); ++k) {
      kth_found += audit_all_agents(make_kth_statistic(k), inst, positions).size();
    }
  }
  std::string param = std::to_string(profiles.size()) + " profiles";
  rows.push_back({"truthful: no profitable misreport", "kth (all k), " + param, "0 witnesses",
                  std::to_string(kth_found) + " witnesses", kth_found == 0});
  for (const Mechanism& m : {make_median(), make_weighted_median(), make_uniform_statistic()}) {
    std::size_t found = count_witnesses(m, profiles, step);
    rows.push_back({"truthful: no profitable misreport", m.name() + ", " + param, "0 witnesses",
                    std::to_string(found) + " witnesses", found == 0});
  }
  std::size_t control = count_witnesses(controls::mean_of_left_endpoints(), profiles, step);
  rows.push_back({"truthful: no profitable misreport", "mean-left control, " + param, "≥ 1 witness",
                  std::to_string(control) + " witnesses", control >= 1});
  return rows;
}

inline std::vector<ClaimRow> welfare_bound() {
  std::vector<ClaimRow> rows;
  for (std::size_t n : {2, 4, 10, 100}) {
    Coord rho = Coord{2} - Coord{2} / sn(n);
    Coord v = welfare_ratio_bound(rho, n, 1);
    Coord expected = sn(n) / 2;
    rows.push_back({"welfare bound = n/2", "n=" + std::to_string(n), expected.to_string(), v.to_string(),
                    v == expected});
  }
  return rows;
}

inline std::vector<ClaimRow> all_claims() {
  std::vector<ClaimRow> rows;
  auto append = [&](std::vector<ClaimRow> more) { rows.insert(rows.end(), more.begin(), more.end()); };
  append(random_sweep());
  append(median_tightness());
  append(median_lower_bound());
  append(uniform_statistic_exact());
  append(order_statistic_bound());
  append(weighted_median_worst_case());
  append(unknown_lengths());
  append(solver_agreement());
  append(truthfulness_suite());
  append(welfare_bound());
  return rows;
}

}  // namespace tic::reproduce
