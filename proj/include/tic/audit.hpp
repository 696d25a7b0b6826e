#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tic/core.hpp"
#include "tic/instance_gen.hpp"
#include "tic/mechanisms.hpp"
#include "tic/solver.hpp"

namespace tic {

/// Exact ratio, or the explicit unbounded state when OPT = 0 < cost.
class Ratio {
 public:
  static Ratio of(const Coord& cost, const Coord& optimum) {
    if (optimum == 0) return cost == 0 ? Ratio(Coord{1}) : Ratio();
    return Ratio(cost / optimum);
  }

  bool unbounded() const noexcept { return unbounded_; }

  const Coord& value() const {
    if (unbounded_) throw std::logic_error("ratio is unbounded");
    return value_;
  }

  /// Compares against a finite threshold; unbounded exceeds every value.
  bool at_least(const Coord& bound) const { return unbounded_ || value_ >= bound; }
  bool at_most(const Coord& bound) const { return !unbounded_ && value_ <= bound; }

  std::string to_string() const { return unbounded_ ? "UNBOUNDED" : value_.to_string(); }

  friend bool operator==(const Ratio&, const Ratio&) = default;

 private:
  Ratio() : unbounded_(true) {}
  explicit Ratio(Coord v) : value_(v) {}

  Coord value_{0};
  bool unbounded_ = false;
};

struct RatioReport {
  Coord mechanism_cost;
  Coord optimal_cost;
  Ratio ratio;
  Lottery mechanism_output;
  Placement optimal_placement;
};

/// (Expected) social cost of the mechanism on `inst` over the optimum.
inline RatioReport approximation_ratio(const Mechanism& mech, const Instance& inst) {
  Lottery out = mech.lottery(inst);
  Coord cost = expected_social_cost(inst, out);
  Optimum opt = optimal_placement(inst);
  return {cost, opt.social_cost, Ratio::of(cost, opt.social_cost), std::move(out), opt.placement};
}

/// A misreport that strictly lowers an agent's (expected or per-realization)
/// cost, measured against the agent's true interval.
struct DeviationWitness {
  enum class Kind { Expected, Realization };

  std::size_t agent = 0;
  Interval truth;
  Interval misreport;
  Coord true_cost;
  Coord deviated_cost;
  Kind kind = Kind::Expected;
  // Coupling key of the realization, when kind == Realization.
  std::size_t realization = 0;
};

namespace detail {

inline Coord expected_cost(const std::vector<Realization>& rs, const Interval& agent, const Coord& c) {
  Coord sum = 0;
  for (const auto& r : rs) sum += r.probability * agent_cost(agent, r.placement, c);
  return sum;
}

}  // namespace detail

/**
 * Tries each misreport in order and returns the first one that strictly
 * helps `agent`. Randomized mechanisms are checked in expectation and then
 * realization by realization under index coupling.
 */
inline std::optional<DeviationWitness> deviation_search(const Mechanism& mech, const Instance& inst, std::size_t agent,
                                                        std::span<const Interval> misreports) {
  if (misreports.empty()) throw std::invalid_argument("misreport set is empty");
  const Coord& c = inst.covering_length();
  const Interval truth = inst.agent_by_id(agent).interval();
  const std::vector<Realization> honest = mech.realizations(inst);
  const Coord honest_cost = detail::expected_cost(honest, truth, c);

  for (const auto& report : misreports) {
    if (report == truth) continue;
    if (mech.traits().equal_unit_only && report.length != 1) {
      throw std::invalid_argument("misreport length must be 1 for " + mech.name());
    }
    const std::vector<Realization> deviated = mech.realizations(inst.with_report(agent, report));
    Coord deviated_cost = detail::expected_cost(deviated, truth, c);
    if (deviated_cost < honest_cost) {
      return DeviationWitness{agent, truth, report, honest_cost, deviated_cost, DeviationWitness::Kind::Expected, 0};
    }
    if (mech.is_deterministic() || deviated.size() != honest.size()) continue;
    for (std::size_t j = 0; j < honest.size(); ++j) {
      Coord before = agent_cost(truth, honest[j].placement, c);
      Coord after = agent_cost(truth, deviated[j].placement, c);
      if (after < before) {
        return DeviationWitness{agent, truth, report, before, after, DeviationWitness::Kind::Realization, j};
      }
    }
  }
  return std::nullopt;
}

/// Left endpoints of the default misreport set: every agent endpoint e with
/// e - c, e, e + c, plus the grid [min s - c - 1, max t + 1] at `step`.
inline std::vector<Coord> default_misreport_positions(const Instance& inst, const Coord& step) {
  if (step <= 0) throw std::invalid_argument("grid step must be positive");
  const Coord& c = inst.covering_length();
  std::vector<Coord> xs;
  Coord hi = inst.agents().front().t();
  for (const auto& a : inst.agents()) {
    for (const Coord& e : {a.s, a.t()}) {
      xs.push_back(e - c);
      xs.push_back(e);
      xs.push_back(e + c);
    }
    hi = std::max(hi, a.t());
  }
  for (Coord x = inst.agents().front().s - c - 1; x <= hi + 1; x += step) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

/// Default misreports for one agent: positions as above, true length kept.
inline std::vector<Interval> default_misreports(const Instance& inst, std::size_t agent, const Coord& step) {
  const Coord length = inst.agent_by_id(agent).length;
  std::vector<Interval> out;
  for (const auto& x : default_misreport_positions(inst, step)) out.push_back({x, length});
  return out;
}

/// Runs deviation_search for every agent; returns all witnesses found (at
/// most one per agent), in id order.
inline std::vector<DeviationWitness> audit_all_agents(const Mechanism& mech, const Instance& inst,
                                                      const std::vector<Coord>& positions) {
  std::vector<DeviationWitness> found;
  for (std::size_t id = 0; id < inst.size(); ++id) {
    const Coord length = inst.agent_by_id(id).length;
    std::vector<Interval> reports;
    reports.reserve(positions.size());
    for (const auto& x : positions) reports.push_back({x, length});
    if (auto w = deviation_search(mech, inst, id, reports)) found.push_back(*w);
  }
  return found;
}

// ---------------------------------------------------------------------------
// Adversary game against deterministic mechanisms.

/// Exact measured ratio on a concrete instance, plus the bound the
/// construction guarantees at that point.
struct RatioWitness {
  Instance instance;
  Placement placement;
  Coord mechanism_cost;
  Coord optimal_cost;
  Ratio ratio;
  Coord bound;
};

struct TruthfulnessViolation {
  Instance instance;
  DeviationWitness witness;
};

struct Exhausted {
  std::string reason;
};

struct GameStep {
  Instance instance;
  Placement placement;
  // Ids of agents overlapping the covering interval with positive length.
  std::vector<std::size_t> intersecting;
  std::optional<std::size_t> moved_agent;
  std::optional<Interval> new_report;
  std::size_t family = 0;
};

struct GameTranscript {
  std::vector<GameStep> steps;
  std::variant<RatioWitness, TruthfulnessViolation, Exhausted> status{Exhausted{}};
  std::size_t family_reached = 0;
  // The mechanism's first placement hit the right cluster; instances and
  // placements in `steps` are still in the mechanism's own coordinates.
  bool mirrored = false;
};

struct GameOptions {
  Coord delta{1, 1000};
  // 0 selects 16 * n.
  std::size_t iteration_cap = 0;
};

namespace detail {

inline RatioWitness measure(const Instance& inst, Placement p, Coord bound) {
  Coord cost = social_cost(inst, p);
  Coord opt = optimal_placement(inst).social_cost;
  return {inst, p, cost, opt, Ratio::of(cost, opt), bound};
}

}  // namespace detail

/**
 * Plays the instance-modification game that forces a truthful deterministic
 * mechanism to social cost n - 1 against an optimum of n/2.
 *
 * Starts from n/2 agents on [0,1] and n/2 on [n,n+1]. While the covering
 * interval C overlaps more than one agent, the rightmost overlapping agent
 * (largest t, then largest id) moves: to [t, t+1] if t lies strictly inside
 * C, otherwise to [right(C) - delta, right(C) - delta + 1]. A truthful
 * mechanism must keep overlapping the moved agent; if it does not, the move
 * back is a profitable misreport and is reported as a violation.
 */
inline GameTranscript adversary_game(const Mechanism& mech, std::size_t n, const GameOptions& options = {}) {
  if (!mech.is_deterministic()) throw std::invalid_argument("adversary game needs a deterministic mechanism");
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("adversary game needs an even n >= 4");
  if (options.delta <= 0 || options.delta >= Coord(1, 2)) throw std::invalid_argument("delta must lie in (0, 1/2)");
  const std::size_t cap = options.iteration_cap ? options.iteration_cap : 16 * n;
  const std::int64_t sn = static_cast<std::int64_t>(n);
  const Coord axis = sn + 1;  // swaps [0,1] and [n,n+1]
  const Coord unit = 1;
  const std::size_t last_family = n / 2 - 1;

  GameTranscript tr;
  Instance seed = gen::two_cluster_seed(n);

  Placement first = mech.place(seed);
  if (overlap(covering(first, unit), {sn, 1}) > 0) tr.mirrored = true;

  // The game runs in its own frame, where the mechanism starts on the left
  // cluster; `ask` translates to and from the mechanism's frame.
  auto to_mech = [&](const Instance& inst) { return tr.mirrored ? mirror(inst, axis) : inst; };
  auto ask = [&](const Instance& inst) {
    Placement p = mech.place(to_mech(inst));
    return tr.mirrored ? mirror(p, axis, unit) : p;
  };
  auto record = [&](const Instance& inst, Placement p, std::vector<std::size_t> xs, std::size_t family) {
    Placement shown = tr.mirrored ? mirror(p, axis, unit) : p;
    tr.steps.push_back({to_mech(inst), shown, std::move(xs), std::nullopt, std::nullopt, family});
  };
  auto witness = [&](const Instance& inst, Placement p, Coord bound) {
    return detail::measure(to_mech(inst), tr.mirrored ? mirror(p, axis, unit) : p, bound);
  };

  Instance inst = seed;
  Placement placement = tr.mirrored ? mirror(first, axis, unit) : first;
  std::size_t family = 0;

  for (std::size_t iter = 0;; ++iter) {
    Interval c = covering(placement, unit);
    std::vector<std::size_t> xs;
    for (const auto& a : inst.agents()) {
      if (overlap(a.interval(), c) > 0) xs.push_back(a.id);
    }
    std::sort(xs.begin(), xs.end());
    record(inst, placement, xs, family);

    if (xs.empty()) {
      tr.status = witness(inst, placement, Coord{2});
      break;
    }
    if (xs.size() <= 1) {
      tr.status = witness(inst, placement, Coord(sn - 1) / Coord(sn / 2));
      break;
    }
    if (iter >= cap) {
      tr.status = Exhausted{"iteration cap " + std::to_string(cap) + " reached"};
      break;
    }

    const AgentInterval* mover = nullptr;
    for (std::size_t id : xs) {
      const AgentInterval& a = inst.agent_by_id(id);
      if (!mover || a.t() > mover->t() || (a.t() == mover->t() && a.id > mover->id)) mover = &a;
    }
    const Interval old_report = mover->interval();
    const std::size_t moved = mover->id;
    const Coord right = c.t();
    Interval report = (mover->t() > c.s && mover->t() < right) ? Interval{mover->t(), 1}
                                                                : Interval{right - options.delta, 1};
    if (report == old_report) {
      tr.status = Exhausted{"stalled: agent " + std::to_string(moved) + " is already at its target"};
      break;
    }
    tr.steps.back().moved_agent = moved;
    tr.steps.back().new_report = tr.mirrored ? mirror(report, axis) : report;

    Instance next = inst.with_report(moved, report);
    Placement next_placement = ask(next);

    if (overlap(report, covering(next_placement, unit)) == 0) {
      // Reporting the previous interval restores `placement`, which overlaps
      // the true interval `report` with positive length.
      Coord honest = agent_cost(report, next_placement, unit);
      Coord deviated = agent_cost(report, placement, unit);
      Interval truth = report;
      Interval lie = old_report;
      if (tr.mirrored) {
        truth = mirror(truth, axis);
        lie = mirror(lie, axis);
      }
      record(next, next_placement, {}, family);
      tr.status = TruthfulnessViolation{
          to_mech(next), DeviationWitness{moved, truth, lie, honest, deviated, DeviationWitness::Kind::Expected, 0}};
      break;
    }

    inst = std::move(next);
    placement = next_placement;
    if (placement.s >= 0) family = std::max(family, static_cast<std::size_t>(placement.s.floor()));
    tr.family_reached = family;
    if (family >= last_family) {
      record(inst, placement, {}, family);
      tr.status = witness(inst, placement, Coord{2} - Coord{2} / Coord(sn));
      break;
    }
  }
  tr.family_reached = family;
  return tr;
}

// ---------------------------------------------------------------------------
// Lower bound for convex combinations of order statistics.

/// Exact expected ratio of the order-statistic mixture `weights` on the
/// singleton/group instance and on its mirror image; the larger of the two.
inline Coord order_statistic_lower_bound(const std::vector<Coord>& weights, std::size_t n) {
  validate_weights(weights);
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("n must be even and at least 2");
  if (weights.size() != n) throw std::invalid_argument("expected one weight per agent");
  Mechanism mech = make_convex_combination(weights);
  Instance base = gen::singleton_group(n);
  Ratio a = approximation_ratio(mech, base).ratio;
  Ratio b = approximation_ratio(mech, mirror(base)).ratio;
  return std::max(a.value(), b.value());
}

/// 1 + q(n-2)/n, where q is the heavier of the two half-masses.
inline Coord order_statistic_lower_bound_closed_form(const std::vector<Coord>& weights, std::size_t n) {
  Coord first = 0;
  for (std::size_t k = 0; k < n / 2; ++k) first += weights.at(k);
  Coord q = std::max(first, Coord{1} - first);
  Coord sn(static_cast<std::int64_t>(n));
  return Coord{1} + q * (sn - 2) / sn;
}

// ---------------------------------------------------------------------------
// Impossibility probe for mechanisms that accept reported lengths.

struct ProbeResult {
  std::variant<RatioWitness, TruthfulnessViolation> outcome;
  // True when the mechanism's realizations were handled as a lottery.
  bool lottery_path = false;
  // The short interval was placed at the right end of [0,1].
  bool right_side = false;
};

/**
 * Runs the two-agent construction {[0,1], [3,3+eps]} against a mechanism
 * that accepts reported lengths. Either the mechanism pays a ratio of order
 * 1/eps on one of the two instances, or the short agent profits by reporting
 * [0,1]. The result is always one of the two.
 */
inline ProbeResult unknown_lengths_probe(const Mechanism& mech, const Coord& eps) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("epsilon must lie in (0,1)");
  auto [base, shrunk] = gen::unknown_length_pair(eps);
  const Coord unit = 1;
  const Interval wide{0, 1};
  const Coord eps2 = eps * eps;

  auto ratio_witness = [](const Instance& inst, const Lottery& lot, Coord bound) {
    Coord cost = expected_social_cost(inst, lot);
    Optimum opt = optimal_placement(inst);
    Placement shown = lot.entries().front().placement;
    return RatioWitness{inst, shown, cost, opt.social_cost, Ratio::of(cost, opt.social_cost), bound};
  };
  auto side_instance = [&](bool right) {
    return right ? Instance::from_intervals({{1 - eps2, eps2}, {3, eps}}, 1) : shrunk;
  };

  const bool lottery_path = !mech.is_deterministic();
  bool right_side = false;
  auto done = [&](std::variant<RatioWitness, TruthfulnessViolation> outcome) {
    return ProbeResult{std::move(outcome), lottery_path, right_side};
  };

  if (mech.is_deterministic()) {
    Placement p = mech.place(base);
    Coord covered = overlap(wide, covering(p, unit));
    // Overlap at most eps already costs at least 1 against an optimum of eps.
    if (covered <= eps) {
      return done(ratio_witness(base, Lottery::certain(p), Coord{1} / eps));
    }
    // Overlap above eps means C contains 0 or 1; shrink on that side.
    right_side = p.s > 0;
    Instance probe = side_instance(right_side);
    Interval small = probe.agent_by_id(0).interval();
    Placement q = mech.place(probe);
    if (overlap(small, covering(q, unit)) == small.length) {
      return done(ratio_witness(probe, Lottery::certain(q), Coord{1} / eps));
    }
    Coord honest = agent_cost(small, q, unit);
    Coord deviated = agent_cost(small, p, unit);
    return done(TruthfulnessViolation{
        probe, DeviationWitness{0, small, wide, honest, deviated, DeviationWitness::Kind::Expected, 0}});
  }

  Lottery lot = mech.lottery(base);
  Coord hit = 0, left_cover = 0, right_cover = 0;
  const Interval left_end{0, eps};
  const Interval right_end{1 - eps, eps};
  for (const auto& e : lot.entries()) {
    Interval c = covering(e.placement, unit);
    if (overlap(wide, c) > 0) hit += e.probability;
    if (overlap(left_end, c) == eps) left_cover += e.probability;
    if (overlap(right_end, c) == eps) right_cover += e.probability;
  }
  const Coord quarter{1, 4};
  if (hit < Coord(1, 2)) {
    return done(ratio_witness(base, lot, Coord{1} / (2 * eps)));
  }
  if (left_cover < quarter && right_cover < quarter) {
    // Every realization that covers neither end overlaps [0,1] by less than
    // eps, so it costs at least 1; that happens with probability above 1/2.
    return done(ratio_witness(base, lot, Coord{1} / (2 * eps)));
  }
  right_side = left_cover < quarter;
  Instance probe = side_instance(right_side);
  Interval small = probe.agent_by_id(0).interval();
  Lottery shrunk_lot = mech.lottery(probe);
  Coord honest = expected_agent_cost(small, shrunk_lot, unit);
  Coord deviated = expected_agent_cost(small, lot, unit);
  if (deviated < honest) {
    return done(TruthfulnessViolation{
        probe, DeviationWitness{0, small, wide, honest, deviated, DeviationWitness::Kind::Expected, 0}});
  }
  return done(ratio_witness(probe, shrunk_lot, Coord{1} / (4 * eps)));
}

// ---------------------------------------------------------------------------

/// Welfare-ratio bound 1/rho + n(rho-1)/(rho * sw_lower) implied by a
/// social-cost ratio rho when every outcome has welfare at least sw_lower.
inline Coord welfare_ratio_bound(const Coord& rho, std::size_t n, const Coord& sw_lower) {
  if (rho < 1) throw std::invalid_argument("rho must be at least 1");
  if (sw_lower <= 0) throw std::invalid_argument("welfare lower bound must be positive");
  Coord sn(static_cast<std::int64_t>(n));
  return Coord{1} / rho + sn * (rho - 1) / (rho * sw_lower);
}

}  // namespace tic
