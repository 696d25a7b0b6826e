#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tic/core.hpp"

namespace tic {

/// One outcome of a mechanism's internal randomness. The position of a
/// realization in the vector a mechanism returns is its coupling key: two
/// runs of the same mechanism on different profiles are compared index by
/// index when checking universal truthfulness.
struct Realization {
  Coord probability;
  Placement placement;
};

struct MechanismTraits {
  bool deterministic = true;
  // Applies only to instances with unit lengths and unit covering length.
  bool equal_unit_only = true;
  // Audits treat any profitable misreport as a failure.
  bool claims_truthful = true;
};

/**
 * Type-erased mechanism: a rule from a reported profile to a list of
 * realizations. Deterministic mechanisms have exactly one realization.
 */
class Mechanism {
 public:
  using Rule = std::function<std::vector<Realization>(const Instance&)>;
  using DeterministicRule = std::function<Placement(const Instance&)>;

  using Traits = MechanismTraits;

  Mechanism(std::string name, Rule rule, Traits traits)
      : name_(std::move(name)), rule_(std::move(rule)), traits_(traits) {}

  static Mechanism deterministic(std::string name, DeterministicRule rule, Traits traits = {}) {
    traits.deterministic = true;
    return Mechanism(
        std::move(name),
        [rule = std::move(rule)](const Instance& inst) {
          return std::vector<Realization>{{Coord{1}, rule(inst)}};
        },
        traits);
  }

  const std::string& name() const noexcept { return name_; }
  const Traits& traits() const noexcept { return traits_; }
  bool is_deterministic() const noexcept { return traits_.deterministic; }

  std::vector<Realization> realizations(const Instance& inst) const { return rule_(inst); }

  Lottery lottery(const Instance& inst) const {
    std::vector<LotteryEntry> entries;
    for (const auto& r : rule_(inst)) entries.push_back({r.placement, r.probability});
    return Lottery(std::move(entries));
  }

  Placement place(const Instance& inst) const {
    if (!traits_.deterministic) throw std::logic_error(name_ + " is randomized; use lottery()");
    return rule_(inst).front().placement;
  }

 private:
  std::string name_;
  Rule rule_;
  Traits traits_;
};

namespace detail {

inline void require_equal_unit(const Instance& inst, std::string_view who) {
  if (!inst.equal_unit()) {
    throw std::invalid_argument(std::string(who) + " requires unit-length agents and covering interval");
  }
}

inline std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace detail

// Order-statistic indices are 1-based throughout.

inline std::size_t median_index(std::size_t n) { return detail::ceil_div(n, 2); }
inline std::size_t left_third_index(std::size_t n) { return detail::ceil_div(n, 3); }
inline std::size_t right_third_index(std::size_t n) { return detail::ceil_div(2 * n, 3); }

/// Places the covering interval on the agent with the k-th smallest left
/// endpoint (ties by id).
inline Placement kth_statistic(const Instance& inst, std::size_t k) {
  detail::require_equal_unit(inst, "kth_statistic");
  if (k < 1 || k > inst.size()) {
    throw std::out_of_range("order statistic index " + std::to_string(k) + " outside 1.." +
                            std::to_string(inst.size()));
  }
  return {inst.kth(k).s};
}

/// k = n/2 for even n and (n+1)/2 for odd n.
inline Placement median_mechanism(const Instance& inst) { return kth_statistic(inst, median_index(inst.size())); }

/// Index-coupled realizations: one per slot (left third, median, right third),
/// each with probability 1/3, before merging.
inline std::vector<Realization> uniform_statistic_realizations(const Instance& inst) {
  std::size_t n = inst.size();
  Coord third{1, 3};
  return {{third, kth_statistic(inst, left_third_index(n))},
          {third, kth_statistic(inst, median_index(n))},
          {third, kth_statistic(inst, right_third_index(n))}};
}

inline Lottery uniform_statistic(const Instance& inst) {
  std::vector<LotteryEntry> entries;
  for (const auto& r : uniform_statistic_realizations(inst)) entries.push_back({r.placement, r.probability});
  return Lottery(std::move(entries));
}

/// Left endpoint of the leftmost agent whose length prefix sum reaches half
/// of the total length. Works with arbitrary positive lengths.
inline Placement weighted_median(const Instance& inst) {
  Coord half = inst.total_length() / 2;
  Coord prefix = 0;
  for (const auto& a : inst.agents()) {
    prefix += a.length;
    if (prefix >= half) return {a.s};
  }
  return {inst.agents().back().s};  // unreachable: prefix ends at the total
}

inline void validate_weights(const std::vector<Coord>& weights) {
  if (weights.empty()) throw std::invalid_argument("weight vector is empty");
  Coord total = 0;
  for (const auto& w : weights) {
    if (w < 0) throw std::invalid_argument("negative weight " + w.to_string());
    total += w;
  }
  if (total != 1) throw std::invalid_argument("weights sum to " + total.to_string() + ", not 1");
}

/// weights[k-1] is the probability of the k-th order statistic.
inline std::vector<Realization> convex_combination_realizations(const Instance& inst,
                                                                const std::vector<Coord>& weights) {
  validate_weights(weights);
  if (weights.size() != inst.size()) {
    throw std::invalid_argument("expected " + std::to_string(inst.size()) + " weights, got " +
                                std::to_string(weights.size()));
  }
  std::vector<Realization> out;
  out.reserve(weights.size());
  for (std::size_t k = 1; k <= weights.size(); ++k) out.push_back({weights[k - 1], kth_statistic(inst, k)});
  return out;
}

inline Lottery convex_combination(const Instance& inst, const std::vector<Coord>& weights) {
  std::vector<LotteryEntry> entries;
  for (const auto& r : convex_combination_realizations(inst, weights)) entries.push_back({r.placement, r.probability});
  return Lottery(std::move(entries));
}

// Mechanism objects for the audit engine.

inline Mechanism make_kth_statistic(std::size_t k) {
  return Mechanism::deterministic("kth:" + std::to_string(k),
                                  [k](const Instance& inst) { return kth_statistic(inst, k); });
}

inline Mechanism make_median() { return Mechanism::deterministic("median", median_mechanism); }

inline Mechanism make_uniform_statistic() {
  return Mechanism("uniform-statistic", uniform_statistic_realizations,
                   {.deterministic = false, .equal_unit_only = true, .claims_truthful = true});
}

inline Mechanism make_weighted_median() {
  return Mechanism::deterministic("weighted-median", weighted_median,
                                  {.deterministic = true, .equal_unit_only = false, .claims_truthful = true});
}

inline std::string join_weights(const std::vector<Coord>& weights) {
  std::string s;
  for (std::size_t i = 0; i < weights.size(); ++i) s += (i ? "," : "") + weights[i].to_string();
  return s;
}

inline Mechanism make_convex_combination(std::vector<Coord> weights) {
  validate_weights(weights);
  std::string name = "convex:" + join_weights(weights);
  return Mechanism(
      std::move(name),
      [weights = std::move(weights)](const Instance& inst) { return convex_combination_realizations(inst, weights); },
      {.deterministic = false, .equal_unit_only = true, .claims_truthful = true});
}

/// Non-truthful and deliberately naive mechanisms used as negative controls
/// by the audit suites.
namespace controls {

/// Covers from the average reported left endpoint.
inline Mechanism mean_of_left_endpoints() {
  return Mechanism::deterministic(
      "mean-left",
      [](const Instance& inst) {
        Coord sum = 0;
        for (const auto& a : inst.agents()) sum += a.s;
        return Placement{sum / Coord(static_cast<std::int64_t>(inst.size()))};
      },
      {.deterministic = true, .equal_unit_only = false, .claims_truthful = false});
}

/// Covers from the left endpoint of the leftmost reported interval.
inline Mechanism cover_leftmost() {
  return Mechanism::deterministic(
      "cover-leftmost", [](const Instance& inst) { return Placement{inst.agents().front().s}; },
      {.deterministic = true, .equal_unit_only = false, .claims_truthful = false});
}

/// Covers from the left endpoint of the rightmost reported interval.
inline Mechanism cover_rightmost() {
  return Mechanism::deterministic(
      "cover-rightmost", [](const Instance& inst) { return Placement{inst.agents().back().s}; },
      {.deterministic = true, .equal_unit_only = false, .claims_truthful = false});
}

/// Covers the leftmost interval when it is at least as long as the covering
/// interval, otherwise places the covering interval two units to its right.
inline Mechanism cover_then_flee() {
  return Mechanism::deterministic(
      "cover-then-flee",
      [](const Instance& inst) {
        const auto& first = inst.agents().front();
        if (first.length >= inst.covering_length()) return Placement{first.s};
        return Placement{first.s + 2};
      },
      {.deterministic = true, .equal_unit_only = false, .claims_truthful = false});
}

/// Fair coin between cover-leftmost and cover-rightmost.
inline Mechanism coin_left_right() {
  return Mechanism(
      "coin-left-right",
      [](const Instance& inst) {
        return std::vector<Realization>{{Coord{1, 2}, {inst.agents().front().s}},
                                        {Coord{1, 2}, {inst.agents().back().s}}};
      },
      {.deterministic = false, .equal_unit_only = false, .claims_truthful = false});
}

}  // namespace controls

inline std::vector<Coord> parse_weight_list(std::string_view text) {
  std::vector<Coord> weights;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    weights.push_back(Rational::parse(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return weights;
}

/**
 * Builds a mechanism from its selection string:
 * "kth:<k>", "median", "uniform-statistic", "weighted-median",
 * "convex:<p1,...,pn>", or one of the control names
 * "mean-left", "cover-leftmost", "cover-rightmost", "cover-then-flee",
 * "coin-left-right".
 */
inline Mechanism parse_mechanism(std::string_view spec) {
  if (spec == "median") return make_median();
  if (spec == "uniform-statistic") return make_uniform_statistic();
  if (spec == "weighted-median") return make_weighted_median();
  if (spec == "mean-left") return controls::mean_of_left_endpoints();
  if (spec == "cover-leftmost") return controls::cover_leftmost();
  if (spec == "cover-rightmost") return controls::cover_rightmost();
  if (spec == "cover-then-flee") return controls::cover_then_flee();
  if (spec == "coin-left-right") return controls::coin_left_right();
  if (spec.starts_with("kth:")) {
    std::string_view digits = spec.substr(4);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos ||
        digits.size() > 9) {
      throw std::invalid_argument("malformed order statistic index in '" + std::string(spec) + "'");
    }
    std::size_t k = std::stoul(std::string(digits));
    if (k == 0) throw std::invalid_argument("order statistic index must be at least 1");
    return make_kth_statistic(k);
  }
  if (spec.starts_with("convex:")) return make_convex_combination(parse_weight_list(spec.substr(7)));
  throw std::invalid_argument("unknown mechanism '" + std::string(spec) + "'");
}

/// Per-index weights of a mechanism that is a convex combination of order
/// statistics, for instances with n agents.
inline std::vector<Coord> order_statistic_weights(std::string_view spec, std::size_t n) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  std::vector<Coord> w(n, Coord{0});
  auto bump = [&](std::size_t k, const Coord& p) {
    if (k < 1 || k > n) throw std::out_of_range("order statistic index outside 1..n");
    w[k - 1] += p;
  };
  if (spec == "median") {
    bump(median_index(n), 1);
  } else if (spec == "uniform-statistic") {
    bump(left_third_index(n), Coord{1, 3});
    bump(median_index(n), Coord{1, 3});
    bump(right_third_index(n), Coord{1, 3});
  } else if (spec.starts_with("kth:")) {
    bump(std::stoul(std::string(spec.substr(4))), 1);
  } else if (spec.starts_with("convex:")) {
    w = parse_weight_list(spec.substr(7));
    if (w.size() != n) throw std::invalid_argument("weight count does not match n");
    validate_weights(w);
  } else {
    throw std::invalid_argument("'" + std::string(spec) + "' is not a convex combination of order statistics");
  }
  return w;
}

}  // namespace tic
