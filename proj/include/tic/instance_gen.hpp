#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tic/core.hpp"

namespace tic::gen {

namespace detail {

inline void require_gap(const Coord& gap) {
  if (gap <= 1) throw std::invalid_argument("gap must exceed 1 so singletons stay disjoint");
}

// `singletons` unit agents at 0, gap, 2*gap, ... followed by `grouped`
// identical unit agents one gap after the last singleton.
inline Instance singletons_then_group(std::size_t singletons, std::size_t grouped, const Coord& gap) {
  std::vector<Coord> lefts;
  lefts.reserve(singletons + grouped);
  for (std::size_t j = 0; j < singletons; ++j) lefts.push_back(gap * Coord(static_cast<std::int64_t>(j)));
  Coord group_at = gap * Coord(static_cast<std::int64_t>(singletons));
  for (std::size_t j = 0; j < grouped; ++j) lefts.push_back(group_at);
  return Instance::unit(lefts);
}

}  // namespace detail

/// n/3 singletons, then 2n/3 grouped agents. Requires 6 | n.
inline Instance wci1(std::size_t n, const Coord& gap = 2) {
  if (n == 0 || n % 6 != 0) throw std::invalid_argument("wci1 needs n divisible by 6");
  detail::require_gap(gap);
  return detail::singletons_then_group(n / 3, 2 * n / 3, gap);
}

/// n/2 singletons, then n/2 grouped agents. Requires 6 | n.
inline Instance wci2(std::size_t n, const Coord& gap = 2) {
  if (n == 0 || n % 6 != 0) throw std::invalid_argument("wci2 needs n divisible by 6");
  detail::require_gap(gap);
  return detail::singletons_then_group(n / 2, n / 2, gap);
}

/// n/2 agents on [0,1] and n/2 agents on [n, n+1].
inline Instance two_cluster_seed(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("two_cluster_seed needs an even n >= 2");
  std::vector<Coord> lefts(n / 2, Coord{0});
  lefts.resize(n, Coord(static_cast<std::int64_t>(n)));
  return Instance::unit(lefts);
}

/// n/2 spaced singletons followed by n/2 identical agents.
inline Instance singleton_group(std::size_t n, const Coord& gap = 2) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("singleton_group needs an even n >= 2");
  detail::require_gap(gap);
  return detail::singletons_then_group(n / 2, n / 2, gap);
}

/// k unit agents on [0,1] and k/eps agents on [1, 1+eps]; covering length 1.
inline Instance weighted_median_worst(std::size_t k, const Coord& eps) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("epsilon must lie in (0,1)");
  Coord short_count = Coord(static_cast<std::int64_t>(k)) / eps;
  if (!short_count.is_integer()) throw std::invalid_argument("k/epsilon must be an integer");
  std::vector<Interval> intervals(k, Interval{0, 1});
  for (std::int64_t j = 0; j < short_count.num(); ++j) intervals.push_back({1, eps});
  return Instance::from_intervals(intervals, 1);
}

/// The pair {[0,1], [3,3+eps]} and {[0,eps^2], [3,3+eps]}, covering length 1.
inline std::pair<Instance, Instance> unknown_length_pair(const Coord& eps) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("epsilon must lie in (0,1)");
  return {Instance::from_intervals({{0, 1}, {3, eps}}, 1),
          Instance::from_intervals({{0, eps * eps}, {3, eps}}, 1)};
}

struct GeneratorParams {
  std::size_t n = 1;
  Coord gap{2};
  std::uint64_t seed = 0;
  Coord grid_step{1, 4};
  Coord span{8};
};

/**
 * n unit agents with left endpoints on the grid {0, step, ..., span}.
 *
 * Procedure: a std::mt19937_64 seeded with `seed`; each agent draws grid
 * indices by rejection sampling of the raw 64-bit output against the largest
 * multiple of the grid size, then takes the value modulo the grid size. Only
 * engine output is used, so results do not depend on the standard library's
 * distribution implementations.
 */
inline Instance random_instance(const GeneratorParams& params) {
  if (params.n == 0) throw std::invalid_argument("n must be positive");
  if (params.grid_step <= 0 || params.span < 0) throw std::invalid_argument("grid is empty");
  Coord cells = params.span / params.grid_step;
  std::uint64_t points = static_cast<std::uint64_t>(cells.floor()) + 1;

  std::mt19937_64 engine(params.seed);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % points;
  std::vector<Coord> lefts;
  lefts.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    std::uint64_t raw = engine();
    while (raw >= limit) raw = engine();
    lefts.push_back(params.grid_step * Coord(static_cast<std::int64_t>(raw % points)));
  }
  return Instance::unit(lefts);
}

}  // namespace tic::gen
