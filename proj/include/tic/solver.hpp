#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tic/core.hpp"

namespace tic {

/// Every placement that starts or ends at an agent endpoint, sorted and
/// deduplicated. Some social-cost minimizer is always among them.
inline std::vector<Placement> candidate_placements(const Instance& inst) {
  const Coord& c = inst.covering_length();
  std::vector<Placement> out;
  out.reserve(4 * inst.size());
  for (const auto& a : inst.agents()) {
    out.push_back({a.s});
    out.push_back({a.s - c});
    out.push_back({a.t()});
    out.push_back({a.t() - c});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/**
 * Social cost as a function of the placement's left endpoint x.
 *
 * Continuous and piecewise linear. slopes[0] applies left of breakpoints[0],
 * slopes[j] between breakpoints[j-1] and breakpoints[j], and slopes.back()
 * right of the last breakpoint. Both unbounded slopes are 0 and the value
 * there is the total length.
 */
struct ScProfile {
  std::vector<Coord> breakpoints;
  std::vector<std::int64_t> slopes;
  Coord value_at_first;

  Coord evaluate(const Coord& x) const {
    if (x <= breakpoints.front()) return value_at_first + Coord(slopes.front()) * (x - breakpoints.front());
    Coord value = value_at_first;
    for (std::size_t j = 1; j < breakpoints.size(); ++j) {
      if (x <= breakpoints[j]) return value + Coord(slopes[j]) * (x - breakpoints[j - 1]);
      value += Coord(slopes[j]) * (breakpoints[j] - breakpoints[j - 1]);
    }
    return value + Coord(slopes.back()) * (x - breakpoints.back());
  }

  /// Values at each breakpoint.
  std::vector<Coord> breakpoint_values() const {
    std::vector<Coord> values;
    values.reserve(breakpoints.size());
    values.push_back(value_at_first);
    for (std::size_t j = 1; j < breakpoints.size(); ++j) {
      values.push_back(values.back() + Coord(slopes[j]) * (breakpoints[j] - breakpoints[j - 1]));
    }
    return values;
  }
};

// Per agent, cost(x) = length - overlap([s,t], [x, x+c]) falls with slope -1
// on [s-c, min(s, t-c)], is flat, then rises with slope +1 on
// [max(s, t-c), t]. When length == c the two middle events coincide.
inline ScProfile sc_profile(const Instance& inst) {
  const Coord& c = inst.covering_length();
  std::vector<std::pair<Coord, std::int64_t>> events;
  events.reserve(4 * inst.size());
  for (const auto& a : inst.agents()) {
    Coord t = a.t();
    events.emplace_back(a.s - c, -1);
    events.emplace_back(std::min(a.s, t - c), +1);
    events.emplace_back(std::max(a.s, t - c), +1);
    events.emplace_back(t, -1);
  }
  std::sort(events.begin(), events.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  ScProfile profile;
  profile.value_at_first = inst.total_length();
  profile.slopes.push_back(0);
  std::int64_t slope = 0;
  for (std::size_t i = 0; i < events.size();) {
    std::size_t j = i;
    std::int64_t delta = 0;
    while (j < events.size() && events[j].first == events[i].first) delta += events[j++].second;
    if (delta != 0) {
      slope += delta;
      profile.breakpoints.push_back(events[i].first);
      profile.slopes.push_back(slope);
    }
    i = j;
  }
  return profile;
}

struct Optimum {
  Placement placement;
  Coord social_cost;

  friend bool operator==(const Optimum&, const Optimum&) = default;
};

/// Social-cost minimizing placement; the leftmost one among ties. Runs an
/// event sweep in O(n log n).
inline Optimum optimal_placement(const Instance& inst) {
  ScProfile profile = sc_profile(inst);
  std::vector<Coord> values = profile.breakpoint_values();
  std::size_t best = 0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (values[j] < values[best]) best = j;
  }
  return {{profile.breakpoints[best]}, values[best]};
}

/// Test oracle: direct evaluation over the candidates and the rational grid
/// [min endpoint - c, max endpoint] at `grid_step`. Leftmost among ties.
inline Optimum brute_force_optimal(const Instance& inst, const Coord& grid_step) {
  if (grid_step <= 0) throw std::invalid_argument("grid step must be positive");
  std::vector<Placement> points = candidate_placements(inst);
  Coord lo = inst.agents().front().s;
  Coord hi = inst.agents().front().t();
  for (const auto& a : inst.agents()) hi = std::max(hi, a.t());
  for (Coord x = lo - inst.covering_length(); x <= hi; x += grid_step) points.push_back({x});
  std::sort(points.begin(), points.end());

  Optimum best{points.front(), social_cost(inst, points.front())};
  for (const auto& p : points) {
    Coord sc = social_cost(inst, p);
    if (sc < best.social_cost) best = {p, sc};
  }
  return best;
}

}  // namespace tic
