#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tic/rational.hpp"

namespace tic {

using Coord = Rational;

/// Closed interval [s, s + length] with positive length.
struct Interval {
  Coord s;
  Coord length;

  Coord t() const { return s + length; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Length of the intersection of two intervals; 0 when they are disjoint or
/// only touch at a point.
inline Coord overlap(const Interval& a, const Interval& b) {
  Coord lo = std::max(a.s, b.s);
  Coord hi = std::min(a.t(), b.t());
  return hi > lo ? hi - lo : Coord{0};
}

/// An agent's reported interval. `id` is the 0-based input index and never
/// changes when the instance is re-sorted.
struct AgentInterval {
  std::size_t id = 0;
  Coord s;
  Coord length{1};

  Coord t() const { return s + length; }
  Interval interval() const { return {s, length}; }

  friend bool operator==(const AgentInterval&, const AgentInterval&) = default;
};

/// Left endpoint of the covering interval.
struct Placement {
  Coord s;

  friend bool operator==(const Placement&, const Placement&) = default;
  friend auto operator<=>(const Placement&, const Placement&) = default;
};

inline Interval covering(Placement p, const Coord& covering_length) { return {p.s, covering_length}; }

/**
 * A profile of reported intervals plus the covering length.
 *
 * Agents are kept sorted by (s, id). Ids are always a permutation of 0..n-1,
 * so `agent_by_id` is a table lookup and the input order can be recovered.
 */
class Instance {
 public:
  Instance(std::vector<AgentInterval> agents, Coord covering_length)
      : agents_(std::move(agents)), covering_length_(covering_length) {
    if (agents_.empty()) throw std::invalid_argument("instance has no agents");
    if (covering_length_ <= 0) throw std::invalid_argument("covering length must be positive");
    std::vector<bool> seen(agents_.size(), false);
    for (const auto& a : agents_) {
      if (a.length <= 0) {
        throw std::invalid_argument("agent " + std::to_string(a.id) + " has non-positive length");
      }
      if (a.id >= agents_.size() || seen[a.id]) {
        throw std::invalid_argument("agent ids must be a permutation of 0..n-1");
      }
      seen[a.id] = true;
    }
    std::sort(agents_.begin(), agents_.end(), [](const AgentInterval& x, const AgentInterval& y) {
      return x.s != y.s ? x.s < y.s : x.id < y.id;
    });
    by_id_.resize(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) by_id_[agents_[i].id] = i;
  }

  /// Builds an instance whose ids follow the order of `intervals`.
  static Instance from_intervals(const std::vector<Interval>& intervals, Coord covering_length = 1) {
    std::vector<AgentInterval> agents;
    agents.reserve(intervals.size());
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      agents.push_back({i, intervals[i].s, intervals[i].length});
    }
    return Instance(std::move(agents), covering_length);
  }

  /// Unit agents at the given left endpoints, unit covering length.
  static Instance unit(const std::vector<Coord>& lefts) {
    std::vector<Interval> intervals;
    intervals.reserve(lefts.size());
    for (const auto& s : lefts) intervals.push_back({s, 1});
    return from_intervals(intervals, 1);
  }

  const std::vector<AgentInterval>& agents() const noexcept { return agents_; }
  std::size_t size() const noexcept { return agents_.size(); }
  const Coord& covering_length() const noexcept { return covering_length_; }

  /// Agent with the k-th smallest left endpoint, 1-indexed.
  const AgentInterval& kth(std::size_t k) const { return agents_.at(k - 1); }

  const AgentInterval& agent_by_id(std::size_t id) const { return agents_.at(by_id_.at(id)); }

  /// Sorted position (0-based) of an agent.
  std::size_t position_of(std::size_t id) const { return by_id_.at(id); }

  /// True iff every agent length and the covering length equal 1.
  bool equal_unit() const {
    return covering_length_ == 1 &&
           std::all_of(agents_.begin(), agents_.end(), [](const AgentInterval& a) { return a.length == 1; });
  }

  Coord total_length() const {
    Coord sum = 0;
    for (const auto& a : agents_) sum += a.length;
    return sum;
  }

  /// Copy of this instance with one agent's report replaced.
  Instance with_report(std::size_t id, const Interval& report) const {
    std::vector<AgentInterval> agents = agents_;
    agents[by_id_.at(id)] = {id, report.s, report.length};
    return Instance(std::move(agents), covering_length_);
  }

  /// Agents in input (id) order.
  std::vector<AgentInterval> in_input_order() const {
    std::vector<AgentInterval> out(agents_.size());
    for (const auto& a : agents_) out[a.id] = a;
    return out;
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.covering_length_ == b.covering_length_ && a.agents_ == b.agents_;
  }

 private:
  std::vector<AgentInterval> agents_;
  Coord covering_length_;
  std::vector<std::size_t> by_id_;
};

inline Coord agent_cost(const Interval& agent, Placement p, const Coord& covering_length) {
  return agent.length - overlap(agent, covering(p, covering_length));
}

inline Coord agent_cost(const AgentInterval& agent, Placement p, const Coord& covering_length) {
  return agent_cost(agent.interval(), p, covering_length);
}

inline Coord social_cost(const Instance& inst, Placement p) {
  Coord sum = 0;
  for (const auto& a : inst.agents()) sum += agent_cost(a, p, inst.covering_length());
  return sum;
}

inline Coord social_welfare(const Instance& inst, Placement p) {
  Interval c = covering(p, inst.covering_length());
  Coord sum = 0;
  for (const auto& a : inst.agents()) sum += overlap(a.interval(), c);
  return sum;
}

struct LotteryEntry {
  Placement placement;
  Coord probability;

  friend bool operator==(const LotteryEntry&, const LotteryEntry&) = default;
};

/**
 * Finite distribution over placements.
 *
 * Canonical form: entries sorted by placement, duplicates merged, zero-mass
 * entries dropped. Construction rejects negative masses and totals other
 * than exactly 1.
 */
class Lottery {
 public:
  explicit Lottery(std::vector<LotteryEntry> entries) {
    Coord total = 0;
    for (const auto& e : entries) {
      if (e.probability < 0) throw std::invalid_argument("negative lottery probability");
      total += e.probability;
    }
    if (total != 1) {
      throw std::invalid_argument("lottery probabilities sum to " + total.to_string() + ", not 1");
    }
    std::sort(entries.begin(), entries.end(),
              [](const LotteryEntry& a, const LotteryEntry& b) { return a.placement < b.placement; });
    for (auto& e : entries) {
      if (e.probability == 0) continue;
      if (!entries_.empty() && entries_.back().placement == e.placement) {
        entries_.back().probability += e.probability;
      } else {
        entries_.push_back(e);
      }
    }
  }

  static Lottery certain(Placement p) { return Lottery({{p, 1}}); }

  const std::vector<LotteryEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  friend bool operator==(const Lottery&, const Lottery&) = default;

 private:
  std::vector<LotteryEntry> entries_;
};

inline Coord expected_social_cost(const Instance& inst, const Lottery& lottery) {
  Coord sum = 0;
  for (const auto& e : lottery.entries()) sum += e.probability * social_cost(inst, e.placement);
  return sum;
}

inline Coord expected_agent_cost(const Interval& agent, const Lottery& lottery, const Coord& covering_length) {
  Coord sum = 0;
  for (const auto& e : lottery.entries()) sum += e.probability * agent_cost(agent, e.placement, covering_length);
  return sum;
}

/// Axis of the reflection x -> axis - x that maps the instance's span onto itself.
inline Coord mirror_axis(const Instance& inst) {
  Coord lo = inst.agents().front().s;
  Coord hi = inst.agents().front().t();
  for (const auto& a : inst.agents()) hi = std::max(hi, a.t());
  return lo + hi;
}

inline Interval mirror(const Interval& iv, const Coord& axis) { return {axis - iv.t(), iv.length}; }

inline Placement mirror(Placement p, const Coord& axis, const Coord& covering_length) {
  return {axis - p.s - covering_length};
}

/// Reflects every interval about `axis`; ids are preserved.
inline Instance mirror(const Instance& inst, const Coord& axis) {
  std::vector<AgentInterval> agents;
  agents.reserve(inst.size());
  for (const auto& a : inst.agents()) agents.push_back({a.id, axis - a.t(), a.length});
  return Instance(std::move(agents), inst.covering_length());
}

inline Instance mirror(const Instance& inst) { return mirror(inst, mirror_axis(inst)); }

}  // namespace tic
