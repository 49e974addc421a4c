#pragma once

#include "dfg.hpp"
#include "library.hpp"
#include "schedule.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dvsched {

/// ASAP/ALAP analysis under unit durations and latency bound
/// `latency = critical_length + slack`. Vectors are indexed by node index.
struct TimingInfo {
  std::vector<int> asap;
  std::vector<int> alap;
  int critical_length = 0;
  int slack = 0;
  int latency = 0;

  [[nodiscard]] auto mobility(std::size_t v) const -> int { return alap[v] - asap[v]; }
};

inline auto compute_timing(const Dfg& g, int slack) -> TimingInfo {
  if (slack < 0) throw ValidationError("slack must be non-negative");
  TimingInfo t;
  t.slack = slack;
  t.asap.assign(g.size(), 1);
  t.alap.assign(g.size(), 0);
  auto order = topological_indices(g);
  for (auto v : order) {
    for (auto p : g.preds(v)) t.asap[v] = std::max(t.asap[v], t.asap[p] + 1);
    t.critical_length = std::max(t.critical_length, t.asap[v]);
  }
  t.latency = t.critical_length + slack;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto v = *it;
    t.alap[v] = t.latency;
    for (auto s : g.succs(v)) t.alap[v] = std::min(t.alap[v], t.alap[s] - 1);
  }
  return t;
}

struct Violation {
  enum class Rule { Unassigned, BeforeAsap, AfterAlap, BadDuration, Precedence, Latency };
  Rule rule;
  int node = 0;   // offending node id (edge destination for Precedence)
  int other = 0;  // edge source for Precedence
  std::string message;
};

/// Checks a complete schedule against the timing window, precedence and the
/// latency bound. An operation starting at t with duration d must finish by
/// its ALAP step: t + d - 1 <= alap(v). When `lib` is given, every duration
/// must also match a characterized level of the node's op type.
///
/// Returns the first violation found. Checks run in this order: per-node
/// assignment/asap/duration, edges in (src, dst) order, alap deadlines,
/// overall latency.
inline auto validate_schedule(const Dfg& g, const TimingInfo& t, const Schedule& s,
                              const ResourceLibrary* lib = nullptr) -> std::optional<Violation> {
  using R = Violation::Rule;
  if (s.size() != g.size()) {
    throw ValidationError("schedule covers " + std::to_string(s.size()) + " nodes, graph has " +
                          std::to_string(g.size()));
  }
  auto at = [&](std::size_t v) { return "node " + std::to_string(g.id(v)) + ": "; };
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& slot = s[v];
    if (!slot.assigned()) return Violation{R::Unassigned, g.id(v), 0, at(v) + "not scheduled"};
    if (slot.start < t.asap[v]) {
      return Violation{R::BeforeAsap, g.id(v), 0,
                       at(v) + "starts at " + std::to_string(slot.start) + " before asap " + std::to_string(t.asap[v])};
    }
    if (lib) {
      auto type = lib->find(g.op(v));
      if (!type || !lib->level_for(*type, slot.duration)) {
        return Violation{R::BadDuration, g.id(v), 0,
                         at(v) + "duration " + std::to_string(slot.duration) + " is not a level of '" + g.op(v) + "'"};
      }
    }
  }
  for (const auto& [u, v] : g.edges()) {
    if (s[v].start < s[u].start + s[u].duration) {
      return Violation{R::Precedence, g.id(v), g.id(u),
                       "edge (" + std::to_string(g.id(u)) + "," + std::to_string(g.id(v)) + "): node " +
                           std::to_string(g.id(v)) + " starts before node " + std::to_string(g.id(u)) + " completes"};
    }
  }
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (s[v].finish() > t.alap[v]) {
      return Violation{R::AfterAlap, g.id(v), 0,
                       at(v) + "finishes at " + std::to_string(s[v].finish()) + " after alap " +
                           std::to_string(t.alap[v])};
    }
  }
  if (s.makespan() > t.latency) {
    return Violation{R::Latency, 0, 0,
                     "schedule completes at " + std::to_string(s.makespan()) + " after latency bound " +
                         std::to_string(t.latency)};
  }
  return std::nullopt;
}

}  // namespace dvsched
