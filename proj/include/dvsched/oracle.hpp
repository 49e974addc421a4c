#pragma once

#include "budget.hpp"
#include "cost.hpp"
#include "dfg.hpp"
#include "error.hpp"
#include "library.hpp"
#include "pareto.hpp"
#include "schedule.hpp"
#include "timing.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dvsched {

struct EnumerationBound {
  std::size_t max_nodes = 8;
  std::uint64_t max_states = 10'000'000;
};

namespace detail {

// Every (start, duration) pair that fits a node's own [asap, alap] window.
inline auto window_slots(const Dfg& g, const TimingInfo& t, const ResourceLibrary& lib, std::size_t v)
    -> std::vector<Slot> {
  std::vector<Slot> out;
  const auto& levels = lib.type(*lib.find(g.op(v))).levels;
  for (int start = t.asap[v]; start <= t.alap[v]; ++start) {
    for (const auto& lv : levels) {
      if (start + lv.cycles - 1 <= t.alap[v]) out.push_back({start, lv.cycles});
    }
  }
  return out;
}

}  // namespace detail

/// Product over nodes of the number of window-feasible (start, duration)
/// pairs; an upper bound on the number of valid schedules. Saturates.
inline auto state_space_estimate(const Dfg& g, const TimingInfo& t, const ResourceLibrary& lib) -> std::uint64_t {
  lib.require_types(g);
  std::uint64_t product = 1;
  for (std::size_t v = 0; v < g.size(); ++v) {
    auto n = static_cast<std::uint64_t>(detail::window_slots(g, t, lib, v).size());
    if (n != 0 && product > std::numeric_limits<std::uint64_t>::max() / n) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    product *= n;
  }
  return product;
}

/// Calls `visit` once for every schedule that passes validate_schedule.
///
/// Candidates are the cartesian product of each node's window slots; a
/// candidate is extended node by node (ascending id) and abandoned only when
/// an edge between already-placed nodes is violated. No cost information is
/// consulted.
inline void enumerate_schedules(const Dfg& g, const TimingInfo& t, const ResourceLibrary& lib,
                                const std::function<void(const Schedule&)>& visit,
                                const EnumerationBound& bound = {}) {
  if (g.size() > bound.max_nodes) {
    throw CapExceeded(0, "oracle refuses " + std::to_string(g.size()) + " nodes (limit " +
                             std::to_string(bound.max_nodes) + ")");
  }
  auto estimate = state_space_estimate(g, t, lib);
  if (estimate > bound.max_states) {
    throw CapExceeded(estimate, "oracle state-space estimate " + std::to_string(estimate) + " exceeds cap " +
                                    std::to_string(bound.max_states));
  }
  std::vector<std::vector<Slot>> choices(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) choices[v] = detail::window_slots(g, t, lib, v);

  Schedule s(g.size());
  std::function<void(std::size_t)> rec = [&](std::size_t v) {
    if (v == g.size()) {
      if (validate_schedule(g, t, s, &lib)) throw std::logic_error("oracle produced an invalid schedule");
      visit(s);
      return;
    }
    for (const auto& slot : choices[v]) {
      s.assign(v, slot);
      bool ok = true;
      for (auto p : g.preds(v)) {
        if (p < v && slot.start < s[p].start + s[p].duration) ok = false;
      }
      for (auto q : g.succs(v)) {
        if (q < v && s[q].start < slot.start + slot.duration) ok = false;
      }
      if (ok) rec(v + 1);
    }
    s.clear(v);
  };
  rec(0);
}

/// Exact front by exhaustion: every valid schedule that meets the budget,
/// costed and folded through the archive.
inline auto oracle_front(const Dfg& g, const TimingInfo& t, const ResourceLibrary& lib, ArchMode mode,
                         const Budget& budget, const EnumerationBound& bound = {}) -> ParetoSet {
  CostModel model(g, lib);
  BudgetCheck check(budget, lib);
  ParetoSet front;
  enumerate_schedules(
      g, t, lib,
      [&](const Schedule& s) {
        if (mode == ArchMode::SingleVdd) {
          for (std::size_t v = 0; v < s.size(); ++v) {
            if (model.level_of(v, s[v].duration) != 0) return;
          }
        }
        auto cost = evaluate(model, s, mode, t.latency);
        if (check.admits(cost)) front.insert({std::move(cost), s});
      },
      bound);
  return front;
}

}  // namespace dvsched
