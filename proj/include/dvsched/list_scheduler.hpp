#pragma once

#include "budget.hpp"
#include "cost.hpp"
#include "dfg.hpp"
#include "library.hpp"
#include "schedule.hpp"
#include "timing.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace dvsched {

/// Duration choice for a ready operation: the slowest or the fastest level
/// that still fits the deadline and the budget.
enum class Priority { MaxDuration, MinDuration };

inline auto to_string(Priority p) -> std::string_view {
  return p == Priority::MaxDuration ? "max" : "min";
}

/// One-pass list scheduling under a latency bound and a budget.
///
/// Operations are taken in topological order and always start at their
/// earliest precedence-feasible step. Only the duration is chosen. There is no
/// backtracking, so a budget that a smarter placement could meet may still
/// yield nullopt.
inline auto list_schedule(const Dfg& g, const TimingInfo& t, const ResourceLibrary& lib, ArchMode mode,
                          const Budget& budget, Priority priority) -> std::optional<Schedule> {
  CostModel model(g, lib);
  BudgetCheck check(budget, lib);
  Schedule s(g.size());
  for (auto v : topological_indices(g)) {
    int start = t.asap[v];
    for (auto p : g.preds(v)) start = std::max(start, s[p].finish() + 1);

    std::vector<int> durations;
    const auto& levels = model.levels_of(v);
    auto usable = mode == ArchMode::SingleVdd ? std::size_t{1} : levels.size();
    for (std::size_t l = 0; l < usable; ++l) durations.push_back(levels[l].cycles);
    if (priority == Priority::MaxDuration) std::reverse(durations.begin(), durations.end());

    bool placed = false;
    for (auto d : durations) {
      if (start + d - 1 > t.alap[v]) continue;
      s.assign(v, {start, d});
      if (check.admits(evaluate(model, s, mode, t.latency))) {
        placed = true;
        break;
      }
    }
    if (!placed) return std::nullopt;
  }
  return s;
}

}  // namespace dvsched
