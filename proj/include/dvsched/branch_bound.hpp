#pragma once

#include "budget.hpp"
#include "completion_bound.hpp"
#include "cost.hpp"
#include "dfg.hpp"
#include "library.hpp"
#include "pareto.hpp"
#include "schedule.hpp"
#include "timing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dvsched {

struct SearchConfig {
  ArchMode mode = ArchMode::Fgdvs;
  Budget budget;
  std::optional<double> time_limit;  // seconds, > 0
  bool emit_first_solution = false;
  bool stop_at_first = false;
  bool dominance_pruning = true;
  // Add a lower bound on the energy of the still-unscheduled operations to
  // the prefix power before pruning, first per node and then under the unit
  // capacity each total area allows. Admissible, so the front is unchanged.
  bool completion_bound = true;
  // Among interchangeable nodes (same type, same predecessors and successors,
  // no other node of the type between their ids) explore only the slot
  // assignments whose starts are non-decreasing in id. Every other assignment
  // is a relabelling with identical cost, so the front is unchanged.
  bool symmetry_breaking = true;
  // Before the main search, spend up to this many expansions on the same tree
  // with durations tried slowest-first, seeding the archive with low-power
  // schedules so the main search prunes earlier. 0 disables. The main search
  // alone still decides the first solution.
  std::uint64_t probe_expansions = 500'000;
  // Recompute every prefix bound from scratch and compare with the
  // incremental one. Slow; for cross-checking only.
  bool verify_incremental = false;
};

struct FirstSolution {
  CostTuple cost;
  Schedule schedule;
  double elapsed = 0.0;
};

struct SearchReport {
  ParetoSet front;
  std::optional<FirstSolution> first;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t budget_prunes = 0;
  std::uint64_t dominance_prunes = 0;
  bool completed = true;
  double elapsed = 0.0;
  // (area, power) of every archive insertion, in discovery order.
  std::vector<std::pair<int, double>> emissions;
};

/// True if a prefix whose cost is bounded below by (area_by_type, power)
/// breaks the budget or is dominated-or-equalled by an archived solution.
/// `area_by_type` and `power` must be lower bounds on every completion.
inline auto bound_exceeded(const CostTuple& partial, const ParetoSet& front, const BudgetCheck& budget) -> bool {
  return budget.exceeded(partial) || front.covers(partial.area_total, partial.power);
}

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const Dfg& g, const TimingInfo& t, const ResourceLibrary& lib, const SearchConfig& cfg)
      : m_graph(g),
        m_timing(t),
        m_model(g, lib),
        m_cfg(cfg),
        m_budget(cfg.budget, lib),
        m_order(topological_indices(g)),
        m_schedule(g.size()),
        m_horizon(static_cast<std::size_t>(t.latency) + 2),
        m_bound(m_model, t, cfg.mode, m_order),
        m_caps(m_budget.area_caps()) {
    if (cfg.time_limit && !(*cfg.time_limit > 0.0)) throw ValidationError("time limit must be positive");
    const auto types = lib.num_types();
    m_level_base.resize(types);
    std::size_t levels = 0;
    for (std::size_t ty = 0; ty < types; ++ty) {
      m_level_base[ty] = levels;
      levels += lib.type(ty).levels.size();
    }
    m_type_count.assign(types * m_horizon, 0);
    m_level_count.assign(levels * m_horizon, 0);
    m_type_peak.assign(types, 0);
    m_level_peak.assign(levels, 0);
    m_partial.area_by_type.assign(types, 0);
    m_partial.latency = t.latency;
    m_usable_levels.resize(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
      m_usable_levels[v] = cfg.mode == ArchMode::SingleVdd ? 1 : m_model.levels_of(v).size();
    }
    m_twin_before.assign(g.size(), g.size());
    if (cfg.symmetry_breaking) find_twins();
    m_power_to_go.assign(g.size() + 1, 0.0);
    if (cfg.completion_bound) {
      for (std::size_t i = 0; i < g.size(); ++i) m_power_to_go[i] = m_bound.suffix_minimum(i);
    }
  }

  auto run() -> SearchReport {
    m_start = std::chrono::steady_clock::now();
    if (m_cfg.probe_expansions > 0 && !m_cfg.stop_at_first) {
      m_probing = true;
      descend(0);
      m_probing = false;
      m_stop = m_timed_out;
    }
    descend(0);
    m_report.completed = !m_timed_out;
    m_report.elapsed = elapsed();
    return std::move(m_report);
  }

 private:
  struct Undo {
    int type_peak;
    int level_peak;
    int area;
    int area_total;
    double dynamic;
    double leakage;
  };

  void find_twins() {
    const auto n = m_graph.size();
    std::vector<std::size_t> last_of_type(m_model.num_types(), n);
    for (std::size_t v = 0; v < n; ++v) {
      auto& prev = last_of_type[m_model.type_of(v)];
      if (prev != n && m_graph.preds(prev) == m_graph.preds(v) && m_graph.succs(prev) == m_graph.succs(v)) {
        m_twin_before[v] = prev;
      }
      prev = v;
    }
  }

  [[nodiscard]] auto elapsed() const -> double {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - m_start).count();
  }

  auto place(std::size_t v, Slot slot, std::size_t level) -> Undo {
    const auto ty = m_model.type_of(v);
    const auto lv = m_level_base[ty] + level;
    const auto& chars = m_model.levels_of(v)[level];
    Undo undo{m_type_peak[ty], m_level_peak[lv], m_partial.area_by_type[ty], m_partial.area_total,
              m_partial.breakdown.dynamic, m_partial.breakdown.leakage};
    for (int c = slot.start; c <= slot.finish(); ++c) {
      m_type_peak[ty] = std::max(m_type_peak[ty], ++m_type_count[ty * m_horizon + c]);
      m_level_peak[lv] = std::max(m_level_peak[lv], ++m_level_count[lv * m_horizon + c]);
    }
    int area = m_type_peak[ty];
    if (m_cfg.mode == ArchMode::MultiVdd) area = undo.area + (m_level_peak[lv] - undo.level_peak);
    m_partial.area_by_type[ty] = area;
    m_partial.area_total += area - undo.area;
    m_partial.breakdown.dynamic += chars.p_dyn * slot.duration;
    if (m_cfg.mode == ArchMode::Fgdvs) {
      m_partial.breakdown.leakage += chars.p_lk * slot.duration;
    } else {
      m_partial.breakdown.leakage += (m_level_peak[lv] - undo.level_peak) * chars.p_lk * m_timing.latency;
    }
    m_partial.power = m_partial.breakdown.dynamic + m_partial.breakdown.leakage;
    m_schedule.assign(v, slot);
    return undo;
  }

  void unplace(std::size_t v, std::size_t level, const Undo& undo) {
    const auto ty = m_model.type_of(v);
    const auto lv = m_level_base[ty] + level;
    const auto slot = m_schedule[v];
    for (int c = slot.start; c <= slot.finish(); ++c) {
      --m_type_count[ty * m_horizon + c];
      --m_level_count[lv * m_horizon + c];
    }
    m_type_peak[ty] = undo.type_peak;
    m_level_peak[lv] = undo.level_peak;
    m_partial.area_by_type[ty] = undo.area;
    m_partial.area_total = undo.area_total;
    m_partial.breakdown.dynamic = undo.dynamic;
    m_partial.breakdown.leakage = undo.leakage;
    m_partial.power = undo.dynamic + undo.leakage;
    m_schedule.clear(v);
  }

  void cross_check() const {
    auto ref = prefix_lower_bound(m_model, m_schedule, m_cfg.mode, m_timing.latency);
    if (ref.area_total != m_partial.area_total || ref.area_by_type != m_partial.area_by_type ||
        std::abs(ref.power - m_partial.power) > power_epsilon) {
      throw std::logic_error("incremental prefix cost diverged from recomputation");
    }
  }

  auto pruned(std::size_t depth) -> bool {
    if (m_cfg.verify_incremental) cross_check();
    const double power = m_partial.power + m_power_to_go[depth + 1];
    if (m_budget.area_exceeded(m_partial.area_by_type) || m_budget.power_exceeded(power)) {
      ++m_report.budget_prunes;
      return true;
    }
    if (m_cfg.dominance_pruning && m_report.front.covers(m_partial.area_total, power)) {
      ++m_report.dominance_prunes;
      return true;
    }
    return m_cfg.completion_bound && depth + 1 < m_order.size() && capacity_pruned(depth);
  }

  // Prunes when every area a completion could reach is either infeasible or
  // already covered by the archive at the bounded power.
  auto capacity_pruned(std::size_t depth) -> bool {
    const auto& bound = m_bound.staircase(depth, m_schedule, m_type_count, m_horizon, m_type_peak, m_caps);
    const double least = m_partial.power + bound.back();
    if (bound.back() == detail::CompletionBound::infinity || m_budget.power_exceeded(least)) {
      ++m_report.budget_prunes;
      return true;
    }
    if (!m_cfg.dominance_pruning) return false;
    for (auto x = static_cast<std::size_t>(m_partial.area_total); x < bound.size(); ++x) {
      if (bound[x] == detail::CompletionBound::infinity) continue;
      if (!m_report.front.covers(static_cast<int>(x), m_partial.power + bound[x])) return false;
    }
    if (bound.size() <= static_cast<std::size_t>(m_partial.area_total) &&
        !m_report.front.covers(m_partial.area_total, least)) {
      return false;
    }
    ++m_report.dominance_prunes;
    return true;
  }

  void complete() {
    auto cost = evaluate(m_model, m_schedule, m_cfg.mode, m_timing.latency);
    if (m_budget.exceeded(cost)) {
      ++m_report.budget_prunes;
      return;
    }
    if (m_cfg.emit_first_solution && !m_report.first && !m_probing) {
      m_report.first = FirstSolution{cost, m_schedule, elapsed()};
      if (m_cfg.stop_at_first) m_stop = true;
    }
    auto area = cost.area_total;
    auto power = cost.power;
    if (m_report.front.insert({std::move(cost), m_schedule})) m_report.emissions.emplace_back(area, power);
  }

  void descend(std::size_t depth) {
    if (depth == m_order.size()) {
      complete();
      return;
    }
    const auto v = m_order[depth];
    int earliest = m_timing.asap[v];
    for (auto p : m_graph.preds(v)) earliest = std::max(earliest, m_schedule[p].finish() + 1);
    if (m_twin_before[v] != m_graph.size()) earliest = std::max(earliest, m_schedule[m_twin_before[v]].start);
    const auto& levels = m_model.levels_of(v);
    for (int start = earliest; start <= m_timing.alap[v]; ++start) {
      for (std::size_t i = 0; i < m_usable_levels[v]; ++i) {
        const auto l = m_probing ? m_usable_levels[v] - 1 - i : i;
        const Slot slot{start, levels[l].cycles};
        if (slot.finish() > m_timing.alap[v]) {
          if (m_probing) continue;
          break;  // levels are ordered by cycles
        }
        if (m_probing && m_report.nodes_expanded >= m_cfg.probe_expansions) m_stop = true;
        if ((++m_report.nodes_expanded & 0x3ff) == 0 && m_cfg.time_limit && elapsed() > *m_cfg.time_limit) {
          m_timed_out = m_stop = true;
        }
        if (m_stop) return;
        auto undo = place(v, slot, l);
        if (!pruned(depth)) descend(depth + 1);
        unplace(v, l, undo);
        if (m_stop) return;
      }
    }
  }

  const Dfg& m_graph;
  const TimingInfo& m_timing;
  CostModel m_model;
  const SearchConfig& m_cfg;
  BudgetCheck m_budget;
  std::vector<std::size_t> m_order;
  Schedule m_schedule;
  std::size_t m_horizon;

  std::vector<std::size_t> m_level_base;
  std::vector<std::size_t> m_usable_levels;
  std::vector<std::size_t> m_twin_before;  // size() when none
  std::vector<int> m_type_count;
  std::vector<int> m_level_count;
  std::vector<int> m_type_peak;
  std::vector<int> m_level_peak;
  CostTuple m_partial;  // prefix cost without switching
  std::vector<double> m_power_to_go;  // indexed by search depth
  detail::CompletionBound m_bound;
  std::vector<int> m_caps;

  SearchReport m_report;
  std::chrono::steady_clock::time_point m_start;
  bool m_stop = false;
  bool m_probing = false;
  bool m_timed_out = false;
};

}  // namespace detail

/// Exact (area, power) pareto front by depth-first branch and bound.
///
/// Nodes are fixed in topological order; each is tried at every start from
/// its earliest precedence-feasible step to its ALAP step and, per start,
/// every duration that finishes by ALAP, fastest first. A prefix is pruned
/// when its lower-bound cost breaks the budget or is covered by the archive.
/// With `completed == false` the front holds the non-dominated subset of what
/// was found before the time limit.
inline auto bb_pareto(const Dfg& g, const TimingInfo& t, const ResourceLibrary& lib, const SearchConfig& cfg)
    -> SearchReport {
  return detail::BranchAndBound(g, t, lib, cfg).run();
}

/// First complete budget-satisfying schedule in search order. Not
/// necessarily pareto-optimal.
inline auto bb_first(const Dfg& g, const TimingInfo& t, const ResourceLibrary& lib, SearchConfig cfg)
    -> std::optional<FirstSolution> {
  cfg.emit_first_solution = true;
  cfg.stop_at_first = true;
  return bb_pareto(g, t, lib, cfg).first;
}

}  // namespace dvsched
