#pragma once

#include "dfg.hpp"
#include "error.hpp"
#include "library.hpp"
#include "schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace dvsched {

/// Absolute tolerance for power equality, mW.
inline constexpr double power_epsilon = 1e-9;

struct PowerBreakdown {
  double dynamic = 0.0;
  double leakage = 0.0;
  double switching = 0.0;

  [[nodiscard]] auto total() const -> double { return dynamic + leakage + switching; }
};

struct CostTuple {
  int area_total = 0;
  std::vector<int> area_by_type;  // indexed like the library's types
  double power = 0.0;
  PowerBreakdown breakdown;
  int latency = 0;
};

/// A Dfg bound to a ResourceLibrary: resolves each node's op type once so the
/// cost functions can run in the search hot path without string lookups.
class CostModel {
 public:
  CostModel(const Dfg& g, const ResourceLibrary& lib) : m_graph(&g), m_lib(&lib) {
    lib.require_types(g);
    m_type.reserve(g.size());
    for (const auto& n : g.nodes()) m_type.push_back(*lib.find(n.op));
  }

  [[nodiscard]] auto graph() const -> const Dfg& { return *m_graph; }
  [[nodiscard]] auto library() const -> const ResourceLibrary& { return *m_lib; }
  [[nodiscard]] auto num_types() const -> std::size_t { return m_lib->num_types(); }
  [[nodiscard]] auto type_of(std::size_t v) const -> std::size_t { return m_type[v]; }
  [[nodiscard]] auto levels_of(std::size_t v) const -> const std::vector<VoltageLevel>& {
    return m_lib->type(m_type[v]).levels;
  }

  /// Level index for node v running `duration` cycles; throws if the library
  /// has no such (type, duration) pair.
  [[nodiscard]] auto level_of(std::size_t v, int duration) const -> std::size_t {
    auto l = m_lib->level_for(m_type[v], duration);
    if (!l) {
      throw ValidationError("no level of '" + m_graph->op(v) + "' takes " + std::to_string(duration) +
                            " cycles (node " + std::to_string(m_graph->id(v)) + ")");
    }
    return *l;
  }

 private:
  const Dfg* m_graph;
  const ResourceLibrary* m_lib;
  std::vector<std::size_t> m_type;
};

namespace detail {

/// Peak concurrency per type and per (type, level) over all c-steps.
struct Occupancy {
  std::vector<int> type_peak;
  std::vector<std::vector<int>> level_peak;
};

inline auto occupancy(const CostModel& m, const Schedule& s) -> Occupancy {
  const auto horizon = static_cast<std::size_t>(s.makespan()) + 1;
  Occupancy occ;
  occ.type_peak.assign(m.num_types(), 0);
  occ.level_peak.resize(m.num_types());
  std::vector<std::vector<int>> by_type(m.num_types());
  std::vector<std::vector<std::vector<int>>> by_level(m.num_types());
  for (std::size_t t = 0; t < m.num_types(); ++t) {
    auto nl = m.library().type(t).levels.size();
    occ.level_peak[t].assign(nl, 0);
  }
  for (std::size_t v = 0; v < s.size(); ++v) {
    const auto& slot = s[v];
    if (!slot.assigned()) continue;
    auto t = m.type_of(v);
    auto l = m.level_of(v, slot.duration);
    if (by_type[t].empty()) {
      by_type[t].assign(horizon, 0);
      by_level[t].assign(occ.level_peak[t].size(), {});
    }
    if (by_level[t][l].empty()) by_level[t][l].assign(horizon, 0);
    for (int c = slot.start; c <= slot.finish(); ++c) {
      occ.type_peak[t] = std::max(occ.type_peak[t], ++by_type[t][c]);
      occ.level_peak[t][l] = std::max(occ.level_peak[t][l], ++by_level[t][l][c]);
    }
  }
  return occ;
}

inline void require_single_vdd(const CostModel& m, const Schedule& s) {
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (s[v].assigned() && m.level_of(v, s[v].duration) != 0) {
      throw ValidationError("single-vdd schedule uses a non-fastest duration on node " +
                            std::to_string(m.graph().id(v)));
    }
  }
}

inline auto area_from(const Occupancy& occ, ArchMode mode) -> std::pair<int, std::vector<int>> {
  std::vector<int> by_type(occ.type_peak.size(), 0);
  for (std::size_t t = 0; t < by_type.size(); ++t) {
    if (mode == ArchMode::MultiVdd) {
      by_type[t] = std::accumulate(occ.level_peak[t].begin(), occ.level_peak[t].end(), 0);
    } else {
      by_type[t] = occ.type_peak[t];
    }
  }
  return {std::accumulate(by_type.begin(), by_type.end(), 0), std::move(by_type)};
}

// Idle Single/Multi-Vdd instances stay powered for the whole latency bound;
// FGDVS units are power-gated when idle and leak only while busy.
inline auto leakage_from(const CostModel& m, const Schedule& s, const Occupancy& occ, ArchMode mode, int latency)
    -> double {
  double leak = 0.0;
  if (mode == ArchMode::Fgdvs) {
    for (std::size_t v = 0; v < s.size(); ++v) {
      if (!s[v].assigned()) continue;
      leak += m.levels_of(v)[m.level_of(v, s[v].duration)].p_lk * s[v].duration;
    }
    return leak;
  }
  for (std::size_t t = 0; t < m.num_types(); ++t) {
    const auto& levels = m.library().type(t).levels;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      leak += occ.level_peak[t][l] * levels[l].p_lk * latency;
    }
  }
  return leak;
}

inline auto dynamic_of(const CostModel& m, const Schedule& s) -> double {
  double dyn = 0.0;
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (!s[v].assigned()) continue;
    dyn += m.levels_of(v)[m.level_of(v, s[v].duration)].p_dyn * s[v].duration;
  }
  return dyn;
}

}  // namespace detail

/// Binds each operation to a functional-unit instance and returns the
/// voltage-switching charge (FGDVS only).
///
/// Operations are bound per type in ascending (start, node id) order onto at
/// most `type_peak` instances. Preference: a free instance whose last use ran
/// at the same level, then a never-used instance, then the lowest free
/// instance. Only the last case charges the op's p_sw.
inline auto fgdvs_switching(const CostModel& m, const Schedule& s, const std::vector<int>& type_peak) -> double {
  struct Unit {
    int busy_until = 0;
    std::size_t level = 0;
  };
  std::vector<std::vector<std::size_t>> ops(m.num_types());
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (s[v].assigned()) ops[m.type_of(v)].push_back(v);
  }
  double charge = 0.0;
  for (std::size_t t = 0; t < m.num_types(); ++t) {
    auto& list = ops[t];
    std::sort(list.begin(), list.end(), [&](auto a, auto b) {
      return s[a].start != s[b].start ? s[a].start < s[b].start : a < b;
    });
    std::vector<Unit> units;
    for (auto v : list) {
      const auto& slot = s[v];
      auto level = m.level_of(v, slot.duration);
      std::size_t pick = units.size();
      std::size_t first_free = units.size();
      for (std::size_t u = 0; u < units.size(); ++u) {
        if (units[u].busy_until >= slot.start) continue;
        if (first_free == units.size()) first_free = u;
        if (units[u].level == level) {
          pick = u;
          break;
        }
      }
      if (pick == units.size()) {
        if (static_cast<int>(units.size()) < type_peak[t]) {
          units.push_back({});
        } else if (first_free < units.size()) {
          pick = first_free;
          charge += m.levels_of(v)[level].p_sw;
        } else {
          throw std::logic_error("binding exceeded the peak instance count");
        }
      }
      units[pick] = {slot.finish(), level};
    }
  }
  return charge;
}

/// Area and power of a (possibly partial) schedule under `mode`.
/// `latency` is the bound T that always-on instances leak for.
inline auto evaluate(const CostModel& m, const Schedule& s, ArchMode mode, int latency) -> CostTuple {
  if (mode == ArchMode::SingleVdd) detail::require_single_vdd(m, s);
  auto occ = detail::occupancy(m, s);
  CostTuple c;
  std::tie(c.area_total, c.area_by_type) = detail::area_from(occ, mode);
  c.breakdown.dynamic = detail::dynamic_of(m, s);
  c.breakdown.leakage = detail::leakage_from(m, s, occ, mode, latency);
  c.breakdown.switching = mode == ArchMode::Fgdvs ? fgdvs_switching(m, s, occ.type_peak) : 0.0;
  c.power = c.breakdown.total();
  c.latency = latency;
  return c;
}

inline auto area_of(const CostModel& m, const Schedule& s, ArchMode mode) -> std::pair<int, std::vector<int>> {
  if (mode == ArchMode::SingleVdd) detail::require_single_vdd(m, s);
  return detail::area_from(detail::occupancy(m, s), mode);
}

inline auto power_of(const CostModel& m, const Schedule& s, ArchMode mode, int latency) -> PowerBreakdown {
  return evaluate(m, s, mode, latency).breakdown;
}

/// Cost of a search prefix with the switching term dropped.
///
/// Area, dynamic and leakage never decrease when operations are added, so
/// this is a lower bound on the cost of every completion. FGDVS switching is
/// not monotone: adding an op can raise the peak instance count and let an
/// earlier op bind to a fresh unit instead of paying a switch.
inline auto prefix_lower_bound(const CostModel& m, const Schedule& s, ArchMode mode, int latency) -> CostTuple {
  if (mode == ArchMode::SingleVdd) detail::require_single_vdd(m, s);
  auto occ = detail::occupancy(m, s);
  CostTuple c;
  std::tie(c.area_total, c.area_by_type) = detail::area_from(occ, mode);
  c.breakdown.dynamic = detail::dynamic_of(m, s);
  c.breakdown.leakage = detail::leakage_from(m, s, occ, mode, latency);
  c.power = c.breakdown.total();
  c.latency = latency;
  return c;
}

/// Pareto dominance on (area, power): no worse in both, strictly better in one.
inline auto dominates(int area1, double power1, int area2, double power2) -> bool {
  bool no_worse = area1 <= area2 && power1 <= power2 + power_epsilon;
  bool better = area1 < area2 || power1 < power2 - power_epsilon;
  return no_worse && better;
}

inline auto dominates(const CostTuple& a, const CostTuple& b) -> bool {
  return dominates(a.area_total, a.power, b.area_total, b.power);
}

inline auto same_cost(int area1, double power1, int area2, double power2) -> bool {
  return area1 == area2 && std::abs(power1 - power2) <= power_epsilon;
}

inline auto same_cost(const CostTuple& a, const CostTuple& b) -> bool {
  return same_cost(a.area_total, a.power, b.area_total, b.power);
}

/// Dominance on (area, power, latency).
inline auto dominates3(const CostTuple& a, const CostTuple& b) -> bool {
  bool no_worse = a.area_total <= b.area_total && a.power <= b.power + power_epsilon && a.latency <= b.latency;
  bool better = a.area_total < b.area_total || a.power < b.power - power_epsilon || a.latency < b.latency;
  return no_worse && better;
}

}  // namespace dvsched
