#pragma once

#include "cost.hpp"
#include "schedule.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

namespace dvsched {

struct ParetoEntry {
  CostTuple cost;
  Schedule schedule;
};

/// Archive of mutually non-dominated (cost, schedule) pairs, at most one per
/// distinct (area, power) point. The first schedule found for a point is kept.
class ParetoSet {
 public:
  /// Rejects `cand` if a member dominates or equals it; otherwise evicts the
  /// members it dominates and adds it.
  auto insert(ParetoEntry cand) -> bool {
    if (covers(cand.cost.area_total, cand.cost.power)) return false;
    std::erase_if(m_entries, [&](const ParetoEntry& e) { return dominates(cand.cost, e.cost); });
    m_entries.push_back(std::move(cand));
    return true;
  }

  /// True if some member dominates or equals (area, power).
  [[nodiscard]] auto covers(int area, double power) const -> bool {
    for (const auto& e : m_entries) {
      if (same_cost(e.cost.area_total, e.cost.power, area, power) ||
          dominates(e.cost.area_total, e.cost.power, area, power)) {
        return true;
      }
    }
    return false;
  }

  [[nodiscard]] auto size() const -> std::size_t { return m_entries.size(); }
  [[nodiscard]] auto empty() const -> bool { return m_entries.empty(); }

  /// Members in insertion order.
  [[nodiscard]] auto entries() const -> const std::vector<ParetoEntry>& { return m_entries; }

  /// Members by ascending area, then power.
  [[nodiscard]] auto sorted() const -> std::vector<ParetoEntry> {
    auto out = m_entries;
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.cost.area_total != b.cost.area_total ? a.cost.area_total < b.cost.area_total
                                                    : a.cost.power < b.cost.power;
    });
    return out;
  }

 private:
  std::vector<ParetoEntry> m_entries;
};

inline auto pareto_insert(ParetoSet& set, ParetoEntry cand) -> bool { return set.insert(std::move(cand)); }

/// Same (area, power) point sets, power compared within power_epsilon.
inline auto same_front(const ParetoSet& a, const ParetoSet& b) -> bool {
  if (a.size() != b.size()) return false;
  auto sa = a.sorted();
  auto sb = b.sorted();
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (!same_cost(sa[i].cost, sb[i].cost)) return false;
  }
  return true;
}

/// Non-dominated subset under (area, power, latency); duplicates keep the first.
inline auto nondominated3(const std::vector<CostTuple>& points) -> std::vector<CostTuple> {
  std::vector<CostTuple> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < points.size() && keep; ++j) {
      if (j == i) continue;
      if (dominates3(points[j], points[i])) keep = false;
      if (j < i && same_cost(points[j], points[i]) && points[j].latency == points[i].latency) keep = false;
    }
    if (keep) out.push_back(points[i]);
  }
  return out;
}

}  // namespace dvsched
