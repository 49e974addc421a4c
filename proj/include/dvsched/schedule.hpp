#pragma once

#include "dfg.hpp"
#include "error.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace dvsched {

/// Allocation of one operation: 1-based start c-step and duration in c-steps.
struct Slot {
  int start = 0;
  int duration = 0;

  [[nodiscard]] constexpr auto finish() const -> int { return start + duration - 1; }
  [[nodiscard]] constexpr auto assigned() const -> bool { return duration > 0; }
  friend constexpr auto operator==(const Slot&, const Slot&) -> bool = default;
};

/// node index -> Slot. Unassigned nodes (duration 0) contribute nothing to
/// any cost, which lets the same type describe a search prefix.
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::size_t nodes) : m_slots(nodes) {}

  [[nodiscard]] auto size() const -> std::size_t { return m_slots.size(); }
  [[nodiscard]] auto operator[](std::size_t i) const -> const Slot& { return m_slots[i]; }
  [[nodiscard]] auto slots() const -> const std::vector<Slot>& { return m_slots; }

  void assign(std::size_t i, Slot slot) { m_slots[i] = slot; }
  void clear(std::size_t i) { m_slots[i] = Slot{}; }

  [[nodiscard]] auto complete() const -> bool {
    for (const auto& s : m_slots) {
      if (!s.assigned()) return false;
    }
    return true;
  }

  /// Last occupied c-step (0 for an empty schedule).
  [[nodiscard]] auto makespan() const -> int {
    int last = 0;
    for (const auto& s : m_slots) {
      if (s.assigned() && s.finish() > last) last = s.finish();
    }
    return last;
  }

  friend auto operator==(const Schedule&, const Schedule&) -> bool = default;

 private:
  std::vector<Slot> m_slots;
};

struct IdSlot {
  int node = 0;
  int start = 0;
  int duration = 0;
};

/// Builds an index-addressed schedule from (node id, start, duration) rows.
inline auto schedule_from_ids(const Dfg& g, const std::vector<IdSlot>& rows) -> Schedule {
  Schedule s(g.size());
  for (const auto& r : rows) {
    auto idx = g.index_of(r.node);
    if (!idx) throw ValidationError("schedule references unknown node id " + std::to_string(r.node));
    if (s[*idx].assigned()) throw ValidationError("node " + std::to_string(r.node) + " scheduled twice");
    if (r.duration < 1) throw ValidationError("node " + std::to_string(r.node) + " has duration < 1");
    s.assign(*idx, {r.start, r.duration});
  }
  return s;
}

}  // namespace dvsched
