#pragma once

#include "cost.hpp"
#include "library.hpp"
#include "schedule.hpp"
#include "timing.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace dvsched::detail {

/// Lower bound on the power still to be spent by the unscheduled suffix of a
/// search order, as a function of the total area the completion may use.
///
/// For each op type and each time window [lo, hi], the remaining ops whose
/// feasible window lies inside it must share c * (hi - lo + 1) unit-cycles,
/// minus whatever the scheduled prefix already occupies there. Choosing
/// durations to minimise energy under that capacity is a knapsack; its LP
/// relaxation over the lower convex hull of each type's (cycles, energy)
/// points is solved greedily. The per-type bounds are then combined over all
/// splits of a total area across types.
///
/// Independently of area, the graph is covered by disjoint paths once; the
/// unscheduled part of each path must fit its window end to end, and the
/// least energy for that is found exactly by a small dynamic program. The sum
/// over paths bounds the suffix at any area.
///
/// Only dynamic energy (plus busy-cycle leakage under Fgdvs) is counted, so
/// the result never exceeds the true cost of any completion.
class CompletionBound {
 public:
  static constexpr double infinity = std::numeric_limits<double>::infinity();

  CompletionBound(const CostModel& m, const TimingInfo& t, ArchMode mode, const std::vector<std::size_t>& order)
      : m_model(m), m_timing(t), m_order(order), m_pos(order.size()), m_est(order.size()), m_class(order.size()) {
    for (std::size_t i = 0; i < order.size(); ++i) m_pos[order[i]] = i;
    const auto types = m.num_types();
    m_types.resize(types);
    for (std::size_t ty = 0; ty < types; ++ty) {
      auto& info = m_types[ty];
      const auto& levels = m.library().type(ty).levels;
      auto usable = mode == ArchMode::SingleVdd ? std::size_t{1} : levels.size();
      for (std::size_t l = 0; l < usable; ++l) {
        double rate = levels[l].p_dyn + (mode == ArchMode::Fgdvs ? levels[l].p_lk : 0.0);
        info.cycles.push_back(levels[l].cycles);
        info.energy.push_back(rate * levels[l].cycles);
      }
      info.hull.resize(usable + 1);
      info.emin.assign(usable + 1, infinity);
      for (std::size_t u = 1; u <= usable; ++u) build_hull(info, u);
    }
    for (std::size_t v = 0; v < order.size(); ++v) m_node_type.push_back(m.type_of(v));
    build_chains();
    m_static_suffix.assign(order.size() + 1, 0.0);
    for (std::size_t v = 0; v < order.size(); ++v) m_est[v] = t.asap[v];
    for (std::size_t depth = 0; depth < order.size(); ++depth) {
      m_static_suffix[depth] = chain_bound(static_cast<std::ptrdiff_t>(depth) - 1);
    }
  }

  /// Path-cover bound for the nodes at search positions >= `first`, using
  /// ASAP as every earliest start. Cheap; does not depend on the prefix.
  [[nodiscard]] auto suffix_minimum(std::size_t first) const -> double { return m_static_suffix[first]; }

  /// Bound for the suffix after search position `depth`, given the prefix's
  /// per-step type occupancy `type_count` (row-major, `horizon` columns) and
  /// per-type peaks. `caps[ty] < 0` means uncapped. Returns G where G[x] is a
  /// lower bound on the suffix energy of any completion whose total area is at
  /// most x, non-increasing in x; infinity marks areas no completion can meet.
  /// The last entry holds for every larger area too.
  auto staircase(std::size_t depth, const Schedule& s, const std::vector<int>& type_count, std::size_t horizon,
                 const std::vector<int>& type_peak, const std::vector<int>& caps) -> const std::vector<double>& {
    compute_windows(depth, s);
    const double paths = chain_bound(static_cast<std::ptrdiff_t>(depth));
    m_total.assign(1, 0.0);
    for (std::size_t ty = 0; ty < m_types.size(); ++ty) {
      type_curve(ty, type_count, horizon, type_peak[ty], caps[ty]);
      convolve();
      if (m_total.empty()) break;
    }
    if (m_total.empty() || paths == infinity) m_total.assign(1, infinity);
    for (std::size_t x = 1; x < m_total.size(); ++x) m_total[x] = std::min(m_total[x], m_total[x - 1]);
    for (auto& e : m_total) e = std::max(e, paths);
    return m_total;
  }

 private:
  struct Segment {
    double length;  // cycles
    double saving;  // energy saved per extra cycle
  };

  struct TypeInfo {
    std::vector<int> cycles;
    std::vector<double> energy;
    std::vector<std::vector<Segment>> hull;  // by number of usable levels
    std::vector<double> emin;
  };

  struct Op {
    int est;
    int alap;
    std::size_t cls;
  };

  static auto usable_levels(const TypeInfo& info, int window) -> std::size_t {
    std::size_t u = 0;
    while (u < info.cycles.size() && info.cycles[u] <= window) ++u;
    return u;
  }

  // Descending part of the lower convex hull of the first u (cycles, energy)
  // points, walked from the fastest level.
  static void build_hull(TypeInfo& info, std::size_t u) {
    std::size_t at = 0;
    double best = info.energy[0];
    for (std::size_t l = 1; l < u; ++l) best = std::min(best, info.energy[l]);
    info.emin[u] = best;
    while (true) {
      std::size_t next = at;
      double rate = 0.0;
      for (std::size_t j = at + 1; j < u; ++j) {
        double r = (info.energy[at] - info.energy[j]) / (info.cycles[j] - info.cycles[at]);
        if (r > 0.0 && r >= rate) {
          rate = r;
          next = j;
        }
      }
      if (next == at) break;
      info.hull[u].push_back({static_cast<double>(info.cycles[next] - info.cycles[at]), rate});
      at = next;
    }
  }

  // Greedy disjoint path cover: repeatedly take the longest path (in nodes)
  // through still-uncovered nodes, ties to the smaller ids.
  void build_chains() {
    const auto& g = m_model.graph();
    const auto n = g.size();
    std::vector<bool> covered(n, false);
    std::vector<int> len(n);
    std::vector<std::size_t> next(n);
    for (std::size_t left = n; left > 0;) {
      for (auto i = n; i-- > 0;) {
        auto v = m_order[i];
        if (covered[v]) continue;
        len[v] = 1;
        next[v] = v;
        for (auto q : g.succs(v)) {
          if (!covered[q] && (len[q] + 1 > len[v] || (len[q] + 1 == len[v] && q < next[v]))) {
            len[v] = len[q] + 1;
            next[v] = q;
          }
        }
      }
      std::size_t head = n;
      for (auto v : m_order) {
        if (!covered[v] && (head == n || len[v] > len[head])) head = v;
      }
      std::vector<std::size_t> chain;
      for (auto v = head;; v = next[v]) {
        chain.push_back(v);
        covered[v] = true;
        if (next[v] == v) break;
      }
      left -= chain.size();
      m_chains.push_back(std::move(chain));
    }
  }

  // Sum over cover paths of the least energy their unscheduled tails need,
  // given m_est for every node after search position `depth`.
  auto chain_bound(std::ptrdiff_t depth) -> double {
    double total = 0.0;
    const auto horizon = static_cast<std::size_t>(m_timing.latency) + 1;
    for (const auto& chain : m_chains) {
      std::size_t i = 0;
      while (i < chain.size() && static_cast<std::ptrdiff_t>(m_pos[chain[i]]) <= depth) ++i;
      if (i == chain.size()) continue;
      // m_reach[t]: least energy with the previous node finished by step t.
      m_reach.assign(horizon, 0.0);
      for (; i < chain.size(); ++i) {
        const auto v = chain[i];
        const auto& info = m_types[m_node_type[v]];
        m_done.assign(horizon, infinity);
        for (int start = m_est[v]; start <= m_timing.alap[v]; ++start) {
          const double before = m_reach[start - 1];
          if (before == infinity) continue;
          for (std::size_t l = 0; l < info.cycles.size(); ++l) {
            const int finish = start + info.cycles[l] - 1;
            if (finish > m_timing.alap[v]) break;
            m_done[finish] = std::min(m_done[finish], before + info.energy[l]);
          }
        }
        for (std::size_t t = 1; t < horizon; ++t) m_done[t] = std::min(m_done[t], m_done[t - 1]);
        m_reach.swap(m_done);
      }
      if (m_reach.back() == infinity) return infinity;
      total += m_reach.back();
    }
    return total;
  }

  void compute_windows(std::size_t depth, const Schedule& s) {
    const auto& g = m_model.graph();
    for (auto i = depth + 1; i < m_order.size(); ++i) {
      auto v = m_order[i];
      int est = m_timing.asap[v];
      for (auto p : g.preds(v)) est = std::max(est, m_pos[p] <= depth ? s[p].finish() + 1 : m_est[p] + 1);
      m_est[v] = est;
      m_class[v] = usable_levels(m_types[m_node_type[v]], m_timing.alap[v] - est + 1);
    }
    m_remaining.assign(m_types.size(), {});
    for (auto i = depth + 1; i < m_order.size(); ++i) {
      auto v = m_order[i];
      m_remaining[m_node_type[v]].push_back({m_est[v], m_timing.alap[v], m_class[v]});
    }
  }

  // m_curve[c] for c in [peak, cmax]: bound on the type's suffix energy with
  // at most c concurrent units. Entries below the peak are infinite.
  void type_curve(std::size_t ty, const std::vector<int>& type_count, std::size_t horizon, int peak, int cap) {
    const auto& ops = m_remaining[ty];
    const auto& info = m_types[ty];
    int cmax = peak + static_cast<int>(ops.size());
    if (cap >= 0) cmax = std::min(cmax, cap);
    m_curve.assign(static_cast<std::size_t>(std::max(cmax, peak) + 1), infinity);
    if (cmax < peak) {
      m_curve.clear();
      return;
    }
    double free_total = 0.0;
    for (const auto& op : ops) {
      if (op.cls == 0) {
        m_curve.clear();
        return;
      }
      free_total += info.emin[op.cls];
    }
    for (int c = peak; c <= cmax; ++c) m_curve[c] = free_total;
    if (ops.empty()) return;

    m_los.clear();
    m_his.clear();
    for (const auto& op : ops) {
      m_los.push_back(op.est);
      m_his.push_back(op.alap);
    }
    std::sort(m_los.begin(), m_los.end());
    m_los.erase(std::unique(m_los.begin(), m_los.end()), m_los.end());
    std::sort(m_his.begin(), m_his.end());
    m_his.erase(std::unique(m_his.begin(), m_his.end()), m_his.end());

    const int* counts = type_count.data() + ty * horizon;
    for (auto lo : m_los) {
      for (auto hi : m_his) {
        if (hi < lo) continue;
        int inside = 0;
        double inside_free = 0.0;
        m_class_count.assign(info.cycles.size() + 1, 0);
        for (const auto& op : ops) {
          if (op.est >= lo && op.alap <= hi) {
            ++inside;
            inside_free += info.emin[op.cls];
            ++m_class_count[op.cls];
          }
        }
        if (inside == 0) continue;
        int used = 0;
        for (int step = lo; step <= hi; ++step) used += counts[step];
        m_segments.clear();
        for (std::size_t u = 1; u < m_class_count.size(); ++u) {
          if (m_class_count[u] == 0) continue;
          for (const auto& seg : info.hull[u]) m_segments.push_back({seg.length * m_class_count[u], seg.saving});
        }
        std::sort(m_segments.begin(), m_segments.end(),
                  [](const Segment& a, const Segment& b) { return a.saving > b.saving; });
        const double outside = free_total - inside_free;
        const double base = inside * info.energy[0];
        const int need = inside * info.cycles[0];
        const int span = hi - lo + 1;
        for (int c = peak; c <= cmax; ++c) {
          int room = c * span - used - need;
          double bound = infinity;
          if (room >= 0) {
            double rest = room;
            double e = base;
            for (const auto& seg : m_segments) {
              if (rest <= 0.0) break;
              double take = std::min(rest, seg.length);
              e -= take * seg.saving;
              rest -= take;
            }
            bound = outside + std::max(e, inside_free);
          }
          m_curve[c] = std::max(m_curve[c], bound);
        }
      }
    }
  }

  // m_total <- min-plus convolution of m_total with m_curve.
  void convolve() {
    if (m_curve.empty()) {
      m_total.clear();
      return;
    }
    m_next.assign(m_total.size() + m_curve.size() - 1, infinity);
    for (std::size_t x = 0; x < m_total.size(); ++x) {
      if (m_total[x] == infinity) continue;
      for (std::size_t c = 0; c < m_curve.size(); ++c) {
        if (m_curve[c] == infinity) continue;
        m_next[x + c] = std::min(m_next[x + c], m_total[x] + m_curve[c]);
      }
    }
    m_total.swap(m_next);
  }

  const CostModel& m_model;
  const TimingInfo& m_timing;
  const std::vector<std::size_t>& m_order;
  std::vector<std::size_t> m_pos;
  std::vector<std::size_t> m_node_type;
  std::vector<TypeInfo> m_types;

  std::vector<std::vector<std::size_t>> m_chains;
  std::vector<double> m_static_suffix;
  std::vector<double> m_reach;
  std::vector<double> m_done;

  std::vector<int> m_est;
  std::vector<std::size_t> m_class;
  std::vector<std::vector<Op>> m_remaining;
  std::vector<double> m_curve;
  std::vector<double> m_total;
  std::vector<double> m_next;
  std::vector<int> m_los;
  std::vector<int> m_his;
  std::vector<int> m_class_count;
  std::vector<Segment> m_segments;
};

}  // namespace dvsched::detail
