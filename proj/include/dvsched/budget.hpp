#pragma once

#include "cost.hpp"
#include "error.hpp"
#include "library.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dvsched {

/// User constraint on a schedule: per-type instance caps, a power cap, or none.
/// Types missing from an area budget are unconstrained.
struct Budget {
  enum class Kind { None, Area, Power };

  Kind kind = Kind::None;
  std::map<std::string, int> area_by_type;
  double power_cap = 0.0;

  static auto none() -> Budget { return {}; }

  static auto area(std::map<std::string, int> caps) -> Budget {
    for (const auto& [name, cap] : caps) {
      if (cap < 0) throw ValidationError("area budget for '" + name + "' is negative");
    }
    return {Kind::Area, std::move(caps), 0.0};
  }

  static auto power(double cap) -> Budget {
    if (!(cap >= 0.0)) throw ValidationError("power budget must be non-negative");
    return {Kind::Power, {}, cap};
  }
};

/// A Budget with type names resolved against a library; -1 = no cap.
class BudgetCheck {
 public:
  BudgetCheck(const Budget& b, const ResourceLibrary& lib) : m_kind(b.kind), m_power_cap(b.power_cap) {
    m_area_caps.assign(lib.num_types(), -1);
    for (const auto& [name, cap] : b.area_by_type) {
      auto t = lib.find(name);
      if (!t) throw ValidationError("area budget names unknown op type '" + name + "'");
      m_area_caps[*t] = cap;
    }
  }

  [[nodiscard]] auto kind() const -> Budget::Kind { return m_kind; }

  /// Per-type instance caps by library index; -1 where uncapped.
  [[nodiscard]] auto area_caps() const -> std::vector<int> {
    return m_kind == Budget::Kind::Area ? m_area_caps : std::vector<int>(m_area_caps.size(), -1);
  }

  [[nodiscard]] auto power_cap() const -> std::optional<double> {
    if (m_kind != Budget::Kind::Power) return std::nullopt;
    return m_power_cap;
  }

  [[nodiscard]] auto area_exceeded(const std::vector<int>& area_by_type) const -> bool {
    if (m_kind != Budget::Kind::Area) return false;
    for (std::size_t t = 0; t < m_area_caps.size(); ++t) {
      if (m_area_caps[t] >= 0 && area_by_type[t] > m_area_caps[t]) return true;
    }
    return false;
  }

  [[nodiscard]] auto power_exceeded(double power) const -> bool {
    return m_kind == Budget::Kind::Power && power > m_power_cap + power_epsilon;
  }

  [[nodiscard]] auto exceeded(const CostTuple& c) const -> bool {
    return area_exceeded(c.area_by_type) || power_exceeded(c.power);
  }

  [[nodiscard]] auto admits(const CostTuple& c) const -> bool { return !exceeded(c); }

 private:
  Budget::Kind m_kind;
  double m_power_cap;
  std::vector<int> m_area_caps;
};

/// Parses "mul=3,add=2,comp=1".
inline auto parse_area_budget(std::string_view text) -> Budget {
  std::map<std::string, int> caps;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto item = text.substr(pos, comma - pos);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError(0, "area budget item '" + std::string(item) + "' is not <type>=<count>");
    }
    auto name = std::string(item.substr(0, eq));
    if (!caps.emplace(name, detail::parse_int(item.substr(eq + 1), 0)).second) {
      throw ParseError(0, "area budget lists '" + name + "' twice");
    }
    pos = comma + 1;
  }
  if (caps.empty()) throw ParseError(0, "empty area budget");
  return Budget::area(std::move(caps));
}

}  // namespace dvsched
