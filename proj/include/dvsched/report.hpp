#pragma once

#include "cost.hpp"
#include "library.hpp"
#include "pareto.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dvsched {

/// Fixed six-decimal rendering used by every CSV column holding mW.
inline auto format_power(double mw) -> std::string {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", mw);
  return buf;
}

/// Header of a front CSV: area_total, one area_<type> column per library
/// type, the power columns, latency and completed. `lead` columns go first.
inline auto front_csv_header(const ResourceLibrary& lib, const std::vector<std::string>& lead = {}) -> std::string {
  std::string out;
  for (const auto& col : lead) out += col + ",";
  out += "area_total";
  for (const auto& t : lib.types()) out += ",area_" + t.name;
  out += ",power_total,power_dynamic,power_leakage,power_switching,latency,completed";
  return out;
}

inline auto front_csv_row(const CostTuple& c, bool completed, const std::vector<std::string>& lead = {})
    -> std::string {
  std::string out;
  for (const auto& col : lead) out += col + ",";
  out += std::to_string(c.area_total);
  for (auto a : c.area_by_type) out += "," + std::to_string(a);
  out += "," + format_power(c.power) + "," + format_power(c.breakdown.dynamic) + "," +
         format_power(c.breakdown.leakage) + "," + format_power(c.breakdown.switching) + "," +
         std::to_string(c.latency) + "," + (completed ? "true" : "false");
  return out;
}

/// Rows by ascending area then power, header first.
inline void write_front_csv(std::ostream& os, const ResourceLibrary& lib, const ParetoSet& front, bool completed) {
  os << front_csv_header(lib) << '\n';
  for (const auto& e : front.sorted()) os << front_csv_row(e.cost, completed) << '\n';
}

/// Share of `multi` points that some `fgdvs` point dominates or matches.
struct DominationSummary {
  std::size_t covered = 0;
  std::size_t total = 0;

  [[nodiscard]] auto percent() const -> double {
    return total == 0 ? 100.0 : 100.0 * static_cast<double>(covered) / static_cast<double>(total);
  }
};

inline auto domination_summary(const ParetoSet& fgdvs, const ParetoSet& multi) -> DominationSummary {
  DominationSummary s;
  for (const auto& e : multi.entries()) {
    ++s.total;
    if (fgdvs.covers(e.cost.area_total, e.cost.power)) ++s.covered;
  }
  return s;
}

}  // namespace dvsched
