#pragma once

#include "dfg.hpp"
#include "error.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace dvsched {

/// One operating point of a functional unit. Powers are per c-step in mW,
/// except p_sw which is charged once per voltage-switch event.
struct VoltageLevel {
  double vdd = 1.0;
  int cycles = 1;
  double p_dyn = 0.0;
  double p_lk = 0.0;
  double p_sw = 0.0;
};

struct OpTypeLevels {
  std::string name;
  std::vector<VoltageLevel> levels;  // fastest first
};

enum class ArchMode { SingleVdd, MultiVdd, Fgdvs };

inline auto to_string(ArchMode mode) -> std::string_view {
  switch (mode) {
    case ArchMode::SingleVdd: return "single-vdd";
    case ArchMode::MultiVdd: return "multi-vdd";
    case ArchMode::Fgdvs: return "fgdvs";
  }
  return "?";
}

inline auto parse_arch_mode(std::string_view text) -> std::optional<ArchMode> {
  if (text == "single-vdd") return ArchMode::SingleVdd;
  if (text == "multi-vdd") return ArchMode::MultiVdd;
  if (text == "fgdvs") return ArchMode::Fgdvs;
  return std::nullopt;
}

/// Characterization table: (op type, level) -> VoltageLevel.
class ResourceLibrary {
 public:
  explicit ResourceLibrary(std::vector<OpTypeLevels> types) : m_types(std::move(types)) {
    for (std::size_t i = 0; i < m_types.size(); ++i) {
      const auto& t = m_types[i];
      if (t.name.empty()) throw ValidationError("op type with empty name");
      for (std::size_t j = 0; j < i; ++j) {
        if (m_types[j].name == t.name) throw ValidationError("duplicate op type '" + t.name + "'");
      }
      if (t.levels.empty()) throw ValidationError("op type '" + t.name + "' has no levels");
      for (std::size_t l = 0; l < t.levels.size(); ++l) {
        const auto& lv = t.levels[l];
        auto where = "op type '" + t.name + "' level " + std::to_string(l);
        if (lv.cycles < 1) throw ValidationError(where + ": cycles must be >= 1");
        if (!(lv.p_dyn >= 0.0) || !(lv.p_lk >= 0.0) || !(lv.p_sw >= 0.0)) {
          throw ValidationError(where + ": negative power value");
        }
        if (!(lv.vdd > 0.0)) throw ValidationError(where + ": vdd must be positive");
        for (std::size_t m = 0; m < l; ++m) {
          if (t.levels[m].cycles == lv.cycles) {
            throw ValidationError(where + ": duplicate cycle count " + std::to_string(lv.cycles));
          }
        }
        if (l == 0) continue;
        const auto& prev = t.levels[l - 1];
        if (!(lv.cycles > prev.cycles && lv.vdd < prev.vdd && lv.p_dyn < prev.p_dyn)) {
          throw ValidationError(where + ": levels must be listed fastest first "
                                        "(higher vdd => fewer cycles and higher pdyn)");
        }
      }
    }
  }

  [[nodiscard]] auto types() const -> const std::vector<OpTypeLevels>& { return m_types; }
  [[nodiscard]] auto num_types() const -> std::size_t { return m_types.size(); }
  [[nodiscard]] auto type(std::size_t i) const -> const OpTypeLevels& { return m_types[i]; }

  [[nodiscard]] auto find(std::string_view name) const -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < m_types.size(); ++i) {
      if (m_types[i].name == name) return i;
    }
    return std::nullopt;
  }

  /// Level index whose cycle count equals `cycles`, if any.
  [[nodiscard]] auto level_for(std::size_t type, int cycles) const -> std::optional<std::size_t> {
    const auto& levels = m_types[type].levels;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      if (levels[l].cycles == cycles) return l;
    }
    return std::nullopt;
  }

  /// Throws unless every op type used by `g` is characterized.
  void require_types(const Dfg& g) const {
    for (const auto& n : g.nodes()) {
      if (!find(n.op)) {
        throw ValidationError("missing op type '" + n.op + "' (node " + std::to_string(n.id) + ") in library");
      }
    }
  }

 private:
  std::vector<OpTypeLevels> m_types;
};

namespace detail {

inline auto parse_double(std::string_view tok, std::size_t line) -> double {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(std::string(tok), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty() || !std::isfinite(value)) {
    throw ParseError(line, "expected number, got '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace detail

/// Parses
///
///     type <optype>
///     level vdd=<float> cycles=<int> pdyn=<float> plk=<float> psw=<float>
///
/// with levels listed fastest first under each type.
inline auto load_resource_library(std::string_view text) -> ResourceLibrary {
  std::vector<OpTypeLevels> types;
  for (const auto& [line, stmt] : detail::statements(text)) {
    auto tok = detail::split_ws(stmt);
    if (tok[0] == "type") {
      if (tok.size() != 2) throw ParseError(line, "expected 'type <optype>'");
      types.push_back({std::string(tok[1]), {}});
    } else if (tok[0] == "level") {
      if (types.empty()) throw ParseError(line, "'level' before any 'type' (missing op type)");
      VoltageLevel lv;
      unsigned seen = 0;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        auto eq = tok[i].find('=');
        if (eq == std::string_view::npos) throw ParseError(line, "expected key=value, got '" + std::string(tok[i]) + "'");
        auto key = tok[i].substr(0, eq);
        auto val = tok[i].substr(eq + 1);
        unsigned bit = 0;
        if (key == "vdd") {
          lv.vdd = detail::parse_double(val, line), bit = 1;
        } else if (key == "cycles") {
          lv.cycles = detail::parse_int(val, line), bit = 2;
        } else if (key == "pdyn") {
          lv.p_dyn = detail::parse_double(val, line), bit = 4;
        } else if (key == "plk") {
          lv.p_lk = detail::parse_double(val, line), bit = 8;
        } else if (key == "psw") {
          lv.p_sw = detail::parse_double(val, line), bit = 16;
        } else {
          throw ParseError(line, "unknown level key '" + std::string(key) + "'");
        }
        if (seen & bit) throw ParseError(line, "repeated key '" + std::string(key) + "'");
        seen |= bit;
      }
      if (seen != 31) throw ParseError(line, "level needs vdd, cycles, pdyn, plk and psw");
      types.back().levels.push_back(lv);
    } else {
      throw ParseError(line, "unknown statement '" + std::string(tok[0]) + "'");
    }
  }
  if (types.empty()) throw ValidationError("library declares no op types");
  return ResourceLibrary(std::move(types));
}

inline auto load_library_file(const std::string& path) -> ResourceLibrary {
  std::ifstream in(path);
  if (!in) throw Error("cannot open library file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_resource_library(buf.str());
}

inline auto format_library(const ResourceLibrary& lib) -> std::string {
  std::ostringstream out;
  out.precision(17);
  for (const auto& t : lib.types()) {
    out << "type " << t.name << "\n";
    for (const auto& lv : t.levels) {
      out << "level vdd=" << lv.vdd << " cycles=" << lv.cycles << " pdyn=" << lv.p_dyn << " plk=" << lv.p_lk
          << " psw=" << lv.p_sw << "\n";
    }
  }
  return out.str();
}

}  // namespace dvsched
