#pragma once

// JSON sidecar: full schedules and search statistics next to each CSV.

#include <dvsched/dvsched.hpp>

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace dvsched::cli {

using nlohmann::ordered_json;

inline auto budget_json(const Budget& b) -> ordered_json {
  ordered_json j;
  switch (b.kind) {
    case Budget::Kind::None:
      j["kind"] = "none";
      break;
    case Budget::Kind::Area:
      j["kind"] = "area";
      j["caps"] = ordered_json::object();
      for (const auto& [name, cap] : b.area_by_type) j["caps"][name] = cap;
      break;
    case Budget::Kind::Power:
      j["kind"] = "power";
      j["cap_mw"] = b.power_cap;
      break;
  }
  return j;
}

inline auto schedule_json(const Dfg& g, const Schedule& s) -> ordered_json {
  auto rows = ordered_json::array();
  for (std::size_t v = 0; v < g.size(); ++v) {
    rows.push_back({{"node", g.id(v)}, {"start", s[v].start}, {"duration", s[v].duration}});
  }
  return rows;
}

inline auto schedule_from_json(const Dfg& g, const ordered_json& rows) -> Schedule {
  std::vector<IdSlot> slots;
  for (const auto& r : rows) {
    slots.push_back({r.at("node").get<int>(), r.at("start").get<int>(), r.at("duration").get<int>()});
  }
  auto s = schedule_from_ids(g, slots);
  if (!s.complete()) throw ValidationError("schedule leaves some node unassigned");
  return s;
}

inline auto cost_json(const ResourceLibrary& lib, const CostTuple& c) -> ordered_json {
  ordered_json j;
  j["area_total"] = c.area_total;
  j["area_by_type"] = ordered_json::object();
  for (std::size_t t = 0; t < lib.num_types(); ++t) j["area_by_type"][lib.type(t).name] = c.area_by_type[t];
  j["power"] = {{"total", c.power},
                {"dynamic", c.breakdown.dynamic},
                {"leakage", c.breakdown.leakage},
                {"switching", c.breakdown.switching}};
  j["latency"] = c.latency;
  return j;
}

inline auto front_json(const Dfg& g, const ResourceLibrary& lib, const ParetoSet& front) -> ordered_json {
  auto arr = ordered_json::array();
  for (const auto& e : front.sorted()) {
    auto j = cost_json(lib, e.cost);
    j["schedule"] = schedule_json(g, e.schedule);
    arr.push_back(std::move(j));
  }
  return arr;
}

/// One search: its setting, statistics and front.
inline auto run_json(const Dfg& g, const ResourceLibrary& lib, ArchMode mode, int k, const TimingInfo& t,
                     const Budget& budget, const SearchReport& r) -> ordered_json {
  ordered_json j;
  j["dfg"] = g.name();
  j["mode"] = std::string(to_string(mode));
  j["k"] = k;
  j["latency"] = t.latency;
  j["budget"] = budget_json(budget);
  j["completed"] = r.completed;
  j["stats"] = {{"nodes_expanded", r.nodes_expanded},
                {"budget_prunes", r.budget_prunes},
                {"dominance_prunes", r.dominance_prunes},
                {"elapsed_s", r.elapsed}};
  j["front"] = front_json(g, lib, r.front);
  return j;
}

}  // namespace dvsched::cli
