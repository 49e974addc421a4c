// dvsched: pareto (area, power) scheduling of data-flow graphs from the shell.
//
// Exit codes: 0 ok, 1 internal error, 2 bad input, 3 oracle cap exceeded,
// 4 time limit hit (partial results are still written).

#include "sidecar.hpp"

#include <dvsched/dvsched.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef DVSCHED_DEFAULT_LIB
#define DVSCHED_DEFAULT_LIB "data/default.lib"
#endif

namespace dvsched::cli {
namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_cap = 3;
constexpr int exit_timeout = 4;

struct Options {
  std::string dfg;
  std::string lib = DVSCHED_DEFAULT_LIB;
  std::string mode = "fgdvs";
  int k = 0;
  std::optional<double> time_limit;
  std::string out;
  std::string json;
  std::optional<long> seed;  // accepted for scripting symmetry; nothing is random
  std::string area_budget;
  std::optional<double> power_budget;

  // subcommand specific
  int k_max = 3;
  std::string merged;
  std::string algo = "bb-first";
  std::string priority;
  std::size_t max_nodes = EnumerationBound{}.max_nodes;
  std::uint64_t max_states = EnumerationBound{}.max_states;
  std::string schedule;
};

void add_common(CLI::App* cmd, Options& o, bool with_mode, bool with_budget) {
  cmd->add_option("--dfg", o.dfg, "DFG file")->required();
  cmd->add_option("--lib", o.lib, "resource library file")->capture_default_str();
  if (with_mode) {
    cmd->add_option("--mode", o.mode, "architecture")
        ->check(CLI::IsMember({"single-vdd", "multi-vdd", "fgdvs"}))
        ->capture_default_str();
  }
  cmd->add_option("--k", o.k, "slack added to the critical path length")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--time-limit", o.time_limit, "seconds per search")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "CSV output path (stdout when omitted)");
  cmd->add_option("--json", o.json, "JSON sidecar path");
  cmd->add_option("--seed", o.seed, "reserved; every algorithm is deterministic");
  if (with_budget) {
    auto* area = cmd->add_option("--area-budget", o.area_budget, "per-type caps, e.g. mul=3,add=2,comp=1");
    cmd->add_option("--power-budget", o.power_budget, "power cap in mW")->excludes(area);
  }
}

struct Inputs {
  Dfg graph;
  ResourceLibrary lib;
};

auto load_inputs(const Options& o) -> Inputs {
  auto g = load_dfg_file(o.dfg);
  auto lib = load_library_file(o.lib);
  lib.require_types(g);
  return {std::move(g), std::move(lib)};
}

auto budget_of(const Options& o, const ResourceLibrary& lib) -> Budget {
  Budget b;
  if (!o.area_budget.empty()) b = parse_area_budget(o.area_budget);
  if (o.power_budget) b = Budget::power(*o.power_budget);
  BudgetCheck check(b, lib);  // rejects unknown type names
  (void)check;
  return b;
}

auto mode_of(const Options& o) -> ArchMode { return *parse_arch_mode(o.mode); }

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

void emit_json(const std::string& path, const ordered_json& j) {
  if (!path.empty()) emit(path, j.dump(2) + "\n");
}

auto config_for(const Options& o, ArchMode mode, const Budget& b) -> SearchConfig {
  SearchConfig cfg;
  cfg.mode = mode;
  cfg.budget = b;
  cfg.time_limit = o.time_limit;
  return cfg;
}

auto tuple_text(const CostTuple& c) -> std::string {
  return "(" + std::to_string(c.area_total) + ", " + format_power(c.power) + ")";
}

auto seconds_text(double s) -> std::string {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6fs", s);
  return buf;
}

auto cmd_pareto(const Options& o) -> int {
  auto [g, lib] = load_inputs(o);
  auto mode = mode_of(o);
  auto budget = budget_of(o, lib);
  auto t = compute_timing(g, o.k);
  auto r = bb_pareto(g, t, lib, config_for(o, mode, budget));
  std::ostringstream csv;
  write_front_csv(csv, lib, r.front, r.completed);
  emit(o.out, csv.str());
  auto j = run_json(g, lib, mode, o.k, t, budget, r);
  j = ordered_json{{"command", "pareto"}, {"runs", ordered_json::array({j})}};
  emit_json(o.json, j);
  if (!r.completed) {
    std::cerr << "time limit reached after " << r.nodes_expanded << " expansions; front is partial\n";
    return exit_timeout;
  }
  return exit_ok;
}

auto cmd_oracle(const Options& o) -> int {
  auto [g, lib] = load_inputs(o);
  auto mode = mode_of(o);
  auto budget = budget_of(o, lib);
  auto t = compute_timing(g, o.k);
  auto start = std::chrono::steady_clock::now();
  auto front = oracle_front(g, t, lib, mode, budget, {o.max_nodes, o.max_states});
  SearchReport r;
  r.front = std::move(front);
  r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream csv;
  write_front_csv(csv, lib, r.front, true);
  emit(o.out, csv.str());
  auto j = run_json(g, lib, mode, o.k, t, budget, r);
  j = ordered_json{{"command", "oracle"}, {"runs", ordered_json::array({j})}};
  emit_json(o.json, j);
  return exit_ok;
}

auto cmd_compare(const Options& o) -> int {
  auto [g, lib] = load_inputs(o);
  auto budget = budget_of(o, lib);
  auto t = compute_timing(g, o.k);
  std::ostringstream csv;
  csv << front_csv_header(lib, {"mode"}) << '\n';
  auto runs = ordered_json::array();
  std::map<ArchMode, ParetoSet> fronts;
  bool completed = true;
  for (auto mode : {ArchMode::SingleVdd, ArchMode::MultiVdd, ArchMode::Fgdvs}) {
    auto r = bb_pareto(g, t, lib, config_for(o, mode, budget));
    completed = completed && r.completed;
    for (const auto& e : r.front.sorted()) {
      csv << front_csv_row(e.cost, r.completed, {std::string(to_string(mode))}) << '\n';
    }
    runs.push_back(run_json(g, lib, mode, o.k, t, budget, r));
    fronts[mode] = std::move(r.front);
  }
  auto summary = domination_summary(fronts[ArchMode::Fgdvs], fronts[ArchMode::MultiVdd]);
  char pct[32];
  std::snprintf(pct, sizeof pct, "%.2f%%", summary.percent());
  emit(o.out, csv.str());
  // The summary must not end up inside a CSV written to stdout.
  (o.out.empty() ? std::cerr : std::cout) << "multi-vdd points dominated or matched by fgdvs: " << summary.covered
                                           << " of " << summary.total << " (" << pct << ")\n";
  emit_json(o.json, ordered_json{{"command", "compare"},
                                 {"runs", runs},
                                 {"summary",
                                  {{"multi_vdd_points", summary.total},
                                   {"covered_by_fgdvs", summary.covered},
                                   {"percent", summary.percent()}}}});
  return completed ? exit_ok : exit_timeout;
}

auto cmd_sweep(const Options& o) -> int {
  auto [g, lib] = load_inputs(o);
  auto mode = mode_of(o);
  auto budget = budget_of(o, lib);
  std::ostringstream csv;
  csv << "k,latency,completed,points,min_area,max_area,min_power,max_power\n";
  auto runs = ordered_json::array();
  std::vector<CostTuple> all;
  bool completed = true;
  for (int k = 0; k <= o.k_max; ++k) {
    auto t = compute_timing(g, k);
    auto r = bb_pareto(g, t, lib, config_for(o, mode, budget));
    completed = completed && r.completed;
    csv << k << ',' << t.latency << ',' << (r.completed ? "true" : "false") << ',' << r.front.size();
    if (r.front.empty()) {
      csv << ",,,,\n";
    } else {
      int amin = r.front.entries().front().cost.area_total;
      int amax = amin;
      double pmin = r.front.entries().front().cost.power;
      double pmax = pmin;
      for (const auto& e : r.front.entries()) {
        amin = std::min(amin, e.cost.area_total);
        amax = std::max(amax, e.cost.area_total);
        pmin = std::min(pmin, e.cost.power);
        pmax = std::max(pmax, e.cost.power);
        all.push_back(e.cost);
      }
      csv << ',' << amin << ',' << amax << ',' << format_power(pmin) << ',' << format_power(pmax) << '\n';
    }
    runs.push_back(run_json(g, lib, mode, k, t, budget, r));
  }
  emit(o.out, csv.str());
  if (!o.merged.empty()) {
    auto merged = nondominated3(all);
    std::sort(merged.begin(), merged.end(), [](const CostTuple& a, const CostTuple& b) {
      if (a.latency != b.latency) return a.latency < b.latency;
      if (a.area_total != b.area_total) return a.area_total < b.area_total;
      return a.power < b.power;
    });
    std::ostringstream m;
    m << "k,latency,area_total,power_total\n";
    const int critical = compute_timing(g, 0).latency;
    for (const auto& c : merged) {
      m << c.latency - critical << ',' << c.latency << ',' << c.area_total << ',' << format_power(c.power) << '\n';
    }
    emit(o.merged, m.str());
  }
  emit_json(o.json, ordered_json{{"command", "sweep"}, {"runs", runs}});
  return completed ? exit_ok : exit_timeout;
}

auto cmd_budget(const Options& o) -> int {
  auto [g, lib] = load_inputs(o);
  auto mode = mode_of(o);
  auto budget = budget_of(o, lib);
  auto t = compute_timing(g, o.k);
  std::ostringstream csv;
  csv << front_csv_header(lib, {"algorithm", "priority", "status"}) << '\n';
  const auto blank = std::string(lib.num_types() + 7, ',');
  auto runs = ordered_json::array();
  int code = exit_ok;

  if (o.algo == "list") {
    std::vector<Priority> priorities{Priority::MaxDuration, Priority::MinDuration};
    if (o.priority == "max") priorities = {Priority::MaxDuration};
    if (o.priority == "min") priorities = {Priority::MinDuration};
    CostModel model(g, lib);
    for (auto p : priorities) {
      auto start = std::chrono::steady_clock::now();
      auto s = list_schedule(g, t, lib, mode, budget, p);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::string label = "list " + std::string(to_string(p));
      ordered_json j{{"algorithm", "list"}, {"priority", std::string(to_string(p))}, {"elapsed_s", secs}};
      if (s) {
        auto c = evaluate(model, *s, mode, t.latency);
        std::cout << label << ": " << tuple_text(c) << "  " << seconds_text(secs) << '\n';
        csv << front_csv_row(c, true, {"list", std::string(to_string(p)), "feasible"}) << '\n';
        j["status"] = "feasible";
        j["cost"] = cost_json(lib, c);
        j["schedule"] = schedule_json(g, *s);
      } else {
        std::cout << label << ": INFEASIBLE  " << seconds_text(secs) << '\n';
        csv << "list," << to_string(p) << ",infeasible" << blank << '\n';
        j["status"] = "infeasible";
      }
      runs.push_back(std::move(j));
    }
  } else if (o.algo == "bb-first") {
    auto cfg = config_for(o, mode, budget);
    cfg.emit_first_solution = true;
    cfg.stop_at_first = true;
    auto r = bb_pareto(g, t, lib, cfg);
    ordered_json j{{"algorithm", "bb-first"}, {"elapsed_s", r.elapsed}, {"completed", r.completed}};
    if (r.first) {
      std::cout << "bb-first: " << tuple_text(r.first->cost) << "  " << seconds_text(r.first->elapsed) << '\n';
      csv << front_csv_row(r.first->cost, true, {"bb-first", "", "feasible"}) << '\n';
      j["status"] = "feasible";
      j["cost"] = cost_json(lib, r.first->cost);
      j["schedule"] = schedule_json(g, r.first->schedule);
    } else if (r.completed) {
      std::cout << "bb-first: NONE  " << seconds_text(r.elapsed) << '\n';
      csv << "bb-first,,none" << blank << '\n';
      j["status"] = "none";
    } else {
      std::cout << "bb-first: TIMEOUT  " << seconds_text(r.elapsed) << '\n';
      csv << "bb-first,,timeout" << blank << '\n';
      j["status"] = "timeout";
      code = exit_timeout;
    }
    runs.push_back(std::move(j));
  } else {
    auto r = bb_pareto(g, t, lib, config_for(o, mode, budget));
    std::cout << "bb:";
    if (r.front.empty()) std::cout << " NONE";
    for (const auto& e : r.front.sorted()) {
      std::cout << ' ' << tuple_text(e.cost);
      csv << front_csv_row(e.cost, r.completed, {"bb", "", "feasible"}) << '\n';
    }
    std::cout << "  " << seconds_text(r.elapsed) << (r.completed ? "" : "  (partial)") << '\n';
    auto j = run_json(g, lib, mode, o.k, t, budget, r);
    j["algorithm"] = "bb";
    runs.push_back(std::move(j));
    if (!r.completed) code = exit_timeout;
  }
  if (!o.out.empty()) emit(o.out, csv.str());
  emit_json(o.json, ordered_json{{"command", "budget"},
                                 {"dfg", g.name()},
                                 {"mode", std::string(to_string(mode))},
                                 {"k", o.k},
                                 {"latency", t.latency},
                                 {"budget", budget_json(budget)},
                                 {"runs", runs}});
  return code;
}

// Re-validates every schedule in a sidecar and recomputes its cost.
auto check_sidecar(const Dfg& g, const ResourceLibrary& lib, const ordered_json& doc) -> std::size_t {
  std::size_t checked = 0;
  CostModel model(g, lib);
  auto check_one = [&](const ordered_json& entry, ArchMode mode, const TimingInfo& t) {
    auto s = schedule_from_json(g, entry.at("schedule"));
    if (auto v = validate_schedule(g, t, s, &lib)) throw ValidationError(v->message);
    if (entry.contains("area_total") || entry.contains("cost")) {
      const auto& c = entry.contains("cost") ? entry.at("cost") : entry;
      auto fresh = evaluate(model, s, mode, t.latency);
      if (fresh.area_total != c.at("area_total").get<int>() ||
          std::abs(fresh.power - c.at("power").at("total").get<double>()) > 1e-6) {
        throw ValidationError("stored cost does not match the schedule");
      }
    }
    ++checked;
  };
  for (const auto& run : doc.at("runs")) {
    auto mode = run.contains("mode") ? *parse_arch_mode(run.at("mode").get<std::string>())
                                     : *parse_arch_mode(doc.at("mode").get<std::string>());
    int k = run.contains("k") ? run.at("k").get<int>() : doc.at("k").get<int>();
    auto t = compute_timing(g, k);
    if (run.contains("front")) {
      for (const auto& e : run.at("front")) check_one(e, mode, t);
    }
    if (run.contains("schedule")) check_one(run, mode, t);
  }
  return checked;
}

auto cmd_validate(const Options& o) -> int {
  auto [g, lib] = load_inputs(o);
  if (o.schedule.empty()) {
    std::cout << "ok: " << g.name() << " (" << g.size() << " nodes, " << g.edges().size() << " edges), "
              << lib.num_types() << " op types\n";
    return exit_ok;
  }
  std::ifstream in(o.schedule);
  if (!in) throw Error("cannot open '" + o.schedule + "'");
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("sidecar: ") + e.what());
  }
  std::size_t n = 0;
  try {
    n = check_sidecar(g, lib, doc);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("sidecar: ") + e.what());
  }
  std::cout << "ok: " << n << " schedule" << (n == 1 ? "" : "s") << " valid\n";
  return exit_ok;
}

}  // namespace
}  // namespace dvsched::cli

int main(int argc, char** argv) {
  using namespace dvsched::cli;
  Options o;
  CLI::App app{"pareto (area, power) operator scheduling under Single-Vdd, Multi-Vdd and FGDVS cost models",
               "dvsched"};
  app.require_subcommand(1);

  auto* pareto = app.add_subcommand("pareto", "exact front by branch and bound");
  add_common(pareto, o, true, true);

  auto* compare = app.add_subcommand("compare", "fronts of all three architectures, long format");
  add_common(compare, o, false, true);

  auto* sweep = app.add_subcommand("sweep", "front extremes for k = 0..k-max");
  add_common(sweep, o, true, true);
  sweep->add_option("--k-max", o.k_max, "largest slack")->check(CLI::NonNegativeNumber)->capture_default_str();
  sweep->add_option("--merged", o.merged, "CSV path for the (area, power, latency) front over all k");

  auto* budget = app.add_subcommand("budget", "one budgeted run: list, bb-first or bb");
  add_common(budget, o, true, true);
  budget->add_option("--algo", o.algo, "algorithm")
      ->check(CLI::IsMember({"list", "bb-first", "bb"}))
      ->capture_default_str();
  budget->add_option("--priority", o.priority, "list priority (both when omitted)")
      ->check(CLI::IsMember({"max", "min"}));

  auto* oracle = app.add_subcommand("oracle", "exact front by exhaustive enumeration (small graphs)");
  add_common(oracle, o, true, true);
  oracle->add_option("--max-nodes", o.max_nodes, "refuse larger graphs")->capture_default_str();
  oracle->add_option("--max-states", o.max_states, "refuse larger estimated state spaces")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "check input files, or every schedule in a JSON sidecar");
  validate->add_option("--dfg", o.dfg, "DFG file")->required();
  validate->add_option("--lib", o.lib, "resource library file")->capture_default_str();
  validate->add_option("--schedule", o.schedule, "JSON sidecar to re-validate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input;
  }

  try {
    if (*pareto) return cmd_pareto(o);
    if (*compare) return cmd_compare(o);
    if (*sweep) return cmd_sweep(o);
    if (*budget) return cmd_budget(o);
    if (*oracle) return cmd_oracle(o);
    return cmd_validate(o);
  } catch (const dvsched::CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_cap;
  } catch (const dvsched::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
