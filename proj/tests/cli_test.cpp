#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string cli = DVSCHED_CLI;
const std::string src = DVSCHED_SOURCE_DIR;

auto scratch(const std::string& name) -> std::string {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("dvsched_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return (dir / name).string();
}

auto slurp(const std::string& path) -> std::string {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs the CLI with `args`; stdout goes to `out` when given. Returns the exit code.
auto run(const std::string& args, const std::string& out = "") -> int {
  std::string cmd = cli + " " + args + " > " + (out.empty() ? "/dev/null" : out) + " 2> " + scratch("stderr.txt");
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

auto bench(const std::string& name) -> std::string { return "--dfg " + src + "/benchmarks/" + name + ".dfg"; }
auto golden(const std::string& name) -> std::string { return slurp(src + "/tests/golden/" + name); }

// Drops timing fields, which are the only nondeterministic part of a sidecar.
auto without_timing(json j) -> json {
  if (j.is_object()) {
    j.erase("elapsed_s");
    for (auto& [key, value] : j.items()) value = without_timing(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = without_timing(value);
  }
  return j;
}

auto load_json(const std::string& path) -> json { return json::parse(slurp(path)); }

struct GoldenCase {
  std::string args;
  std::vector<std::pair<std::string, std::string>> files;  // (scratch output, golden name)
};

TEST(CliGolden, CsvOutputsMatch) {
  const std::vector<GoldenCase> cases = {
      {"pareto " + bench("diffeq") + " --k 0 --out OUT0", {{"OUT0", "pareto_diffeq_fgdvs_k0.csv"}}},
      {"pareto " + bench("iir") + " --k 1 --mode multi-vdd --out OUT0", {{"OUT0", "pareto_iir_multi_k1.csv"}}},
      {"pareto " + bench("fir") + " --k 0 --mode single-vdd --out OUT0", {{"OUT0", "pareto_fir_single_k0.csv"}}},
      {"compare " + bench("diffeq") + " --k 0 --out OUT0", {{"OUT0", "compare_diffeq_k0.csv"}, {"STDOUT", "compare_diffeq_k0.txt"}}},
      {"sweep " + bench("diffeq") + " --k-max 3 --out OUT0 --merged OUT1",
       {{"OUT0", "sweep_diffeq.csv"}, {"OUT1", "sweep_diffeq_merged.csv"}}},
      {"oracle --dfg " + src + "/tests/fixtures/schedule_c.dfg --k 2 --mode multi-vdd --out OUT0",
       {{"OUT0", "oracle_schedule_c_multi_k2.csv"}}},
      {"budget " + bench("diffeq") + " --k 2 --area-budget mul=2,add=2 --algo bb --out OUT0",
       {{"OUT0", "budget_diffeq_bb_k2.csv"}}},
      {"budget " + bench("diffeq") + " --k 2 --area-budget mul=2,add=2 --algo bb-first --out OUT0",
       {{"OUT0", "budget_diffeq_first_k2.csv"}}},
  };
  int index = 0;
  for (const auto& c : cases) {
    auto args = c.args;
    std::vector<std::string> paths;
    for (int i = 0; i < 2; ++i) {
      auto token = "OUT" + std::to_string(i);
      auto path = scratch("golden_" + std::to_string(index) + "_" + std::to_string(i) + ".csv");
      paths.push_back(path);
      if (auto at = args.find(token); at != std::string::npos) args.replace(at, token.size(), path);
    }
    auto stdout_path = scratch("golden_" + std::to_string(index) + "_stdout.txt");
    ASSERT_EQ(run(args, stdout_path), 0) << args << "\n" << slurp(scratch("stderr.txt"));
    for (const auto& [which, name] : c.files) {
      auto path = which == "STDOUT" ? stdout_path : paths[static_cast<std::size_t>(which.back() - '0')];
      EXPECT_EQ(slurp(path), golden(name)) << args;
    }
    ++index;
  }
}

TEST(CliGolden, ParetoToStdoutMatchesFile) {
  auto out = scratch("stdout.csv");
  ASSERT_EQ(run("pareto " + bench("diffeq") + " --k 0", out), 0);
  EXPECT_EQ(slurp(out), golden("pareto_diffeq_fgdvs_k0.csv"));
}

TEST(CliGolden, JsonSidecarMatchesApartFromTiming) {
  auto csv = scratch("side.csv");
  auto side = scratch("side.json");
  ASSERT_EQ(run("pareto " + bench("diffeq") + " --k 0 --out " + csv + " --json " + side), 0);
  EXPECT_EQ(without_timing(load_json(side)), without_timing(json::parse(golden("pareto_diffeq_fgdvs_k0.json"))));
}

TEST(CliExitCodes, ParseAndValidationFailuresGiveTwo) {
  auto bad = scratch("bad.dfg");
  std::ofstream(bad) << "node 1 mul\nnode 2 mul\nedge 1 -> 2\nedge 2 -> 1\n";
  auto garbled = scratch("garbled.dfg");
  std::ofstream(garbled) << "node one mul\n";
  auto unknown_op = scratch("unknown.dfg");
  std::ofstream(unknown_op) << "node 1 div\n";
  EXPECT_EQ(run("pareto --dfg " + bad), 2);
  EXPECT_NE(slurp(scratch("stderr.txt")).find("cycle"), std::string::npos);
  EXPECT_EQ(run("pareto --dfg " + garbled), 2);
  EXPECT_NE(slurp(scratch("stderr.txt")).find("line 1"), std::string::npos);
  EXPECT_EQ(run("pareto --dfg " + unknown_op), 2);
  EXPECT_EQ(run("pareto --dfg " + src + "/missing.dfg"), 2);
  EXPECT_EQ(run("pareto " + bench("diffeq") + " --mode turbo"), 2);
  EXPECT_EQ(run("pareto " + bench("diffeq") + " --k -1"), 2);
  EXPECT_EQ(run("pareto " + bench("diffeq") + " --time-limit 0"), 2);
  EXPECT_EQ(run("pareto " + bench("diffeq") + " --area-budget mul=x"), 2);
  EXPECT_EQ(run("pareto " + bench("diffeq") + " --area-budget div=2"), 2);
  EXPECT_EQ(run("pareto " + bench("diffeq") + " --power-budget -3"), 2);
  EXPECT_EQ(run("pareto " + bench("diffeq") + " --lib " + bad), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("validate --dfg " + bad), 2);
}

TEST(CliExitCodes, OracleCapGivesThree) {
  EXPECT_EQ(run("oracle " + bench("iir") + " --k 0"), 3);
  EXPECT_EQ(run("oracle " + bench("diffeq") + " --k 0 --max-nodes 11 --max-states 100"), 3);
  EXPECT_EQ(run("oracle " + bench("diffeq") + " --k 0 --max-nodes 11"), 0);
}

TEST(CliExitCodes, TimeLimitGivesFourAndKeepsPartialOutput) {
  auto csv = scratch("partial.csv");
  auto side = scratch("partial.json");
  EXPECT_EQ(run("pareto " + bench("lattice") + " --k 1 --time-limit 0.2 --out " + csv + " --json " + side), 4);
  std::istringstream rows(slurp(csv));
  std::string header, line;
  std::getline(rows, header);
  EXPECT_NE(header.find("completed"), std::string::npos);
  int count = 0;
  while (std::getline(rows, line)) {
    ++count;
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "false");
  }
  EXPECT_GE(count, 1);
  auto j = load_json(side);
  EXPECT_FALSE(j["runs"][0]["completed"].get<bool>());
  EXPECT_EQ(run("validate " + bench("lattice") + " --schedule " + side), 0);
}

TEST(CliRoundTrip, EverySidecarScheduleRevalidates) {
  const std::vector<std::string> commands = {
      "pareto " + bench("iir") + " --k 1",
      "pareto " + bench("diffeq") + " --k 2 --mode multi-vdd",
      "compare " + bench("diffeq") + " --k 1",
      "sweep " + bench("diffeq") + " --k-max 2",
      "budget " + bench("diffeq") + " --k 2 --area-budget mul=2,add=2 --algo bb",
      "budget " + bench("diffeq") + " --k 1 --power-budget 150 --algo list",
  };
  int i = 0;
  for (const auto& cmd : commands) {
    auto side = scratch("rt" + std::to_string(i++) + ".json");
    ASSERT_EQ(run(cmd + " --json " + side), 0) << cmd;
    auto dfg = cmd.substr(cmd.find("--dfg ") + 6);
    dfg = dfg.substr(0, dfg.find(' '));
    EXPECT_EQ(run("validate --dfg " + dfg + " --schedule " + side), 0) << cmd << "\n" << slurp(scratch("stderr.txt"));
  }
}

TEST(CliRoundTrip, TamperedScheduleIsRejected) {
  auto side = scratch("tamper.json");
  ASSERT_EQ(run("pareto " + bench("diffeq") + " --k 0 --json " + side), 0);
  auto j = load_json(side);
  j["runs"][0]["front"][0]["schedule"][0]["start"] = 99;
  std::ofstream(side) << j.dump(2);
  EXPECT_EQ(run("validate " + bench("diffeq") + " --schedule " + side), 2);

  j = load_json(side);
  j["runs"][0]["front"][0]["schedule"][0]["start"] = 1;
  j["runs"][0]["front"][0]["power"]["total"] = 1.0;
  std::ofstream(side) << j.dump(2);
  EXPECT_EQ(run("validate " + bench("diffeq") + " --schedule " + side), 2);
}

TEST(CliDeterminism, RepeatedRunsAreByteIdentical) {
  for (const auto& args : {"pareto " + bench("iir") + " --k 1", "compare " + bench("diffeq") + " --k 1",
                           "sweep " + bench("diffeq") + " --k-max 2"}) {
    std::string csv[2], side[2];
    for (int r = 0; r < 2; ++r) {
      auto c = scratch("det" + std::to_string(r) + ".csv");
      auto s = scratch("det" + std::to_string(r) + ".json");
      ASSERT_EQ(run(args + " --out " + c + " --json " + s), 0);
      csv[r] = slurp(c);
      side[r] = without_timing(load_json(s)).dump();
    }
    EXPECT_EQ(csv[0], csv[1]) << args;
    EXPECT_EQ(side[0], side[1]) << args;
  }
}

TEST(CliPareto, SingleVddEmitsOneRow) {
  for (auto name : {"diffeq", "iir", "fir"}) {
    auto out = scratch("single.csv");
    ASSERT_EQ(run("pareto " + bench(name) + " --mode single-vdd --out " + out), 0);
    auto text = slurp(out);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2) << name;
  }
}

TEST(CliPareto, FrontRowsTradeAreaForPower) {
  auto out = scratch("shape.csv");
  ASSERT_EQ(run("pareto " + bench("iir") + " --k 2 --out " + out), 0);
  std::istringstream rows(slurp(out));
  std::string line;
  std::getline(rows, line);
  int last_area = -1;
  double last_power = 1e300;
  while (std::getline(rows, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    int area = std::stoi(cells[0]);
    double power = std::stod(cells[5]);
    EXPECT_GT(area, last_area);
    EXPECT_LT(power, last_power);
    last_area = area;
    last_power = power;
  }
}

}  // namespace
