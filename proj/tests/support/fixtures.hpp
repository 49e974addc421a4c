#pragma once

// Loading helpers for the committed fixtures and bundled inputs.

#include <dvsched/dvsched.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace dvsched::testing {

inline auto source_path(const std::string& rel) -> std::string { return std::string(DVSCHED_SOURCE_DIR) + "/" + rel; }

inline auto default_library() -> ResourceLibrary { return load_library_file(source_path("data/default.lib")); }

inline auto benchmark(const std::string& name) -> Dfg { return load_dfg_file(source_path("benchmarks/" + name + ".dfg")); }

struct GapFixture {
  std::string benchmark;
  int k = 0;
  Budget budget;
};

inline auto list_gap_fixtures() -> std::vector<GapFixture> {
  std::ifstream in(source_path("tests/fixtures/list_gap.txt"));
  std::vector<GapFixture> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    GapFixture f;
    std::string caps;
    fields >> f.benchmark >> f.k >> caps;
    f.budget = parse_area_budget(caps);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace dvsched::testing
