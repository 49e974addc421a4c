#include "support/instances.hpp"

#include <dvsched/dfg.hpp>
#include <dvsched/timing.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>

namespace dvsched {
namespace {

auto chain3() -> Dfg { return parse_dfg("node 1 add\nnode 2 add\nnode 3 add\nedge 1 -> 2\nedge 2 -> 3\n"); }

// a->b->c plus d->c, ids a=1 b=2 c=3 d=4
auto chain_with_side() -> Dfg { return parse_dfg("node 1 add; node 2 add; node 3 add; node 4 add; edge 1->2; edge 2->3; edge 4->3"); }

TEST(ParseDfg, MinimalDocument) {
  auto g = parse_dfg("node 1 mul; node 2 add; edge 1 -> 2");
  EXPECT_EQ(g.size(), 2u);
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.id(g.edges()[0].first), 1);
  EXPECT_EQ(g.id(g.edges()[0].second), 2);
  EXPECT_EQ(g.op(0), "mul");
}

TEST(ParseDfg, TwoCycleIsRejected) {
  try {
    parse_dfg("node 1 mul; node 2 add; edge 1 -> 2; edge 2 -> 1");
    FAIL() << "cycle accepted";
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("cycle detected"), std::string::npos);
    EXPECT_NE(msg.find('1'), std::string::npos);
    EXPECT_NE(msg.find('2'), std::string::npos);
  }
}

TEST(ParseDfg, CycleReportNamesTheCycleOnly) {
  // 1 -> 2 -> 3 -> 4 -> 2; node 1 is outside the cycle.
  try {
    parse_dfg("node 1 a\nnode 2 a\nnode 3 a\nnode 4 a\nedge 1 -> 2\nedge 2 -> 3\nedge 3 -> 4\nedge 4 -> 2\n");
    FAIL();
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    auto list = msg.substr(msg.find(':') + 1);
    EXPECT_EQ(list.find(" 1 "), std::string::npos) << msg;
    for (auto id : {"2", "3", "4"}) EXPECT_NE(list.find(id), std::string::npos) << msg;
  }
}

TEST(ParseDfg, ErrorsCarryLineNumbers) {
  try {
    parse_dfg("name g\nnode 1 mul\nnode x add\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(std::string(e.what()).rfind("line 3:", 0), 0u);
  }
  try {
    parse_dfg("node 1 mul\n\n# comment\nfrobnicate 3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_THROW(parse_dfg("node 1 mul\nedge 1 2\n"), ParseError);
  EXPECT_THROW(parse_dfg("node 1 mul\nname late\n"), ParseError);
}

TEST(ParseDfg, DuplicateIdAndDanglingEdge) {
  EXPECT_THROW(parse_dfg("node 1 mul\nnode 1 add\n"), ParseError);
  try {
    parse_dfg("node 1 mul\nedge 1 -> 7\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("7"), std::string::npos);
  }
}

TEST(ParseDfg, SelfLoopRejected) { EXPECT_THROW(parse_dfg("node 1 mul; edge 1 -> 1"), ParseError); }

TEST(ParseDfg, NonContiguousIdsAndRoundTrip) {
  auto g = parse_dfg("name sparse\nnode 40 add\nnode 7 mul\nedge 7->40\n");
  EXPECT_EQ(g.name(), "sparse");
  EXPECT_EQ(g.id(0), 7);
  EXPECT_EQ(g.id(1), 40);
  auto again = parse_dfg(format_dfg(g));
  EXPECT_EQ(format_dfg(again), format_dfg(g));
}

TEST(ParseDfg, BundledDiffeqHasElevenNodes) {
  auto g = load_dfg_file(DVSCHED_SOURCE_DIR "/benchmarks/diffeq.dfg");
  EXPECT_EQ(g.size(), 11u);
}

TEST(ParseDfg, BundledBenchmarkSizes) {
  const std::pair<const char*, std::size_t> sizes[] = {{"diffeq", 11}, {"iir", 16},     {"fir", 21},
                                                       {"volterra", 28}, {"lattice", 28}, {"ewf", 37},
                                                       {"dct", 42}};
  for (const auto& [name, n] : sizes) {
    auto g = load_dfg_file(std::string(DVSCHED_SOURCE_DIR "/benchmarks/") + name + ".dfg");
    EXPECT_EQ(g.size(), n) << name;
  }
}

TEST(TopologicalOrder, Chain) { EXPECT_EQ(topological_order(chain3()), (std::vector<int>{1, 2, 3})); }

TEST(TopologicalOrder, DiamondTieBreaksById) {
  auto g = parse_dfg("node 1 a; node 2 a; node 3 a; node 4 a; edge 1->2; edge 1->3; edge 2->4; edge 3->4");
  EXPECT_EQ(topological_order(g), (std::vector<int>{1, 2, 3, 4}));
}

auto respects_edges(const Dfg& g, const std::vector<int>& order) -> bool {
  std::vector<std::size_t> pos(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[*g.index_of(order[i])] = i;
  return std::all_of(g.edges().begin(), g.edges().end(), [&](const auto& e) { return pos[e.first] < pos[e.second]; });
}

TEST(TopologicalOrder, EwfIsAValidPermutation) {
  auto g = load_dfg_file(DVSCHED_SOURCE_DIR "/benchmarks/ewf.dfg");
  auto order = topological_order(g);
  ASSERT_EQ(order.size(), 37u);
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_TRUE(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  EXPECT_TRUE(respects_edges(g, order));
}

TEST(TopologicalOrder, InvariantUnderEdgeListPermutation) {
  std::mt19937 rng(11);
  for (int round = 0; round < 50; ++round) {
    auto lib = testing::random_library(rng, 2, 1);
    auto g = testing::random_dag(rng, testing::uniform(rng, 2, 12), lib, 0.35, 0.0);
    std::vector<DfgEdge> edges;
    for (const auto& [s, d] : g.edges()) edges.push_back({g.id(s), g.id(d)});
    std::shuffle(edges.begin(), edges.end(), rng);
    auto nodes = g.nodes();
    std::shuffle(nodes.begin(), nodes.end(), rng);
    Dfg h("shuffled", nodes, edges);
    EXPECT_EQ(topological_order(h), topological_order(g));
    EXPECT_TRUE(respects_edges(g, topological_order(g)));
  }
}

TEST(Timing, ChainAtZeroSlack) {
  auto t = compute_timing(chain3(), 0);
  EXPECT_EQ(t.asap, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(t.alap, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(t.critical_length, 3);
  EXPECT_EQ(t.latency, 3);
  for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(t.mobility(v), 0);
}

TEST(Timing, SideInputHasMobility) {
  auto g = chain_with_side();
  auto t = compute_timing(g, 0);
  auto d = *g.index_of(4);
  EXPECT_EQ(t.asap[d], 1);
  EXPECT_EQ(t.alap[d], 2);
  EXPECT_EQ(t.mobility(d), 1);
  for (int id : {1, 2, 3}) EXPECT_EQ(t.mobility(*g.index_of(id)), 0);
}

TEST(Timing, OneExtraStepShiftsEveryMobility) {
  auto g = chain_with_side();
  auto t0 = compute_timing(g, 0);
  auto t1 = compute_timing(g, 1);
  EXPECT_EQ(t1.latency, 4);
  for (std::size_t v = 0; v < g.size(); ++v) EXPECT_EQ(t1.mobility(v), t0.mobility(v) + 1);
}

TEST(Timing, NegativeSlackRejected) { EXPECT_THROW(compute_timing(chain3(), -1), ValidationError); }

TEST(TimingProperties, InvariantsAndMonotonicity) {
  std::mt19937 rng(5);
  for (int round = 0; round < 200; ++round) {
    auto lib = testing::random_library(rng, 2, 1);
    auto g = testing::random_dag(rng, testing::uniform(rng, 1, 14), lib, 0.3, 0.0);
    const int k = testing::uniform(rng, 0, 4);
    const int dk = testing::uniform(rng, 1, 3);
    auto t = compute_timing(g, k);
    auto again = compute_timing(g, k);
    EXPECT_EQ(t.asap, again.asap);
    EXPECT_EQ(t.alap, again.alap);
    EXPECT_EQ(t.latency, t.critical_length + k);
    for (std::size_t v = 0; v < g.size(); ++v) {
      EXPECT_GE(t.asap[v], 1);
      EXPECT_LE(t.alap[v], t.latency);
      EXPECT_GE(t.mobility(v), 0);
    }
    for (const auto& [u, v] : g.edges()) {
      EXPECT_GE(t.asap[v], t.asap[u] + 1);
      EXPECT_LE(t.alap[u], t.alap[v] - 1);
    }
    if (k == 0) {
      // A node on a critical path has asap + (longest path below it) = T.
      std::vector<int> below(g.size(), 0);
      auto order = topological_indices(g);
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        for (auto s : g.succs(*it)) below[*it] = std::max(below[*it], below[s] + 1);
      }
      for (std::size_t v = 0; v < g.size(); ++v) {
        if (t.asap[v] + below[v] == t.latency) EXPECT_EQ(t.mobility(v), 0);
      }
    }
    auto wider = compute_timing(g, k + dk);
    EXPECT_EQ(wider.asap, t.asap);
    for (std::size_t v = 0; v < g.size(); ++v) EXPECT_EQ(wider.mobility(v), t.mobility(v) + dk);
  }
}

TEST(ValidateSchedule, Examples) {
  auto g = parse_dfg("node 1 a; node 2 a; edge 1 -> 2");
  auto t = compute_timing(g, 0);
  ASSERT_EQ(t.latency, 2);
  EXPECT_FALSE(validate_schedule(g, t, schedule_from_ids(g, {{1, 1, 1}, {2, 2, 1}})));

  auto v = validate_schedule(g, t, schedule_from_ids(g, {{1, 1, 2}, {2, 2, 1}}));
  ASSERT_TRUE(v);
  EXPECT_EQ(v->rule, Violation::Rule::Precedence);
  EXPECT_EQ(v->other, 1);
  EXPECT_EQ(v->node, 2);
  EXPECT_NE(v->message.find("edge (1,2)"), std::string::npos);

  auto single = parse_dfg("node 1 a");
  auto t2 = compute_timing(single, 2);
  EXPECT_FALSE(validate_schedule(single, t2, schedule_from_ids(single, {{1, 2, 2}})));
}

TEST(ValidateSchedule, EachRule) {
  auto g = parse_dfg("node 1 a; node 2 a; edge 1 -> 2");
  auto t = compute_timing(g, 1);  // T = 3
  using R = Violation::Rule;
  EXPECT_EQ(validate_schedule(g, t, Schedule(2))->rule, R::Unassigned);
  EXPECT_EQ(validate_schedule(g, t, schedule_from_ids(g, {{1, 0, 1}, {2, 2, 1}}))->rule, R::BeforeAsap);
  EXPECT_EQ(validate_schedule(g, t, schedule_from_ids(g, {{1, 1, 1}, {2, 3, 2}}))->rule, R::AfterAlap);
  EXPECT_EQ(validate_schedule(g, t, schedule_from_ids(g, {{1, 2, 2}, {2, 3, 1}}))->rule, R::Precedence);

  ResourceLibrary lib({{"a", {{1.0, 1, 1.0, 0.0, 0.0}, {0.8, 2, 0.5, 0.0, 0.0}}}});
  auto bad = schedule_from_ids(g, {{1, 1, 1}, {2, 2, 1}});
  EXPECT_FALSE(validate_schedule(g, t, bad, &lib));
  auto three = parse_dfg("node 1 a");
  auto t3 = compute_timing(three, 3);
  EXPECT_EQ(validate_schedule(three, t3, schedule_from_ids(three, {{1, 1, 3}}), &lib)->rule, R::BadDuration);
}

TEST(ValidateSchedule, UnknownIdAndSizeMismatch) {
  auto g = parse_dfg("node 1 a; node 2 a");
  EXPECT_THROW(schedule_from_ids(g, {{9, 1, 1}}), ValidationError);
  EXPECT_THROW(schedule_from_ids(g, {{1, 1, 1}, {1, 2, 1}}), ValidationError);
  EXPECT_THROW(validate_schedule(g, compute_timing(g, 0), Schedule(5)), ValidationError);
}

TEST(ValidateScheduleProperties, RandomValidSchedulesPassAndFinishInTime) {
  std::mt19937 rng(21);
  for (int round = 0; round < 300; ++round) {
    auto inst = testing::random_instance(rng, 1, 10);
    auto t = compute_timing(inst.graph, testing::uniform(rng, 0, 3));
    auto s = testing::random_schedule(rng, inst.graph, t, inst.lib);
    EXPECT_FALSE(validate_schedule(inst.graph, t, s, &inst.lib));
    EXPECT_LE(s.makespan(), t.latency);
  }
}

}  // namespace
}  // namespace dvsched
