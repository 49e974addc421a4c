#include <dvsched/library.hpp>

#include <gtest/gtest.h>

#include <string>

namespace dvsched {
namespace {

auto expect_validation(const std::string& text, const std::string& fragment) {
  try {
    load_resource_library(text);
    ADD_FAILURE() << "accepted:\n" << text;
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(LoadLibrary, DefaultFileHasThreeMultiplierLevels) {
  auto lib = load_library_file(DVSCHED_SOURCE_DIR "/data/default.lib");
  auto mul = lib.find("mul");
  ASSERT_TRUE(mul);
  const auto& levels = lib.type(*mul).levels;
  ASSERT_EQ(levels.size(), 3u);
  EXPECT_DOUBLE_EQ(levels[0].vdd, 1.0);
  EXPECT_DOUBLE_EQ(levels[1].vdd, 0.78);
  EXPECT_DOUBLE_EQ(levels[2].vdd, 0.68);
  EXPECT_EQ(levels[0].cycles, 1);
  EXPECT_EQ(levels[1].cycles, 2);
  EXPECT_EQ(levels[2].cycles, 3);
  for (auto name : {"add", "sub", "comp"}) EXPECT_TRUE(lib.find(name)) << name;
}

TEST(LoadLibrary, SingleLevelIsValid) {
  auto lib = load_resource_library("type mul\nlevel vdd=1.0 cycles=1 pdyn=2 plk=0.1 psw=0\n");
  EXPECT_EQ(lib.num_types(), 1u);
  EXPECT_EQ(lib.type(0).levels.size(), 1u);
  EXPECT_EQ(lib.level_for(0, 1), 0u);
  EXPECT_FALSE(lib.level_for(0, 2));
}

TEST(LoadLibrary, DuplicateCycleCount) {
  expect_validation("type mul\nlevel vdd=1.0 cycles=2 pdyn=2 plk=0 psw=0\nlevel vdd=0.8 cycles=2 pdyn=1 plk=0 psw=0\n",
                    "duplicate cycle count");
}

TEST(LoadLibrary, NegativePower) {
  expect_validation("type mul\nlevel vdd=1.0 cycles=1 pdyn=-2 plk=0 psw=0\n", "negative power");
  expect_validation("type mul\nlevel vdd=1.0 cycles=1 pdyn=2 plk=0 psw=-0.5\n", "negative power");
}

TEST(LoadLibrary, SlowLevelListedFirst) {
  expect_validation("type mul\nlevel vdd=0.8 cycles=2 pdyn=1 plk=0 psw=0\nlevel vdd=1.0 cycles=1 pdyn=2 plk=0 psw=0\n",
                    "fastest first");
  // Slower but hungrier: also out of order.
  expect_validation("type mul\nlevel vdd=1.0 cycles=1 pdyn=2 plk=0 psw=0\nlevel vdd=0.8 cycles=2 pdyn=3 plk=0 psw=0\n",
                    "fastest first");
}

TEST(LoadLibrary, MissingTypeAndStructure) {
  EXPECT_THROW(load_resource_library("level vdd=1 cycles=1 pdyn=1 plk=0 psw=0\n"), ParseError);
  EXPECT_THROW(load_resource_library("# only a comment\n"), ValidationError);
  EXPECT_THROW(load_resource_library("type mul\n"), ValidationError);
  EXPECT_THROW(load_resource_library("type mul\nlevel vdd=1 cycles=1 pdyn=1 plk=0\n"), ParseError);
  EXPECT_THROW(load_resource_library("type mul\nlevel vdd=1 cycles=1 pdyn=x plk=0 psw=0\n"), ParseError);
  EXPECT_THROW(load_resource_library("type mul\nlevel vdd=1 cycles=1 pdyn=1 plk=0 psw=0 psw=1\n"), ParseError);
  EXPECT_THROW(load_resource_library("type mul\ntype mul\nlevel vdd=1 cycles=1 pdyn=1 plk=0 psw=0\n"),
               ValidationError);
}

TEST(LoadLibrary, MissingOpTypeForGraph) {
  auto lib = load_resource_library("type mul\nlevel vdd=1 cycles=1 pdyn=1 plk=0 psw=0\n");
  auto g = parse_dfg("node 1 mul; node 2 div");
  try {
    lib.require_types(g);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("div"), std::string::npos);
  }
}

TEST(LoadLibrary, FormatRoundTrips) {
  auto lib = load_library_file(DVSCHED_SOURCE_DIR "/data/default.lib");
  EXPECT_EQ(format_library(load_resource_library(format_library(lib))), format_library(lib));
}

TEST(ArchModeNames, RoundTrip) {
  for (auto m : {ArchMode::SingleVdd, ArchMode::MultiVdd, ArchMode::Fgdvs}) EXPECT_EQ(parse_arch_mode(to_string(m)), m);
  EXPECT_FALSE(parse_arch_mode("dvs"));
}

}  // namespace
}  // namespace dvsched
