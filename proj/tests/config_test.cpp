#include "himix/config.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace himix {
namespace {

TEST(RunConfig, Defaults) {
  const RunConfig cfg;
  EXPECT_EQ(cfg.seed, 0u);
  EXPECT_EQ(cfg.connectivity, Connectivity::kFour);
  EXPECT_DOUBLE_EQ(cfg.tau, 0.968);
  EXPECT_EQ(cfg.strategy, MixStrategy::kHimix);
  EXPECT_EQ(cfg.num_classes, 7);
  EXPECT_NO_THROW(cfg.check());
}

TEST(RunConfig, ParsesKeyValueLinesWithComments) {
  std::istringstream in(
      "# run settings\n"
      "seed = 42\n"
      "connectivity=8\n"
      "  tau = 0.9   # looser\n"
      "\n"
      "strategy = classmix\n"
      "source_skew = 0.25\n"
      "height = 32\n"
      "segmenter_noise = 0.3\n");
  const auto cfg = parse_run_config(in);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.connectivity, Connectivity::kEight);
  EXPECT_DOUBLE_EQ(cfg.tau, 0.9);
  EXPECT_EQ(cfg.strategy, MixStrategy::kClassmix);
  EXPECT_DOUBLE_EQ(cfg.source_scene.skew, 0.25);
  EXPECT_EQ(cfg.source_scene.height, 32);
  EXPECT_EQ(cfg.target_scene.height, 32);
  EXPECT_DOUBLE_EQ(cfg.segmenter.noise, 0.3);
}

TEST(RunConfig, RejectsBadInput) {
  RunConfig cfg;
  EXPECT_THROW(cfg.set("colour", "red"), DataError);
  EXPECT_THROW(cfg.set("connectivity", "6"), DataError);
  EXPECT_THROW(cfg.set("seed", "abc"), DataError);
  cfg.set("tau", "1.0");
  EXPECT_THROW(cfg.check(), DataError);
  std::istringstream missing_eq("seed 4\n");
  EXPECT_THROW(parse_run_config(missing_eq), DataError);
}

TEST(RunConfig, LaterValuesOverrideEarlier) {
  RunConfig base;
  base.seed = 5;
  std::istringstream in("tau = 0.5\n");
  const auto cfg = parse_run_config(in, base);
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_DOUBLE_EQ(cfg.tau, 0.5);
}

TEST(RunConfig, BenchConfigCarriesScenes) {
  RunConfig cfg;
  cfg.set("tau", "0.8");
  const auto b = cfg.bench_config();
  EXPECT_DOUBLE_EQ(b.source.skew, 1.0);
  EXPECT_DOUBLE_EQ(b.target.skew, 0.0);
  EXPECT_DOUBLE_EQ(b.episode.fusion.tau, 0.8);
}

}  // namespace
}  // namespace himix
