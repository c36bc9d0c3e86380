#include "himix/metrics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace himix {
namespace {

TEST(Confusion, PerfectIsDiagonal) {
  Rng rng({30, 0});
  const auto y = testing::random_labels(rng, 6, 6, 4);
  const auto cm = confusion(y, y);
  EXPECT_TRUE((cm - ConfusionMatrix(cm.diagonal().asDiagonal())).isZero());
  EXPECT_EQ(cm.sum(), 36);
}

TEST(Confusion, AllIgnoreTruthIsZero) {
  Rng rng({30, 1});
  const auto pred = testing::random_labels(rng, 4, 4, 3);
  EXPECT_TRUE(confusion(pred, LabelMap(4, 4, 3, kIgnoreLabel)).isZero());
}

TEST(Confusion, MatchesNestedLoopTally) {
  Rng rng({30, 2});
  for (int trial = 0; trial < 20; ++trial) {
    const auto pred = testing::random_labels(rng, 8, 8, 5);
    const auto truth = testing::random_labels(rng, 8, 8, 5, 0.1);
    ConfusionMatrix oracle = ConfusionMatrix::Zero(5, 5);
    for (Index y = 0; y < 8; ++y)
      for (Index x = 0; x < 8; ++x)
        if (truth(y, x) != kIgnoreLabel)
          ++oracle(truth(y, x), pred(y, x));
    EXPECT_EQ(confusion(pred, truth), oracle);
  }
  EXPECT_THROW(confusion(LabelMap(2, 2, 2), LabelMap(2, 3, 2)), DataError);
}

TEST(Confusion, PermutationEquivariant) {
  Rng rng({30, 3});
  const std::vector<std::uint8_t> perm = {2, 0, 3, 1};
  for (int trial = 0; trial < 10; ++trial) {
    auto pred = testing::random_labels(rng, 7, 7, 4);
    auto truth = testing::random_labels(rng, 7, 7, 4);
    const auto cm = confusion(pred, truth);
    for (auto* m : {&pred, &truth})
      for (auto& v : m->pixels().reshaped())
        v = perm[v];
    const auto pcm = confusion(pred, truth);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        EXPECT_EQ(pcm(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]), cm(a, b));
  }
}

TEST(Miou, HandComputedTwoByTwo) {
  LabelMap truth(2, 2, 2), pred(2, 2, 2);
  truth.pixels() << 0, 0, 1, 1;
  pred.pixels() << 0, 1, 1, 1;
  const auto r = miou(confusion(pred, truth));
  EXPECT_DOUBLE_EQ(*r.per_class[0], 0.5);
  EXPECT_DOUBLE_EQ(*r.per_class[1], 2.0 / 3.0);
  EXPECT_NEAR(r.mean, 7.0 / 12.0, 1e-9);
}

TEST(Miou, PerfectAndDisjoint) {
  LabelMap y(1, 3, 3);
  y.pixels() << 0, 1, 2;
  const auto perfect = miou(confusion(y, y));
  EXPECT_EQ(perfect.mean, 1.0);
  for (const auto& v : perfect.per_class)
    EXPECT_EQ(*v, 1.0);
  LabelMap shifted(1, 3, 3);
  shifted.pixels() << 1, 2, 0;
  const auto disjoint = miou(confusion(shifted, y));
  EXPECT_EQ(disjoint.mean, 0.0);
}

TEST(Miou, AbsentClassesSkippedAndEmptyError) {
  ConfusionMatrix cm = ConfusionMatrix::Zero(3, 3);
  cm(1, 1) = 5;
  const auto r = miou(cm);
  EXPECT_FALSE(r.per_class[0].has_value());
  EXPECT_EQ(r.mean, 1.0);
  try {
    miou(ConfusionMatrix::Zero(3, 3));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "empty metric");
  }
}

TEST(Miou, DiagonalIsExactlyOne) {
  Rng rng({30, 4});
  for (int trial = 0; trial < 20; ++trial) {
    ConfusionMatrix cm = ConfusionMatrix::Zero(7, 7);
    for (int c = 0; c < 7; ++c)
      cm(c, c) = static_cast<std::int64_t>(rng.below(3) * rng.below(1000));
    cm(0, 0) += 1;
    EXPECT_EQ(miou(cm).mean, 1.0);
  }
}

BenchConfig small_bench() {
  BenchConfig cfg;
  cfg.source.skew = 0.0;
  cfg.target.skew = 1.0;
  cfg.source.height = cfg.source.width = 32;
  cfg.target.height = cfg.target.width = 32;
  return cfg;
}

TEST(BalanceTrial, SingleClassSourceClassmixIsOne) {
  BenchConfig cfg = small_bench();
  cfg.source.region_density = cfg.source.road_density = cfg.source.water_density = 0.0;
  cfg.source.field_density = cfg.source.building_density = 0.0;
  EXPECT_DOUBLE_EQ(balance_trial(MixStrategy::kClassmix, cfg, {1, 0}), 1.0);
}

TEST(BalanceTrial, EmptySelectionIsZeroAndDeterministic) {
  BenchConfig cfg = small_bench();
  EXPECT_EQ(balance_trial(MixStrategy::kHimix, cfg, {2, 0}), balance_trial(MixStrategy::kHimix, cfg, {2, 0}));
  cfg.episode.empty_selection_for_testing = true;
  EXPECT_DOUBLE_EQ(balance_trial(MixStrategy::kHimix, cfg, {2, 0}), 0.0);
}

TEST(BenchCompare, SingleTrialStatsEqualTheTrial) {
  const auto cfg = small_bench();
  const auto r = bench_compare(1, cfg, {3, 0}, 1);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].strategy, MixStrategy::kHimix);
  EXPECT_EQ(r.records[1].strategy, MixStrategy::kClassmix);
  const double f = balance_trial(MixStrategy::kHimix, cfg, derive_rng({3, 0}, 0));
  EXPECT_EQ(r.himix.mean, f);
  EXPECT_EQ(r.himix.mean_abs_deviation, std::abs(f - 0.5));
  EXPECT_EQ(r.classmix.mean, r.records[1].source_fraction);
  EXPECT_EQ(r.csv.substr(0, r.csv.find('\n')),
            "trial,strategy,source_fraction,share_c0,share_c1,share_c2,share_c3,share_c4,share_c5,share_c6");
  EXPECT_THROW(bench_compare(0, cfg, {3, 0}, 1), DataError);
}

TEST(BenchCompare, IndependentOfParallelismAndSharesSum) {
  const auto cfg = small_bench();
  const auto serial = bench_compare(12, cfg, {4, 0}, 1);
  const auto parallel = bench_compare(12, cfg, {4, 0}, 8);
  EXPECT_EQ(serial.csv, parallel.csv);
  for (const auto& rec : serial.records) {
    double sum = 0.0;
    for (double v : rec.class_shares)
      sum += v;
    EXPECT_NEAR(sum, rec.source_fraction, 1e-12);
    EXPECT_GE(rec.source_fraction, 0.0);
    EXPECT_LE(rec.source_fraction, 1.0);
  }
}

TEST(Summarize, OrderIndependent) {
  const auto r = bench_compare(6, small_bench(), {5, 0}, 1);
  auto shuffled = r.records;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto a = summarize(r.records, MixStrategy::kClassmix);
  const auto b = summarize(shuffled, MixStrategy::kClassmix);
  EXPECT_NEAR(a.mean, b.mean, 1e-15);
  EXPECT_NEAR(a.mean_abs_deviation, b.mean_abs_deviation, 1e-15);
}

TEST(DefaultParallelism, ReadsEnvironment) {
  setenv("HIMIX_THREADS", "3", 1);
  EXPECT_EQ(default_parallelism(), 3u);
  unsetenv("HIMIX_THREADS");
  EXPECT_GE(default_parallelism(), 1u);
}

}  // namespace
}  // namespace himix
