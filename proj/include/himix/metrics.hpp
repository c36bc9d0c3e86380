#pragma once

#include "himix/core.hpp"
#include "himix/synth.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace himix {

/// Rows are truth, columns prediction; counts over non-ignore pixels.
using ConfusionMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Pixels ignored in either map are skipped. The class count is the larger
/// of the two maps' counts.
ConfusionMatrix confusion(const LabelMap& pred, const LabelMap& truth);

struct IouResult {
  /// nullopt for classes with an empty union.
  std::vector<std::optional<double>> per_class;
  double mean = 0.0;
};

/// TP / (TP + FP + FN) per class; the mean skips classes with an empty union.
/// Throws DataError("empty metric") when every class is absent.
IouResult miou(const ConfusionMatrix& cm);

/// Everything a balance trial needs besides its seed.
struct BenchConfig {
  SceneConfig source;
  SceneConfig target;
  MockSegmenterConfig segmenter;
  EpisodeOptions episode;
};

/// Source fraction of the mask from one episode seeded by `seed`.
double balance_trial(MixStrategy strategy, const BenchConfig& cfg, RngState seed);

struct TrialRecord {
  std::size_t trial = 0;
  MixStrategy strategy = MixStrategy::kHimix;
  double source_fraction = 0.0;
  std::vector<double> class_shares;
};

struct BalanceStats {
  std::vector<double> fractions;
  double mean = 0.0;
  /// Mean of |fraction - 0.5|.
  double mean_abs_deviation = 0.0;
  /// Mean per-class source share over trials.
  std::vector<double> class_shares;
};

BalanceStats summarize(const std::vector<TrialRecord>& records, MixStrategy strategy);

struct BenchResult {
  BalanceStats himix;
  BalanceStats classmix;
  /// Ordered by trial, then himix before classmix.
  std::vector<TrialRecord> records;
  std::string csv;
};

/// Trial t of both strategies uses derive_rng(master, t). Results do not
/// depend on `parallelism` or on the order trials finish.
BenchResult bench_compare(std::size_t trials, const BenchConfig& cfg, RngState master, unsigned parallelism);

/// `trial,strategy,source_fraction,share_c0,...` with LF line endings.
std::string bench_csv(const std::vector<TrialRecord>& records, int num_classes);

/// Parallelism from HIMIX_THREADS, or hardware concurrency when unset.
unsigned default_parallelism();

}  // namespace himix
