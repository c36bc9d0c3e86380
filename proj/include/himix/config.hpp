#pragma once

#include "himix/metrics.hpp"
#include "himix/rng.hpp"
#include "himix/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace himix {

/// Settings shared by the CLI subcommands.
///
/// Text form is one `key = value` per line; `#` starts a comment. Keys:
///   seed, connectivity (4|8), tau, strategy (himix|classmix), num_classes,
///   trials, threads, brightness, contrast, saturation, hue, height, width,
///   source_skew, target_skew, region_density, road_density, water_density,
///   field_density, building_density, noise_amplitude, segmenter_noise,
///   segmenter_sharpness
struct RunConfig {
  std::uint64_t seed = 0;
  Connectivity connectivity = Connectivity::kFour;
  double tau = kDefaultTau;
  MixStrategy strategy = MixStrategy::kHimix;
  int num_classes = kNumLandCoverClasses;
  std::size_t trials = 500;
  unsigned threads = 0;  // 0: HIMIX_THREADS or hardware concurrency
  PhotometricRanges photometric;
  SceneConfig source_scene = urban_scene();
  SceneConfig target_scene = rural_scene();
  MockSegmenterConfig segmenter;

  /// Set one key from its text value. Throws DataError on unknown keys or
  /// out-of-range values.
  void set(const std::string& key, const std::string& value);
  void check() const;

  RngState rng() const { return {seed, 0}; }
  BenchConfig bench_config() const;

  static SceneConfig rural_scene();
  static SceneConfig urban_scene();
};

/// Apply every `key = value` line of the stream on top of `base`.
RunConfig parse_run_config(std::istream& in, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

}  // namespace himix
