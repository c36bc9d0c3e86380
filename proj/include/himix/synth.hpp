#pragma once

#include "himix/augment.hpp"
#include "himix/core.hpp"
#include "himix/fusion.hpp"
#include "himix/instances.hpp"
#include "himix/mixing.hpp"
#include "himix/rng.hpp"

#include <array>
#include <string>
#include <vector>

namespace himix {

/// Land-cover palette, in the usual aerial benchmark order.
enum class LandCover : std::uint8_t {
  kBackground = 0,
  kBuilding = 1,
  kRoad = 2,
  kWater = 3,
  kBarren = 4,
  kForest = 5,
  kAgricultural = 6,
};

inline constexpr int kNumLandCoverClasses = 7;

const char* to_string(LandCover c);

struct SceneConfig {
  Index height = 64;
  Index width = 64;
  /// 0 is rural (agricultural base, forests, fields), 1 is urban (background
  /// base, roads, buildings).
  double skew = 0.5;
  /// Expected element counts per 64x64 area, before the skew weighting.
  double region_density = 3.0;
  double road_density = 2.0;
  double water_density = 0.5;
  double field_density = 2.0;
  double building_density = 12.0;
  int noise_amplitude = 12;

  /// Throws DataError on dims below 16, negative densities, or skew outside [0, 1].
  void check() const;
};

/// Painting tiers, bottom to top. Later tiers are never overwritten.
enum class SceneTier : std::uint8_t { kBase = 0, kRegion = 1, kMid = 2, kSmall = 3 };

struct SceneShape {
  enum class Kind : std::uint8_t { kRect, kEllipse };
  Kind kind = Kind::kRect;
  SceneTier tier = SceneTier::kBase;
  LandCover cover = LandCover::kBackground;
  // Bounding box; ellipses are inscribed in it.
  Index y = 0;
  Index x = 0;
  Index height = 0;
  Index width = 0;

  bool covers(Index py, Index px) const;
};

struct Scene {
  Image image;
  LabelMap labels;
};

/// Shapes in paint order; each tier draws from its own derived stream, so
/// changing one tier's density leaves the others untouched.
std::vector<SceneShape> plan_scene(const SceneConfig& cfg, RngState rng);

/// Paint the shapes in order and render flat class colors plus noise.
Scene render_scene(const SceneConfig& cfg, const std::vector<SceneShape>& shapes, RngState rng);

Scene generate_scene(const SceneConfig& cfg, RngState rng);

struct MockSegmenterConfig {
  /// Probability that a pixel's peak is moved to a random class.
  double noise = 0.1;
  /// Extra weight per class when a corrupted peak is drawn; empty means uniform.
  std::vector<double> confusion_bias;
  /// Logit margin of the peak class.
  double sharpness = 6.0;

  void check(int num_classes) const;
};

/// Normalized probabilities peaked at the true class. Noise 0 gives exact
/// one-hot truth; ignore pixels get a uniform distribution. Each pixel
/// consumes a fixed number of draws, so outputs at different noise levels
/// and the same rng are coupled.
ProbMap mock_segment(const MockSegmenterConfig& cfg, const Image& image, const LabelMap& truth, RngState rng);

enum class MixStrategy { kHimix, kClassmix };

const char* to_string(MixStrategy s);
MixStrategy parse_mix_strategy(const std::string& name);

struct ScenePair {
  Image source_image;
  LabelMap source_labels;
  Image target_image;
  /// Ground truth; only the mock segmenter and the report metrics read it.
  LabelMap target_labels;
};

ScenePair generate_scene_pair(const SceneConfig& source, const SceneConfig& target, RngState rng);

struct EpisodeOptions {
  Connectivity connectivity = Connectivity::kFour;
  FusionConfig fusion;
  PhotometricRanges photometric;
  /// Test hook: HIMix layers only the target instances.
  bool empty_selection_for_testing = false;
};

struct EpisodeReport {
  MixStrategy strategy = MixStrategy::kHimix;
  GeometricTransform source_transform;
  GeometricTransform target_transform;
  GeometricTransform mixed_transform;
  MixMask mask;
  LabelMap pseudo_label;
  LabelMap mixed_labels;
  double source_fraction = 0.0;
  /// Share of all pixels that are source pixels of class c; sums to source_fraction.
  std::vector<double> class_source_shares;
  double confidence_fraction = 0.0;
  double pseudo_label_accuracy = 0.0;
  double source_loss = 0.0;
  double mixed_loss = 0.0;
};

/// One pass of the twin-head data flow: augmented source batch and its loss,
/// twin-head pseudo-labels, mixing, weight map, and weighted loss on the
/// augmented mixed batch. Every stage draws from its own derived stream.
EpisodeReport run_pipeline_episode(const ScenePair& scenes, const MockSegmenterConfig& segmenter,
                                   MixStrategy strategy, RngState rng, const EpisodeOptions& options = {});

/// Stable JSON rendering of the scalar fields (the mask goes to its own file).
std::string episode_report_json(const EpisodeReport& report);

}  // namespace himix
