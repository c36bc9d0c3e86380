#pragma once

#include "himix/augment.hpp"
#include "himix/core.hpp"
#include "himix/mixing.hpp"

#include <functional>

namespace himix {

/// Per-pixel loss weights in [0, 1].
class WeightMap : public Raster<float> {
 public:
  WeightMap() = default;
  WeightMap(Index height, Index width, float fill = 1.0f) : Raster(height, width, 1, fill) {}
};

inline constexpr double kDefaultTau = 0.968;

struct FusionConfig {
  /// Max-probability threshold; a pixel is confident when its top class
  /// probability exceeds tau.
  double tau = kDefaultTau;

  /// Throws DataError unless 0 < tau < 1.
  void check() const;
};

/// Element-wise max of two heads. The result is not renormalized.
ProbMap fuse_probabilities(const ProbMap& head1, const ProbMap& head2_realigned);

/// Arg-max class per pixel; ties go to the lowest class index.
LabelMap pseudo_label(const ProbMap& probs);

/// Share of pixels whose top probability is strictly above tau.
double confidence_fraction(const ProbMap& probs, const FusionConfig& cfg = {});

/// 1 where the mask takes the source, `fraction` elsewhere.
WeightMap weight_map(const MixMask& mask, double fraction);

inline constexpr double kLogClamp = 1e-12;

/// -(1/|I'|) * sum over non-ignore pixels of w_i * log(p_i[y_i]), with
/// probabilities clamped at 1e-12. Zero when every pixel is ignored.
double weighted_cross_entropy(const ProbMap& pred, const LabelMap& labels, const WeightMap& weights);

/// Unweighted variant.
double cross_entropy(const ProbMap& pred, const LabelMap& labels);

/// Any source of per-pixel class probabilities for an image.
using Segmenter = std::function<ProbMap(const Image&)>;

struct PseudoLabelResult {
  LabelMap labels;
  double fraction = 0.0;
  ProbMap fused;
};

/// Twin-head pseudo-labelling: head1 sees the image, head2 sees the
/// geometrically (and optionally photometrically) augmented image; head2's
/// output is mapped back through the inverse geometric transform, fused with
/// head1, and arg-maxed. The confidence fraction is taken on the fused map.
PseudoLabelResult generate_pseudo_label_pair(const Segmenter& head1, const Segmenter& head2, const Image& image,
                                             const GeometricTransform& geometric,
                                             const PhotometricParams& photometric = {},
                                             const FusionConfig& cfg = {});

/// Both views through the same segmenter.
PseudoLabelResult generate_pseudo_label_pair(const Segmenter& segmenter, const Image& image,
                                             const GeometricTransform& geometric,
                                             const PhotometricParams& photometric = {},
                                             const FusionConfig& cfg = {});

}  // namespace himix
