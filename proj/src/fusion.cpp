#include "himix/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace himix {

void FusionConfig::check() const {
  if (!(tau > 0.0 && tau < 1.0))
    throw DataError("tau must lie strictly between 0 and 1");
}

ProbMap fuse_probabilities(const ProbMap& head1, const ProbMap& head2_realigned) {
  if (!head1.same_extent(head2_realigned) || head1.num_classes() != head2_realigned.num_classes())
    throw DataError("shape mismatch: fused heads differ in extent or class count");
  ProbMap out(head1.height(), head1.width(), head1.num_classes(), false);
  out.pixels() = head1.pixels().cwiseMax(head2_realigned.pixels());
  return out;
}

LabelMap pseudo_label(const ProbMap& probs) {
  if (probs.num_classes() > kIgnoreLabel)
    throw DataError("too many classes for an 8-bit label map");
  LabelMap out(probs.height(), probs.width(), probs.num_classes());
  const auto& px = probs.pixels();
  auto* dst = out.pixels().data();
  for (Index i = 0; i < px.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < px.cols(); ++c)
      if (px(i, c) > px(i, best))
        best = c;
    dst[i] = static_cast<std::uint8_t>(best);
  }
  return out;
}

double confidence_fraction(const ProbMap& probs, const FusionConfig& cfg) {
  cfg.check();
  const auto confident = (probs.pixels().rowwise().maxCoeff().template cast<double>() > cfg.tau).count();
  return static_cast<double>(confident) / static_cast<double>(probs.size());
}

WeightMap weight_map(const MixMask& mask, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw DataError("weight fraction outside [0, 1]");
  WeightMap w(mask.height(), mask.width());
  w.pixels() = (mask.pixels() != 0).select(Grid<float>::Ones(mask.size(), 1), static_cast<float>(fraction));
  return w;
}

double weighted_cross_entropy(const ProbMap& pred, const LabelMap& labels, const WeightMap& weights) {
  if (!pred.same_extent(labels) || !pred.same_extent(weights))
    throw DataError("shape mismatch: prediction, labels and weights");
  const auto* y = labels.pixels().data();
  const auto* w = weights.pixels().data();
  double sum = 0.0;
  std::int64_t n = 0;
  for (Index i = 0; i < pred.size(); ++i) {
    if (y[i] == kIgnoreLabel)
      continue;
    if (y[i] >= pred.num_classes())
      throw DataError("label " + std::to_string(int(y[i])) + " exceeds prediction class count");
    const double p = std::max<double>(pred.pixels()(i, y[i]), kLogClamp);
    sum += static_cast<double>(w[i]) * std::log(p);
    ++n;
  }
  return n == 0 ? 0.0 : -sum / static_cast<double>(n);
}

double cross_entropy(const ProbMap& pred, const LabelMap& labels) {
  return weighted_cross_entropy(pred, labels, WeightMap(pred.height(), pred.width(), 1.0f));
}

PseudoLabelResult generate_pseudo_label_pair(const Segmenter& head1, const Segmenter& head2, const Image& image,
                                             const GeometricTransform& geometric,
                                             const PhotometricParams& photometric, const FusionConfig& cfg) {
  const ProbMap p1 = head1(image);
  const Image augmented = apply_photometric(photometric, apply_geometric(geometric, image));
  const ProbMap p2 = apply_geometric(invert_geometric(geometric), head2(augmented));
  if (!p1.same_extent(image) || !p2.same_extent(image))
    throw DataError("shape mismatch: segmenter output does not match the image");
  PseudoLabelResult out;
  out.fused = fuse_probabilities(p1, p2);
  out.labels = pseudo_label(out.fused);
  out.fraction = confidence_fraction(out.fused, cfg);
  return out;
}

PseudoLabelResult generate_pseudo_label_pair(const Segmenter& segmenter, const Image& image,
                                             const GeometricTransform& geometric,
                                             const PhotometricParams& photometric, const FusionConfig& cfg) {
  return generate_pseudo_label_pair(segmenter, segmenter, image, geometric, photometric, cfg);
}

}  // namespace himix
