#pragma once

#include "himix/core.hpp"
#include "himix/instances.hpp"
#include "himix/rng.hpp"

#include <cstdint>
#include <vector>

namespace himix {

/// Binary mixing mask: 1 takes the source pixel, 0 the target pixel.
class MixMask : public Raster<std::uint8_t> {
 public:
  MixMask() = default;
  MixMask(Index height, Index width, std::uint8_t fill = 0) : Raster(height, width, 1, fill) {}

  std::int64_t count() const;
  /// Fraction of pixels taken from the source.
  double source_fraction() const { return static_cast<double>(count()) / static_cast<double>(size()); }
};

/// One instance's mask layer. `pixels` lists the covered pixel indices in
/// ascending raster order; its length is the pixel count.
struct Layer {
  std::uint32_t instance_id = 0;
  Domain domain = Domain::kSource;
  std::vector<std::uint32_t> pixels;

  std::int64_t pixel_count() const { return static_cast<std::int64_t>(pixels.size()); }
};

/// Strict weak order on layers by precedence. The layer that compares less
/// sits higher: fewer pixels first, then source before target, then lower id.
bool on_top_of(const Layer& a, const Layer& b);

/// Layers ordered bottom (index 0) to top: the precedence order reversed, so
/// the largest layer is at the bottom and the top-most layer wins a pixel.
struct LayerStack {
  Index height = 0;
  Index width = 0;
  std::vector<Layer> layers;
};

/// ceil(n/2) distinct source instance ids drawn uniformly, ascending.
std::vector<std::uint32_t> select_source_instances(const InstanceMap& source, RngState rng);

/// One layer per selected source instance plus one per target instance.
LayerStack build_layer_stack(const InstanceMap& source, const std::vector<std::uint32_t>& selected,
                             const InstanceMap& target);

/// Sort layers bottom-to-top in place.
void sort_layers(LayerStack& stack);

/// Index of the top-most layer covering each pixel (the stack must already be
/// sorted). Throws DataError("incomplete coverage") for uncovered pixels.
Raster<std::int32_t> reduce_to_index(const LayerStack& stack);

/// 1 where the winning layer is a source layer.
MixMask binarize(const LayerStack& stack, const Raster<std::int32_t>& winners);

/// binarize(stack, reduce_to_index(stack)).
MixMask reduce_to_mask(const LayerStack& stack);

struct MixedPair {
  Image image;
  LabelMap labels;
};

/// Per-pixel select between source and target; exact copies.
MixedPair blend(const Image& source_image, const Image& target_image, const LabelMap& source_labels,
                const LabelMap& target_labels, const MixMask& mask);

/// Baseline: mask of ceil(K/2) of the K classes present in the source labels.
MixMask classmix_mask(const LabelMap& source_labels, RngState rng);

struct HimixResult {
  MixedPair mixed;
  MixMask mask;
};

/// Full pipeline: CCL on both label maps, disjoint ids, uniform source
/// selection, hierarchical layering, reduction, blend.
HimixResult himix(const Image& source_image, const LabelMap& source_labels, const Image& target_image,
                  const LabelMap& target_labels, Connectivity connectivity, RngState rng);

}  // namespace himix
