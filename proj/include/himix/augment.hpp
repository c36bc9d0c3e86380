#pragma once

#include "himix/core.hpp"
#include "himix/rng.hpp"

#include <array>
#include <utility>

namespace himix {

/// Dihedral pixel permutation, applied as hflip, then vflip, then rot90_k
/// quarter turns counter-clockwise.
struct GeometricTransform {
  bool hflip = false;
  bool vflip = false;
  int rot90_k = 0;

  bool is_identity() const { return !hflip && !vflip && rot90_k % 4 == 0; }
  bool operator==(const GeometricTransform&) const = default;
};

/// All 16 (hflip, vflip, rot90_k) combinations.
std::array<GeometricTransform, 16> all_geometric_transforms();

/// hflip and vflip each with probability 0.5; with probability 0.5 a quarter
/// turn count drawn uniformly from {0..3}, otherwise 0.
GeometricTransform sample_geometric(Rng& rng);

GeometricTransform invert_geometric(const GeometricTransform& t);

/// Output extent of t applied to an h x w grid.
std::pair<Index, Index> transformed_extent(const GeometricTransform& t, Index h, Index w);

/// Permute pixels of any raster type; channel values move with their pixel.
template <typename G>
G apply_geometric(const GeometricTransform& t, const G& grid) {
  if (t.is_identity())
    return grid;
  using Scalar = typename G::value_type;
  const Index h = grid.height();
  const Index w = grid.width();
  const Index ch = grid.channels();
  const int k = ((t.rot90_k % 4) + 4) % 4;
  const auto [oh, ow] = transformed_extent(t, h, w);

  Grid<Scalar> out(h * w, ch);
  const Grid<Scalar>& in = grid.pixels();
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      Index yy = t.vflip ? h - 1 - y : y;
      Index xx = t.hflip ? w - 1 - x : x;
      Index ch_h = h, ch_w = w;
      for (int r = 0; r < k; ++r) {
        // Counter-clockwise quarter turn of a ch_h x ch_w grid.
        const Index ny = ch_w - 1 - xx;
        const Index nx = yy;
        yy = ny;
        xx = nx;
        std::swap(ch_h, ch_w);
      }
      out.row(yy * ow + xx) = in.row(y * w + x);
    }
  }
  G result = grid;
  result.assign(oh, ow, std::move(out));
  return result;
}

/// Color jitter. Identity values leave an image bit-exact.
struct PhotometricParams {
  double brightness = 0.0;  // added as 255 * brightness
  double contrast = 1.0;    // scales around 128
  double saturation = 1.0;  // scales HSV saturation
  double hue = 0.0;         // degrees added to HSV hue

  bool is_identity() const { return brightness == 0.0 && contrast == 1.0 && saturation == 1.0 && hue == 0.0; }
  bool operator==(const PhotometricParams&) const = default;
};

/// Symmetric jitter magnitudes used by sample_photometric.
struct PhotometricRanges {
  double brightness = 0.2;
  double contrast = 0.2;
  double saturation = 0.2;
  double hue = 10.0;
};

PhotometricParams sample_photometric(Rng& rng, const PhotometricRanges& ranges = {});

/// Brightness, contrast, then saturation and hue in HSV; clamped to [0, 255].
Image apply_photometric(const PhotometricParams& params, const Image& image);

inline constexpr double kMinResizeScale = 0.5;
inline constexpr double kMaxResizeScale = 2.0;

/// Output extent max(1, round(h * scale)) x max(1, round(w * scale)).
std::pair<Index, Index> resized_extent(Index h, Index w, double scale);

/// Bilinear, half-pixel centers.
Image resize(const Image& image, double scale);
/// Nearest neighbour; never invents classes.
LabelMap resize(const LabelMap& labels, double scale);

struct CropRect {
  Index y = 0;
  Index x = 0;
  Index height = 0;
  Index width = 0;
};

template <typename G>
G crop(const G& grid, const CropRect& rect) {
  if (rect.height < 1 || rect.width < 1 || rect.y < 0 || rect.x < 0 || rect.y + rect.height > grid.height() ||
      rect.x + rect.width > grid.width())
    throw DataError("crop rectangle out of bounds");
  using Scalar = typename G::value_type;
  Grid<Scalar> out(rect.height * rect.width, grid.channels());
  for (Index y = 0; y < rect.height; ++y)
    out.middleRows(y * rect.width, rect.width) =
        grid.pixels().middleRows((rect.y + y) * grid.width() + rect.x, rect.width);
  G result = grid;
  result.assign(rect.height, rect.width, std::move(out));
  return result;
}

}  // namespace himix
