#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace himix {

using Index = Eigen::Index;

/// Row-major dense array; the storage behind every grid in the library.
template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::uint8_t kIgnoreLabel = 255;

/// Thrown when input data violates a type invariant or two inputs disagree
/// in shape. The CLI maps it to the data-error exit code.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An H x W grid with `channels` values per pixel.
///
/// Pixels are stored as rows of an (H*W) x channels row-major array, so the
/// memory layout is row-major over pixels with the channel index fastest.
/// That is the layout of RGB8 images and of the PMAP file format.
template <typename Scalar>
class Raster {
 public:
  using value_type = Scalar;

  Raster() = default;
  Raster(Index height, Index width, Index channels, Scalar fill = Scalar{})
      : height_(height), width_(width), pixels_(Grid<Scalar>::Constant(height * width, channels, fill)) {
    if (height < 1 || width < 1 || channels < 1)
      throw DataError("raster dimensions must be positive");
  }

  Index height() const { return height_; }
  Index width() const { return width_; }
  Index channels() const { return pixels_.cols(); }
  Index size() const { return height_ * width_; }

  Scalar& operator()(Index y, Index x, Index c = 0) { return pixels_(y * width_ + x, c); }
  Scalar operator()(Index y, Index x, Index c = 0) const { return pixels_(y * width_ + x, c); }

  /// (H*W) x channels view; row i is pixel i in raster order.
  Grid<Scalar>& pixels() { return pixels_; }
  const Grid<Scalar>& pixels() const { return pixels_; }

  /// H x W view of a single-channel raster.
  auto plane() {
    return Eigen::Map<Grid<Scalar>>(pixels_.data(), height_, width_);
  }
  auto plane() const {
    return Eigen::Map<const Grid<Scalar>>(pixels_.data(), height_, width_);
  }

  bool same_extent(Index h, Index w) const { return height_ == h && width_ == w; }
  template <typename Other>
  bool same_extent(const Raster<Other>& other) const {
    return same_extent(other.height(), other.width());
  }

  bool operator==(const Raster& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           pixels_.cols() == other.pixels_.cols() && (pixels_ == other.pixels_).all();
  }

  /// Replace the contents with another buffer of matching pixel count.
  void assign(Index height, Index width, Grid<Scalar> pixels) {
    if (pixels.rows() != height * width)
      throw DataError("pixel buffer does not match raster extent");
    height_ = height;
    width_ = width;
    pixels_ = std::move(pixels);
  }

 private:
  Index height_ = 0;
  Index width_ = 0;
  Grid<Scalar> pixels_;
};

/// 8-bit RGB image.
class Image : public Raster<std::uint8_t> {
 public:
  Image() = default;
  Image(Index height, Index width, std::uint8_t fill = 0) : Raster(height, width, 3, fill) {}
};

/// Per-pixel class indices; `kIgnoreLabel` marks unlabeled pixels.
class LabelMap : public Raster<std::uint8_t> {
 public:
  LabelMap() = default;
  LabelMap(Index height, Index width, int num_classes, std::uint8_t fill = 0)
      : Raster(height, width, 1, fill), num_classes_(num_classes) {}

  int num_classes() const { return num_classes_; }
  void set_num_classes(int n) { num_classes_ = n; }

  bool operator==(const LabelMap& other) const {
    return num_classes_ == other.num_classes_ && Raster::operator==(other);
  }

 private:
  int num_classes_ = 0;
};

/// Per-pixel class probabilities, one float per class.
class ProbMap : public Raster<float> {
 public:
  ProbMap() = default;
  ProbMap(Index height, Index width, int num_classes, bool normalized = true)
      : Raster(height, width, num_classes, 0.0f), normalized_(normalized) {}

  int num_classes() const { return static_cast<int>(channels()); }
  /// Whether each pixel's probabilities sum to one. Fused maps do not.
  bool normalized() const { return normalized_; }
  void set_normalized(bool n) { normalized_ = n; }

  bool operator==(const ProbMap& other) const {
    return normalized_ == other.normalized_ && Raster::operator==(other);
  }

 private:
  bool normalized_ = true;
};

inline constexpr double kNormalizationTolerance = 1e-5;

/// First violated invariant as a message, or nullopt when the grid is valid.
std::optional<std::string> validate(const Image& image);
std::optional<std::string> validate(const LabelMap& labels);
std::optional<std::string> validate(const ProbMap& probs);

/// Throws DataError carrying validate()'s message.
template <typename G>
void require_valid(const G& grid) {
  if (auto err = validate(grid))
    throw DataError(*err);
}

/// Pixel count per class over non-ignore pixels; absent classes are omitted.
std::map<int, std::int64_t> class_pixel_counts(const LabelMap& labels);

}  // namespace himix
