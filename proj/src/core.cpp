#include "himix/core.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace himix {

namespace {

template <typename S>
std::optional<std::string> check_extent(const Raster<S>& r, Index channels) {
  if (r.height() < 1 || r.width() < 1)
    return "empty grid";
  if (r.pixels().rows() != r.height() * r.width())
    return "shape mismatch: data length does not equal height x width";
  if (channels > 0 && r.channels() != channels) {
    std::ostringstream os;
    os << "shape mismatch: expected " << channels << " channels, got " << r.channels();
    return os.str();
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate(const Image& image) {
  return check_extent(image, 3);
}

std::optional<std::string> validate(const LabelMap& labels) {
  if (auto err = check_extent(labels, 1))
    return err;
  if (labels.num_classes() < 1 || labels.num_classes() > kIgnoreLabel)
    return "num_classes out of range";
  const auto& px = labels.pixels();
  for (Index i = 0; i < px.rows(); ++i) {
    const auto v = px(i, 0);
    if (v != kIgnoreLabel && v >= labels.num_classes()) {
      std::ostringstream os;
      os << "class index out of range: " << int(v) << " at (" << i / labels.width() << ", "
         << i % labels.width() << ") with num_classes " << labels.num_classes();
      return os.str();
    }
  }
  return std::nullopt;
}

std::optional<std::string> validate(const ProbMap& probs) {
  if (auto err = check_extent(probs, 0))
    return err;
  const auto& px = probs.pixels();
  for (Index i = 0; i < px.rows(); ++i) {
    double sum = 0.0;
    for (Index c = 0; c < px.cols(); ++c) {
      const float v = px(i, c);
      if (!(v >= 0.0f && v <= 1.0f)) {
        std::ostringstream os;
        os << "probability out of [0,1]: " << v << " at pixel " << i << ", class " << c;
        return os.str();
      }
      sum += v;
    }
    if (probs.normalized() && std::abs(sum - 1.0) > kNormalizationTolerance) {
      std::ostringstream os;
      os << "row sum " << sum << (sum > 1.0 ? " exceeds" : " falls below")
         << " tolerance at pixel " << i;
      return os.str();
    }
  }
  return std::nullopt;
}

std::map<int, std::int64_t> class_pixel_counts(const LabelMap& labels) {
  std::array<std::int64_t, 256> tally{};
  const auto* p = labels.pixels().data();
  for (Index i = 0, n = labels.size(); i < n; ++i)
    ++tally[p[i]];
  std::map<int, std::int64_t> counts;
  for (int c = 0; c < kIgnoreLabel; ++c)
    if (tally[c] > 0)
      counts.emplace(c, tally[c]);
  return counts;
}

}  // namespace himix
