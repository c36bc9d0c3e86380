#include "himix/augment.hpp"

#include <algorithm>
#include <cmath>

namespace himix {

namespace {

std::uint8_t clamp_round(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double d = mx - mn;
  v = mx;
  s = mx > 0.0 ? d / mx : 0.0;
  if (d == 0.0) {
    h = 0.0;
  } else if (mx == r) {
    h = 60.0 * std::fmod((g - b) / d, 6.0);
  } else if (mx == g) {
    h = 60.0 * ((b - r) / d + 2.0);
  } else {
    h = 60.0 * ((r - g) / d + 4.0);
  }
  if (h < 0.0)
    h += 360.0;
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r1 = 0, g1 = 0, b1 = 0;
  switch (static_cast<int>(hp) % 6) {
    case 0: r1 = c; g1 = x; break;
    case 1: r1 = x; g1 = c; break;
    case 2: g1 = c; b1 = x; break;
    case 3: g1 = x; b1 = c; break;
    case 4: r1 = x; b1 = c; break;
    default: r1 = c; b1 = x; break;
  }
  const double m = v - c;
  r = r1 + m;
  g = g1 + m;
  b = b1 + m;
}

void check_scale(double scale) {
  if (!(scale >= kMinResizeScale && scale <= kMaxResizeScale))
    throw DataError("resize scale outside [0.5, 2.0]");
}

}  // namespace

std::array<GeometricTransform, 16> all_geometric_transforms() {
  std::array<GeometricTransform, 16> out{};
  std::size_t i = 0;
  for (int h = 0; h < 2; ++h)
    for (int v = 0; v < 2; ++v)
      for (int k = 0; k < 4; ++k)
        out[i++] = {h != 0, v != 0, k};
  return out;
}

GeometricTransform sample_geometric(Rng& rng) {
  GeometricTransform t;
  t.hflip = rng.bernoulli(0.5);
  t.vflip = rng.bernoulli(0.5);
  const bool rotate = rng.bernoulli(0.5);
  const auto k = static_cast<int>(rng.below(4));
  t.rot90_k = rotate ? k : 0;
  return t;
}

GeometricTransform invert_geometric(const GeometricTransform& t) {
  // R^k V^v H^h inverts to H^h V^v R^-k. A reflection conjugates a rotation
  // to its inverse, so moving R^-k past an odd number of flips negates it.
  const int k = ((t.rot90_k % 4) + 4) % 4;
  const bool odd = t.hflip != t.vflip;
  return {t.hflip, t.vflip, odd ? k : (4 - k) % 4};
}

std::pair<Index, Index> transformed_extent(const GeometricTransform& t, Index h, Index w) {
  return (t.rot90_k % 2 != 0) ? std::pair{w, h} : std::pair{h, w};
}

PhotometricParams sample_photometric(Rng& rng, const PhotometricRanges& ranges) {
  PhotometricParams p;
  p.brightness = rng.uniform(-ranges.brightness, ranges.brightness);
  p.contrast = rng.uniform(1.0 - ranges.contrast, 1.0 + ranges.contrast);
  p.saturation = rng.uniform(1.0 - ranges.saturation, 1.0 + ranges.saturation);
  p.hue = rng.uniform(-ranges.hue, ranges.hue);
  return p;
}

Image apply_photometric(const PhotometricParams& params, const Image& image) {
  Image out = image;
  if (params.is_identity())
    return out;
  auto& px = out.pixels();
  const double shift = 255.0 * params.brightness;
  const bool hsv = params.saturation != 1.0 || params.hue != 0.0;
  for (Index i = 0; i < px.rows(); ++i) {
    std::array<double, 3> rgb{};
    for (Index c = 0; c < 3; ++c) {
      double v = px(i, c);
      if (params.brightness != 0.0)
        v = clamp_round(v + shift);
      if (params.contrast != 1.0)
        v = clamp_round((v - 128.0) * params.contrast + 128.0);
      rgb[static_cast<std::size_t>(c)] = v;
    }
    if (hsv) {
      double h, s, v;
      rgb_to_hsv(rgb[0] / 255.0, rgb[1] / 255.0, rgb[2] / 255.0, h, s, v);
      s = std::clamp(s * params.saturation, 0.0, 1.0);
      h = std::fmod(h + params.hue, 360.0);
      if (h < 0.0)
        h += 360.0;
      double r, g, b;
      hsv_to_rgb(h, s, v, r, g, b);
      rgb = {r * 255.0, g * 255.0, b * 255.0};
    }
    for (Index c = 0; c < 3; ++c)
      px(i, c) = clamp_round(rgb[static_cast<std::size_t>(c)]);
  }
  return out;
}

std::pair<Index, Index> resized_extent(Index h, Index w, double scale) {
  check_scale(scale);
  const auto oh = std::max<Index>(1, std::llround(static_cast<double>(h) * scale));
  const auto ow = std::max<Index>(1, std::llround(static_cast<double>(w) * scale));
  return {oh, ow};
}

Image resize(const Image& image, double scale) {
  const auto [oh, ow] = resized_extent(image.height(), image.width(), scale);
  const Index h = image.height();
  const Index w = image.width();
  const double ry = static_cast<double>(h) / static_cast<double>(oh);
  const double rx = static_cast<double>(w) / static_cast<double>(ow);
  Image out(oh, ow);
  for (Index y = 0; y < oh; ++y) {
    const double sy = std::clamp((static_cast<double>(y) + 0.5) * ry - 0.5, 0.0, static_cast<double>(h - 1));
    const auto y0 = static_cast<Index>(std::floor(sy));
    const Index y1 = std::min(y0 + 1, h - 1);
    const double fy = sy - static_cast<double>(y0);
    for (Index x = 0; x < ow; ++x) {
      const double sx = std::clamp((static_cast<double>(x) + 0.5) * rx - 0.5, 0.0, static_cast<double>(w - 1));
      const auto x0 = static_cast<Index>(std::floor(sx));
      const Index x1 = std::min(x0 + 1, w - 1);
      const double fx = sx - static_cast<double>(x0);
      for (Index c = 0; c < 3; ++c) {
        const double top = (1.0 - fx) * image(y0, x0, c) + fx * image(y0, x1, c);
        const double bottom = (1.0 - fx) * image(y1, x0, c) + fx * image(y1, x1, c);
        out(y, x, c) = clamp_round((1.0 - fy) * top + fy * bottom);
      }
    }
  }
  return out;
}

LabelMap resize(const LabelMap& labels, double scale) {
  const auto [oh, ow] = resized_extent(labels.height(), labels.width(), scale);
  const Index h = labels.height();
  const Index w = labels.width();
  LabelMap out(oh, ow, labels.num_classes());
  for (Index y = 0; y < oh; ++y) {
    const Index sy = std::min<Index>(h - 1, static_cast<Index>((static_cast<double>(y) + 0.5) * h / oh));
    for (Index x = 0; x < ow; ++x) {
      const Index sx = std::min<Index>(w - 1, static_cast<Index>((static_cast<double>(x) + 0.5) * w / ow));
      out(y, x) = labels(sy, sx);
    }
  }
  return out;
}

}  // namespace himix
