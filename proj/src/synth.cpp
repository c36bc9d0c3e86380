#include "himix/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace himix {

namespace {

constexpr std::array<std::array<int, 3>, kNumLandCoverClasses> kBaseColors = {{
    {128, 126, 118},  // background
    {182, 84, 72},    // building
    {92, 92, 96},     // road
    {38, 72, 140},    // water
    {172, 152, 112},  // barren
    {42, 98, 52},     // forest
    {148, 170, 82},   // agricultural
}};

int draw_count(Rng& rng, double expected) {
  const double whole = std::floor(expected);
  int n = static_cast<int>(whole);
  if (rng.bernoulli(expected - whole))
    ++n;
  return n;
}

std::size_t pick_weighted(double u, const std::vector<double>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u * total < acc)
      return i;
  }
  return weights.size() - 1;
}

Index span(Rng& rng, Index extent, double lo, double hi) {
  return std::clamp<Index>(std::llround(rng.uniform(lo, hi) * static_cast<double>(extent)), 1, extent);
}

SceneShape place(Rng& rng, const SceneConfig& cfg, SceneShape::Kind kind, SceneTier tier, LandCover cover, Index h,
                 Index w) {
  SceneShape s;
  s.kind = kind;
  s.tier = tier;
  s.cover = cover;
  s.height = h;
  s.width = w;
  s.y = static_cast<Index>(rng.below(static_cast<std::uint64_t>(cfg.height - h + 1)));
  s.x = static_cast<Index>(rng.below(static_cast<std::uint64_t>(cfg.width - w + 1)));
  return s;
}

}  // namespace

const char* to_string(LandCover c) {
  switch (c) {
    case LandCover::kBackground: return "background";
    case LandCover::kBuilding: return "building";
    case LandCover::kRoad: return "road";
    case LandCover::kWater: return "water";
    case LandCover::kBarren: return "barren";
    case LandCover::kForest: return "forest";
    case LandCover::kAgricultural: return "agricultural";
  }
  return "unknown";
}

void SceneConfig::check() const {
  if (height < 16 || width < 16)
    throw DataError("scene dimensions must be at least 16");
  if (!(skew >= 0.0 && skew <= 1.0))
    throw DataError("scene skew outside [0, 1]");
  for (double d : {region_density, road_density, water_density, field_density, building_density})
    if (!(d >= 0.0))
      throw DataError("scene densities must be non-negative");
  if (noise_amplitude < 0 || noise_amplitude > 127)
    throw DataError("scene noise amplitude outside [0, 127]");
}

bool SceneShape::covers(Index py, Index px) const {
  if (py < y || px < x || py >= y + height || px >= x + width)
    return false;
  if (kind == Kind::kRect)
    return true;
  const double ry = static_cast<double>(height) / 2.0;
  const double rx = static_cast<double>(width) / 2.0;
  const double dy = (static_cast<double>(py - y) + 0.5 - ry) / ry;
  const double dx = (static_cast<double>(px - x) + 0.5 - rx) / rx;
  return dy * dy + dx * dx <= 1.0;
}

std::vector<SceneShape> plan_scene(const SceneConfig& cfg, RngState rng) {
  cfg.check();
  const double area = static_cast<double>(cfg.height * cfg.width) / 4096.0;
  const double side = std::sqrt(area);
  const double urban = cfg.skew;
  const double rural = 1.0 - cfg.skew;
  std::vector<SceneShape> shapes;

  SceneShape base;
  base.tier = SceneTier::kBase;
  base.cover = urban >= 0.5 ? LandCover::kBackground : LandCover::kAgricultural;
  base.height = cfg.height;
  base.width = cfg.width;
  shapes.push_back(base);

  {
    Rng r(derive_rng(rng, 100 + static_cast<int>(SceneTier::kRegion)));
    const std::vector<LandCover> covers = {LandCover::kBackground, LandCover::kForest, LandCover::kBarren,
                                           LandCover::kAgricultural};
    const std::vector<double> weights = {2.0 * urban, 2.0 * rural, 0.6, 1.5 * rural + 0.2};
    const int n = draw_count(r, cfg.region_density * area);
    for (int i = 0; i < n; ++i) {
      const auto kind = r.bernoulli(0.5) ? SceneShape::Kind::kEllipse : SceneShape::Kind::kRect;
      const auto cover = covers[pick_weighted(r.uniform(), weights)];
      const Index h = span(r, cfg.height, 0.25, 0.6);
      const Index w = span(r, cfg.width, 0.25, 0.6);
      shapes.push_back(place(r, cfg, kind, SceneTier::kRegion, cover, h, w));
    }
  }

  {
    Rng r(derive_rng(rng, 100 + static_cast<int>(SceneTier::kMid)));
    const int roads = draw_count(r, cfg.road_density * (0.3 + urban) * side);
    for (int i = 0; i < roads; ++i) {
      const Index thickness = 2 + static_cast<Index>(r.below(3));
      if (r.bernoulli(0.5))
        shapes.push_back(place(r, cfg, SceneShape::Kind::kRect, SceneTier::kMid, LandCover::kRoad, thickness,
                               cfg.width));
      else
        shapes.push_back(place(r, cfg, SceneShape::Kind::kRect, SceneTier::kMid, LandCover::kRoad, cfg.height,
                               thickness));
    }
    const int lakes = draw_count(r, cfg.water_density * (1.2 - 0.7 * urban) * area);
    for (int i = 0; i < lakes; ++i) {
      const Index h = span(r, cfg.height, 0.1, 0.3);
      const Index w = span(r, cfg.width, 0.1, 0.3);
      shapes.push_back(place(r, cfg, SceneShape::Kind::kEllipse, SceneTier::kMid, LandCover::kWater, h, w));
    }
    const int fields = draw_count(r, cfg.field_density * rural * area);
    for (int i = 0; i < fields; ++i) {
      const Index h = span(r, cfg.height, 0.1, 0.3);
      const Index w = span(r, cfg.width, 0.1, 0.3);
      const auto cover = r.bernoulli(0.75) ? LandCover::kAgricultural : LandCover::kBarren;
      shapes.push_back(place(r, cfg, SceneShape::Kind::kRect, SceneTier::kMid, cover, h, w));
    }
  }

  {
    Rng r(derive_rng(rng, 100 + static_cast<int>(SceneTier::kSmall)));
    const int buildings = draw_count(r, cfg.building_density * (0.1 + 0.9 * urban) * area);
    for (int i = 0; i < buildings; ++i) {
      const Index h = 2 + static_cast<Index>(r.below(5));
      const Index w = 2 + static_cast<Index>(r.below(5));
      shapes.push_back(place(r, cfg, SceneShape::Kind::kRect, SceneTier::kSmall, LandCover::kBuilding, h, w));
    }
  }
  return shapes;
}

Scene render_scene(const SceneConfig& cfg, const std::vector<SceneShape>& shapes, RngState rng) {
  cfg.check();
  Scene scene{Image(cfg.height, cfg.width), LabelMap(cfg.height, cfg.width, kNumLandCoverClasses)};
  for (const auto& s : shapes) {
    const Index y1 = std::min(cfg.height, s.y + s.height);
    const Index x1 = std::min(cfg.width, s.x + s.width);
    for (Index y = std::max<Index>(0, s.y); y < y1; ++y)
      for (Index x = std::max<Index>(0, s.x); x < x1; ++x)
        if (s.covers(y, x))
          scene.labels(y, x) = static_cast<std::uint8_t>(s.cover);
  }

  Rng r(derive_rng(rng, 200));
  const auto amp = static_cast<std::uint64_t>(cfg.noise_amplitude);
  auto& px = scene.image.pixels();
  const auto* cls = scene.labels.pixels().data();
  for (Index i = 0; i < px.rows(); ++i) {
    const auto& color = kBaseColors[cls[i]];
    for (Index c = 0; c < 3; ++c) {
      const auto jitter = static_cast<int>(r.below(2 * amp + 1)) - static_cast<int>(amp);
      px(i, c) = static_cast<std::uint8_t>(std::clamp(color[static_cast<std::size_t>(c)] + jitter, 0, 255));
    }
  }
  return scene;
}

Scene generate_scene(const SceneConfig& cfg, RngState rng) {
  return render_scene(cfg, plan_scene(cfg, rng), rng);
}

void MockSegmenterConfig::check(int num_classes) const {
  if (!(noise >= 0.0 && noise <= 1.0))
    throw DataError("segmenter noise outside [0, 1]");
  if (!(sharpness > 0.0))
    throw DataError("segmenter sharpness must be positive");
  if (!confusion_bias.empty()) {
    if (static_cast<int>(confusion_bias.size()) != num_classes)
      throw DataError("confusion bias needs one entry per class");
    for (double b : confusion_bias)
      if (!(b >= 0.0))
        throw DataError("confusion bias entries must be non-negative");
  }
}

ProbMap mock_segment(const MockSegmenterConfig& cfg, const Image& image, const LabelMap& truth, RngState rng) {
  if (!image.same_extent(truth))
    throw DataError("shape mismatch: image and truth labels");
  const int nc = truth.num_classes();
  cfg.check(nc);
  ProbMap out(truth.height(), truth.width(), nc);
  auto& px = out.pixels();
  const auto* cls = truth.pixels().data();

  if (cfg.noise == 0.0) {
    for (Index i = 0; i < px.rows(); ++i) {
      if (cls[i] == kIgnoreLabel)
        px.row(i).setConstant(1.0f / static_cast<float>(nc));
      else
        px(i, cls[i]) = 1.0f;
    }
    return out;
  }

  std::vector<double> weights(static_cast<std::size_t>(nc), 1.0);
  for (std::size_t c = 0; c < cfg.confusion_bias.size(); ++c)
    weights[c] += cfg.confusion_bias[c];

  Rng r(rng);
  std::vector<double> logits(static_cast<std::size_t>(nc));
  for (Index i = 0; i < px.rows(); ++i) {
    const double u_replace = r.uniform();
    const double u_class = r.uniform();
    for (auto& l : logits)
      l = r.uniform() * cfg.noise;
    if (cls[i] == kIgnoreLabel) {
      px.row(i).setConstant(1.0f / static_cast<float>(nc));
      continue;
    }
    const std::size_t peak =
        u_replace < cfg.noise ? pick_weighted(u_class, weights) : static_cast<std::size_t>(cls[i]);
    logits[peak] += cfg.sharpness;
    const double top = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (auto& l : logits) {
      l = std::exp(l - top);
      z += l;
    }
    for (int c = 0; c < nc; ++c)
      px(i, c) = static_cast<float>(logits[static_cast<std::size_t>(c)] / z);
  }
  return out;
}

const char* to_string(MixStrategy s) {
  return s == MixStrategy::kHimix ? "himix" : "classmix";
}

MixStrategy parse_mix_strategy(const std::string& name) {
  if (name == "himix")
    return MixStrategy::kHimix;
  if (name == "classmix")
    return MixStrategy::kClassmix;
  throw DataError("unknown mix strategy: " + name);
}

ScenePair generate_scene_pair(const SceneConfig& source, const SceneConfig& target, RngState rng) {
  auto s = generate_scene(source, derive_rng(rng, rng_tag::kSourceScene));
  auto t = generate_scene(target, derive_rng(rng, rng_tag::kTargetScene));
  return {std::move(s.image), std::move(s.labels), std::move(t.image), std::move(t.labels)};
}

}  // namespace himix
