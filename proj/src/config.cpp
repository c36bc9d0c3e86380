#include "himix/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>

namespace himix {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size())
      return d;
  } catch (const std::exception&) {
  }
  throw DataError("config key '" + key + "' expects a number, got '" + v + "'");
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw DataError("config key '" + key + "' expects a non-negative integer, got '" + v + "'");
  return out;
}

}  // namespace

SceneConfig RunConfig::rural_scene() {
  SceneConfig s;
  s.skew = 0.0;
  return s;
}

SceneConfig RunConfig::urban_scene() {
  SceneConfig s;
  s.skew = 1.0;
  return s;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "seed") {
    seed = to_u64(key, value);
  } else if (key == "connectivity") {
    const auto c = to_u64(key, value);
    if (c != 4 && c != 8)
      throw DataError("connectivity must be 4 or 8");
    connectivity = c == 4 ? Connectivity::kFour : Connectivity::kEight;
  } else if (key == "tau") {
    tau = to_double(key, value);
  } else if (key == "strategy") {
    strategy = parse_mix_strategy(value);
  } else if (key == "num_classes") {
    num_classes = static_cast<int>(to_u64(key, value));
  } else if (key == "trials") {
    trials = to_u64(key, value);
  } else if (key == "threads") {
    threads = static_cast<unsigned>(to_u64(key, value));
  } else if (key == "brightness") {
    photometric.brightness = to_double(key, value);
  } else if (key == "contrast") {
    photometric.contrast = to_double(key, value);
  } else if (key == "saturation") {
    photometric.saturation = to_double(key, value);
  } else if (key == "hue") {
    photometric.hue = to_double(key, value);
  } else if (key == "height") {
    source_scene.height = target_scene.height = static_cast<Index>(to_u64(key, value));
  } else if (key == "width") {
    source_scene.width = target_scene.width = static_cast<Index>(to_u64(key, value));
  } else if (key == "source_skew") {
    source_scene.skew = to_double(key, value);
  } else if (key == "target_skew") {
    target_scene.skew = to_double(key, value);
  } else if (key == "region_density") {
    source_scene.region_density = target_scene.region_density = to_double(key, value);
  } else if (key == "road_density") {
    source_scene.road_density = target_scene.road_density = to_double(key, value);
  } else if (key == "water_density") {
    source_scene.water_density = target_scene.water_density = to_double(key, value);
  } else if (key == "field_density") {
    source_scene.field_density = target_scene.field_density = to_double(key, value);
  } else if (key == "building_density") {
    source_scene.building_density = target_scene.building_density = to_double(key, value);
  } else if (key == "noise_amplitude") {
    source_scene.noise_amplitude = target_scene.noise_amplitude = static_cast<int>(to_u64(key, value));
  } else if (key == "segmenter_noise") {
    segmenter.noise = to_double(key, value);
  } else if (key == "segmenter_sharpness") {
    segmenter.sharpness = to_double(key, value);
  } else {
    throw DataError("unknown config key '" + key + "'");
  }
}

void RunConfig::check() const {
  FusionConfig{tau}.check();
  if (num_classes < 1 || num_classes > 254)
    throw DataError("num_classes must lie in [1, 254]");
  if (trials == 0)
    throw DataError("trials must be positive");
  if (!(photometric.brightness >= 0.0 && photometric.brightness <= 1.0))
    throw DataError("brightness magnitude outside [0, 1]");
  if (!(photometric.contrast >= 0.0 && photometric.contrast < 1.0) ||
      !(photometric.saturation >= 0.0 && photometric.saturation < 1.0))
    throw DataError("contrast and saturation magnitudes must lie in [0, 1)");
  if (!(photometric.hue >= 0.0 && photometric.hue <= 180.0))
    throw DataError("hue magnitude outside [0, 180]");
  source_scene.check();
  target_scene.check();
  segmenter.check(kNumLandCoverClasses);
}

BenchConfig RunConfig::bench_config() const {
  BenchConfig b;
  b.source = source_scene;
  b.target = target_scene;
  b.segmenter = segmenter;
  b.episode.connectivity = connectivity;
  b.episode.fusion.tau = tau;
  b.episode.photometric = photometric;
  return b;
}

RunConfig parse_run_config(std::istream& in, RunConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError("config line " + std::to_string(lineno) + ": expected key = value");
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open config " + path.string());
  return parse_run_config(in, std::move(base));
}

}  // namespace himix
