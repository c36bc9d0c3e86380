#include "himix/cli.hpp"

#include "himix/augment.hpp"
#include "himix/config.hpp"
#include "himix/fusion.hpp"
#include "himix/instances.hpp"
#include "himix/io.hpp"
#include "himix/metrics.hpp"
#include "himix/mixing.hpp"
#include "himix/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace himix {

namespace fs = std::filesystem;

namespace {

struct GlobalFlags {
  std::string seed;
  std::string config;
  std::string connectivity;
  std::string tau;
  std::string out = ".";
  bool colorize = false;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8f", v);
  return buf;
}

GeometricTransform parse_transform(const std::string& text) {
  GeometricTransform t;
  int h = 0, v = 0, k = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> h >> c1 >> v >> c2 >> k) || c1 != ',' || c2 != ',' || h < 0 || h > 1 || v < 0 || v > 1 || k < 0 ||
      k > 3)
    throw DataError("transform must be 'hflip,vflip,rot90_k', e.g. 1,0,3");
  t.hflip = h == 1;
  t.vflip = v == 1;
  t.rot90_k = k;
  return t;
}

Raster<std::uint8_t> mask_plane(const MixMask& mask) {
  return mask;
}

MixMask load_mask_png(const fs::path& path) {
  const auto plane = load_gray8_png(path);
  MixMask mask(plane.height(), plane.width());
  for (Index i = 0; i < plane.size(); ++i) {
    const auto v = plane.pixels()(i, 0);
    if (v != 0 && v != 1)
      throw DataError(path.string() + ": mask values must be 0 or 1");
    mask.pixels()(i, 0) = v;
  }
  return mask;
}

void save_labels(const LabelMap& labels, const fs::path& dir, const std::string& stem, bool colorized) {
  save_label_png(labels, dir / (stem + ".png"));
  if (colorized)
    save_image_png(colorize(labels), dir / (stem + "_color.png"));
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical instance mixing and twin-head pseudo-label tools", "himix"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(HIMIX_VERSION));

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--config", g.config, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--connectivity", g.connectivity, "CCL neighbourhood, 4 or 8");
  app.add_option("--tau", g.tau, "Confidence threshold");
  app.add_option("--out", g.out, "Output directory");
  app.add_flag("--colorize", g.colorize, "Also write palette PNGs of label maps");

  std::string num_classes;
  auto add_num_classes = [&](CLI::App* sub) {
    sub->add_option("--num-classes", num_classes, "Number of classes in label PNGs");
  };

  auto* instances_cmd = app.add_subcommand("instances", "Connected components of a label PNG");
  std::string label_path;
  instances_cmd->add_option("label", label_path, "Label PNG")->required()->check(CLI::ExistingFile);
  add_num_classes(instances_cmd);

  auto* mix_cmd = app.add_subcommand("mix", "HIMix of a source pair onto a target pair");
  std::string xs, ys, xt, yt;
  mix_cmd->add_option("source_image", xs)->required()->check(CLI::ExistingFile);
  mix_cmd->add_option("source_label", ys)->required()->check(CLI::ExistingFile);
  mix_cmd->add_option("target_image", xt)->required()->check(CLI::ExistingFile);
  mix_cmd->add_option("target_label", yt)->required()->check(CLI::ExistingFile);
  add_num_classes(mix_cmd);

  auto* classmix_cmd = app.add_subcommand("classmix", "ClassMix baseline mask (and blend when images are given)");
  std::vector<std::string> classmix_inputs;
  classmix_cmd->add_option("inputs", classmix_inputs, "source_label [source_image target_image target_label]")
      ->required()
      ->check(CLI::ExistingFile);
  add_num_classes(classmix_cmd);

  auto* fuse_cmd = app.add_subcommand("fuse", "Fuse two PMAP head outputs into a pseudo-label");
  std::string p1_path, p2_path, head2_transform;
  fuse_cmd->add_option("head1", p1_path, "PMAP of head 1")->required()->check(CLI::ExistingFile);
  fuse_cmd->add_option("head2", p2_path, "PMAP of head 2")->required()->check(CLI::ExistingFile);
  fuse_cmd->add_option("--head2-transform", head2_transform,
                       "Geometric transform head 2 saw, as hflip,vflip,rot90_k; undone before fusing");

  auto* weights_cmd = app.add_subcommand("weights", "Weight map from a mask PNG and a confidence fraction");
  std::string mask_path;
  double fraction = 0.0;
  weights_cmd->add_option("mask", mask_path, "Mask PNG with values 0/1")->required()->check(CLI::ExistingFile);
  weights_cmd->add_option("--fraction", fraction, "Target-region weight")->required();

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic source/target scene pair");

  auto* episode_cmd = app.add_subcommand("episode", "One twin-head mixing episode on a synthetic pair");
  std::string strategy;
  episode_cmd->add_option("--strategy", strategy, "himix or classmix");

  auto* bench_cmd = app.add_subcommand("bench", "ClassMix vs HIMix domain balance comparison");
  std::string trials, threads;
  bench_cmd->add_option("--trials", trials, "Trials per strategy");
  bench_cmd->add_option("--threads", threads, "Worker threads (capped by HIMIX_THREADS)");

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << HIMIX_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    RunConfig cfg;
    if (!g.config.empty())
      cfg = load_run_config(g.config, cfg);
    auto override_key = [&](const char* key, const std::string& v) {
      if (!v.empty())
        cfg.set(key, v);
    };
    override_key("seed", g.seed);
    override_key("connectivity", g.connectivity);
    override_key("tau", g.tau);
    override_key("num_classes", num_classes);
    override_key("strategy", strategy);
    override_key("trials", trials);
    override_key("threads", threads);
    cfg.check();

    const fs::path out_dir = g.out;
    fs::create_directories(out_dir);

    if (*instances_cmd) {
      const auto labels = load_label_png(label_path, cfg.num_classes);
      const auto inst = extract_instances(labels, cfg.connectivity, Domain::kSource);
      save_instances(inst, out_dir / "instances.png", out_dir / "instances.csv");
      out << inst.instance_count() << " instances\n";
    } else if (*mix_cmd) {
      const auto source_image = load_image_png(xs);
      const auto source_labels = load_label_png(ys, cfg.num_classes);
      const auto target_image = load_image_png(xt);
      const auto target_labels = load_label_png(yt, cfg.num_classes);
      const auto result =
          himix(source_image, source_labels, target_image, target_labels, cfg.connectivity, cfg.rng());
      save_image_png(result.mixed.image, out_dir / "mixed_image.png");
      save_labels(result.mixed.labels, out_dir, "mixed_label", g.colorize);
      save_gray8_png(mask_plane(result.mask), out_dir / "mask.png");
      out << "source_fraction " << format_double(result.mask.source_fraction()) << "\n";
    } else if (*classmix_cmd) {
      if (classmix_inputs.size() != 1 && classmix_inputs.size() != 4) {
        err << "error: classmix takes a source label, optionally followed by source image, target image and "
               "target label\n\n"
            << app.help();
        return kExitUsage;
      }
      const auto source_labels = load_label_png(classmix_inputs[0], cfg.num_classes);
      const auto mask = classmix_mask(source_labels, cfg.rng());
      save_gray8_png(mask_plane(mask), out_dir / "mask.png");
      if (classmix_inputs.size() == 4) {
        const auto mixed = blend(load_image_png(classmix_inputs[1]), load_image_png(classmix_inputs[2]),
                                 source_labels, load_label_png(classmix_inputs[3], cfg.num_classes), mask);
        save_image_png(mixed.image, out_dir / "mixed_image.png");
        save_labels(mixed.labels, out_dir, "mixed_label", g.colorize);
      }
      out << "source_fraction " << format_double(mask.source_fraction()) << "\n";
    } else if (*fuse_cmd) {
      const auto p1 = load_pmap(p1_path);
      auto p2 = load_pmap(p2_path);
      if (!head2_transform.empty())
        p2 = apply_geometric(invert_geometric(parse_transform(head2_transform)), p2);
      require_valid(p1);
      require_valid(p2);
      const auto fused = fuse_probabilities(p1, p2);
      const auto labels = pseudo_label(fused);
      const double conf = confidence_fraction(fused, FusionConfig{cfg.tau});
      save_pmap(fused, out_dir / "fused.pmap");
      save_labels(labels, out_dir, "pseudo_label", g.colorize);
      write_file_atomic(out_dir / "confidence.txt", format_double(conf) + "\n");
      out << "confidence_fraction " << format_double(conf) << "\n";
    } else if (*weights_cmd) {
      const auto mask = load_mask_png(mask_path);
      const auto w = weight_map(mask, fraction);
      ProbMap as_pmap(w.height(), w.width(), 1, false);
      as_pmap.pixels() = w.pixels();
      save_pmap(as_pmap, out_dir / "weights.pmap");
      Raster<std::uint8_t> view(w.height(), w.width(), 1);
      view.pixels() = (w.pixels() * 255.0f).round().cast<std::uint8_t>();
      save_gray8_png(view, out_dir / "weights.png");
      out << "source_fraction " << format_double(mask.source_fraction()) << "\n";
    } else if (*synth_cmd) {
      const auto pair = generate_scene_pair(cfg.source_scene, cfg.target_scene, cfg.rng());
      save_image_png(pair.source_image, out_dir / "source_image.png");
      save_labels(pair.source_labels, out_dir, "source_label", g.colorize);
      save_image_png(pair.target_image, out_dir / "target_image.png");
      save_labels(pair.target_labels, out_dir, "target_label", g.colorize);
    } else if (*episode_cmd) {
      const auto pair = generate_scene_pair(cfg.source_scene, cfg.target_scene, cfg.rng());
      const auto bench = cfg.bench_config();
      const auto report = run_pipeline_episode(pair, cfg.segmenter, cfg.strategy, cfg.rng(), bench.episode);
      const auto json = episode_report_json(report);
      write_file_atomic(out_dir / "report.json", json);
      save_gray8_png(mask_plane(report.mask), out_dir / "mask.png");
      save_labels(report.pseudo_label, out_dir, "pseudo_label", g.colorize);
      save_labels(report.mixed_labels, out_dir, "mixed_label", g.colorize);
      out << json;
    } else if (*bench_cmd) {
      unsigned workers = cfg.threads == 0 ? default_parallelism() : cfg.threads;
      if (const char* cap = std::getenv("HIMIX_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v > 0)
          workers = std::min(workers, static_cast<unsigned>(v));
      }
      const auto result = bench_compare(cfg.trials, cfg.bench_config(), cfg.rng(), workers);
      write_file_atomic(out_dir / "bench.csv", result.csv);
      out << "strategy,mean_source_fraction,mean_abs_deviation_from_half\n"
          << "himix," << format_double(result.himix.mean) << ',' << format_double(result.himix.mean_abs_deviation)
          << "\n"
          << "classmix," << format_double(result.classmix.mean) << ','
          << format_double(result.classmix.mean_abs_deviation) << "\n";
    }
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace himix
