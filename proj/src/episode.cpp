#include "himix/synth.hpp"

#include <json.hpp>

namespace himix {

namespace {

struct Augmentation {
  GeometricTransform geometric;
  PhotometricParams photometric;
};

Augmentation sample_augmentation(RngState state, const PhotometricRanges& ranges) {
  Rng r(state);
  Augmentation a;
  a.geometric = sample_geometric(r);
  a.photometric = sample_photometric(r, ranges);
  return a;
}

double label_accuracy(const LabelMap& pred, const LabelMap& truth) {
  std::int64_t hit = 0, total = 0;
  const auto* p = pred.pixels().data();
  const auto* t = truth.pixels().data();
  for (Index i = 0; i < truth.size(); ++i) {
    if (t[i] == kIgnoreLabel)
      continue;
    ++total;
    hit += p[i] == t[i];
  }
  return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

nlohmann::ordered_json transform_json(const GeometricTransform& t) {
  return {{"hflip", t.hflip}, {"vflip", t.vflip}, {"rot90_k", t.rot90_k}};
}

}  // namespace

EpisodeReport run_pipeline_episode(const ScenePair& scenes, const MockSegmenterConfig& segmenter,
                                   MixStrategy strategy, RngState rng, const EpisodeOptions& options) {
  options.fusion.check();
  EpisodeReport report;
  report.strategy = strategy;

  // Source batch (x_s || x~_s, y_s || y~_s), one view per head.
  const auto source_aug = sample_augmentation(derive_rng(rng, rng_tag::kSourceAugment), options.photometric);
  report.source_transform = source_aug.geometric;
  const Image source_aug_image =
      apply_photometric(source_aug.photometric, apply_geometric(source_aug.geometric, scenes.source_image));
  const LabelMap source_aug_labels = apply_geometric(source_aug.geometric, scenes.source_labels);
  const RngState source_pred = derive_rng(rng, rng_tag::kSourcePrediction);
  const auto h1_source = mock_segment(segmenter, scenes.source_image, scenes.source_labels, derive_rng(source_pred, 1));
  const auto h2_source = mock_segment(segmenter, source_aug_image, source_aug_labels, derive_rng(source_pred, 2));
  report.source_loss =
      0.5 * (cross_entropy(h1_source, scenes.source_labels) + cross_entropy(h2_source, source_aug_labels));

  // Twin-head pseudo-labels on the target.
  const auto target_aug = sample_augmentation(derive_rng(rng, rng_tag::kTargetAugment), options.photometric);
  report.target_transform = target_aug.geometric;
  const LabelMap target_truth_aug = apply_geometric(target_aug.geometric, scenes.target_labels);
  const Segmenter head1 = [&](const Image& x) {
    return mock_segment(segmenter, x, scenes.target_labels, derive_rng(rng, rng_tag::kHead1));
  };
  const Segmenter head2 = [&](const Image& x) {
    return mock_segment(segmenter, x, target_truth_aug, derive_rng(rng, rng_tag::kHead2));
  };
  auto pseudo = generate_pseudo_label_pair(head1, head2, scenes.target_image, target_aug.geometric,
                                           target_aug.photometric, options.fusion);
  report.confidence_fraction = pseudo.fraction;
  report.pseudo_label_accuracy = label_accuracy(pseudo.labels, scenes.target_labels);

  // Mixing.
  const RngState selection = derive_rng(rng, rng_tag::kSelection);
  MixedPair mixed;
  if (strategy == MixStrategy::kHimix) {
    if (options.empty_selection_for_testing) {
      const auto [s, t] =
          relabel_disjoint(extract_instances(scenes.source_labels, options.connectivity, Domain::kSource),
                           extract_instances(pseudo.labels, options.connectivity, Domain::kTarget));
      report.mask = reduce_to_mask(build_layer_stack(s, {}, t));
      mixed = blend(scenes.source_image, scenes.target_image, scenes.source_labels, pseudo.labels, report.mask);
    } else {
      auto result = himix(scenes.source_image, scenes.source_labels, scenes.target_image, pseudo.labels,
                          options.connectivity, selection);
      report.mask = std::move(result.mask);
      mixed = std::move(result.mixed);
    }
  } else {
    report.mask = classmix_mask(scenes.source_labels, selection);
    mixed = blend(scenes.source_image, scenes.target_image, scenes.source_labels, pseudo.labels, report.mask);
  }
  report.source_fraction = report.mask.source_fraction();
  report.class_source_shares.assign(static_cast<std::size_t>(mixed.labels.num_classes()), 0.0);
  {
    const auto* bits = report.mask.pixels().data();
    const auto* cls = scenes.source_labels.pixels().data();
    const double n = static_cast<double>(report.mask.size());
    std::vector<std::int64_t> counts(report.class_source_shares.size(), 0);
    for (Index i = 0; i < report.mask.size(); ++i)
      if (bits[i] != 0 && cls[i] != kIgnoreLabel)
        ++counts[cls[i]];
    for (std::size_t c = 0; c < counts.size(); ++c)
      report.class_source_shares[c] = static_cast<double>(counts[c]) / n;
  }
  const WeightMap weights = weight_map(report.mask, pseudo.fraction);

  // Mixed batch (x_m || x~_m, y_m || y~_m). The mock predicts from the true
  // composite labels, so the loss measures pseudo-label error under w_m.
  const auto mixed_aug = sample_augmentation(derive_rng(rng, rng_tag::kMixedAugment), options.photometric);
  report.mixed_transform = mixed_aug.geometric;
  const MixedPair truth_mix =
      blend(scenes.source_image, scenes.target_image, scenes.source_labels, scenes.target_labels, report.mask);
  const Image mixed_aug_image =
      apply_photometric(mixed_aug.photometric, apply_geometric(mixed_aug.geometric, mixed.image));
  const LabelMap mixed_aug_labels = apply_geometric(mixed_aug.geometric, mixed.labels);
  const WeightMap weights_aug = apply_geometric(mixed_aug.geometric, weights);
  const RngState mixed_pred = derive_rng(rng, rng_tag::kMixedPrediction);
  const auto pred = mock_segment(segmenter, mixed.image, truth_mix.labels, derive_rng(mixed_pred, 1));
  const auto pred_aug = mock_segment(segmenter, mixed_aug_image, apply_geometric(mixed_aug.geometric, truth_mix.labels),
                                     derive_rng(mixed_pred, 2));
  report.mixed_loss = 0.5 * (weighted_cross_entropy(pred, mixed.labels, weights) +
                             weighted_cross_entropy(pred_aug, mixed_aug_labels, weights_aug));

  report.pseudo_label = std::move(pseudo.labels);
  report.mixed_labels = std::move(mixed.labels);
  return report;
}

std::string episode_report_json(const EpisodeReport& report) {
  nlohmann::ordered_json j;
  j["strategy"] = to_string(report.strategy);
  j["height"] = report.mask.height();
  j["width"] = report.mask.width();
  j["source_fraction"] = report.source_fraction;
  j["class_source_shares"] = report.class_source_shares;
  j["confidence_fraction"] = report.confidence_fraction;
  j["pseudo_label_accuracy"] = report.pseudo_label_accuracy;
  j["source_loss"] = report.source_loss;
  j["mixed_loss"] = report.mixed_loss;
  j["source_transform"] = transform_json(report.source_transform);
  j["target_transform"] = transform_json(report.target_transform);
  j["mixed_transform"] = transform_json(report.mixed_transform);
  return j.dump(2) + "\n";
}

}  // namespace himix
