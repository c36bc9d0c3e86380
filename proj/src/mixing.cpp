#include "himix/mixing.hpp"

#include <algorithm>
#include <array>

namespace himix {

namespace {

template <typename A, typename B>
void require_same_extent(const Raster<A>& a, const Raster<B>& b, const char* what) {
  if (!a.same_extent(b))
    throw DataError(std::string("shape mismatch: ") + what);
}

void append_layers(const InstanceMap& instances, const std::vector<std::uint32_t>& ids, std::vector<Layer>& out) {
  if (ids.empty())
    return;
  // slot[id - first_id] is the index into `out`, or -1 when not selected.
  std::vector<std::int64_t> slot(instances.instance_count(), -1);
  for (auto id : ids) {
    slot[id - instances.first_id()] = static_cast<std::int64_t>(out.size());
    Layer layer;
    layer.instance_id = id;
    layer.domain = instances.info(id).domain;
    layer.pixels.reserve(static_cast<std::size_t>(instances.info(id).pixel_count));
    out.push_back(std::move(layer));
  }
  const auto* px = instances.pixels().data();
  const auto first = instances.first_id();
  for (Index i = 0, n = instances.size(); i < n; ++i) {
    const auto id = px[i];
    if (id == 0)
      continue;
    const auto s = slot[id - first];
    if (s >= 0)
      out[static_cast<std::size_t>(s)].pixels.push_back(static_cast<std::uint32_t>(i));
  }
}

}  // namespace

std::int64_t MixMask::count() const {
  return (pixels() != 0).count();
}

bool on_top_of(const Layer& a, const Layer& b) {
  if (a.pixel_count() != b.pixel_count())
    return a.pixel_count() < b.pixel_count();
  if (a.domain != b.domain)
    return a.domain < b.domain;
  return a.instance_id < b.instance_id;
}

std::vector<std::uint32_t> select_source_instances(const InstanceMap& source, RngState rng) {
  if (source.empty())
    throw DataError("no source instances");
  for (const auto& info : source.table())
    if (info.domain != Domain::kSource)
      throw DataError("select_source_instances: instance map is not tagged source");
  const std::size_t n = source.instance_count();
  Rng gen(rng);
  auto picks = gen.sample_without_replacement(n, (n + 1) / 2);
  std::vector<std::uint32_t> ids;
  ids.reserve(picks.size());
  for (auto k : picks)
    ids.push_back(source.first_id() + static_cast<std::uint32_t>(k));
  std::sort(ids.begin(), ids.end());
  return ids;
}

void sort_layers(LayerStack& stack) {
  std::sort(stack.layers.begin(), stack.layers.end(),
            [](const Layer& a, const Layer& b) { return on_top_of(b, a); });
}

LayerStack build_layer_stack(const InstanceMap& source, const std::vector<std::uint32_t>& selected,
                             const InstanceMap& target) {
  require_same_extent(source, target, "source and target instance maps");
  for (auto id : selected)
    if (!source.contains(id))
      throw DataError("selected id " + std::to_string(id) + " is not a source instance");
  if (!source.empty() && !target.empty() && target.first_id() <= source.last_id() &&
      source.first_id() <= target.last_id())
    throw DataError("source and target instance ids overlap; call relabel_disjoint first");

  std::vector<std::uint32_t> unique_selected = selected;
  std::sort(unique_selected.begin(), unique_selected.end());
  unique_selected.erase(std::unique(unique_selected.begin(), unique_selected.end()), unique_selected.end());

  LayerStack stack{source.height(), source.width(), {}};
  stack.layers.reserve(unique_selected.size() + target.instance_count());
  append_layers(source, unique_selected, stack.layers);
  append_layers(target, target.ids(), stack.layers);
  sort_layers(stack);
  return stack;
}

Raster<std::int32_t> reduce_to_index(const LayerStack& stack) {
  Raster<std::int32_t> winners(stack.height, stack.width, 1, -1);
  const Index n = winners.size();
  auto* win = winners.pixels().data();
  // Paint bottom to top; later layers overwrite.
  for (std::size_t k = 0; k < stack.layers.size(); ++k) {
    for (auto p : stack.layers[k].pixels) {
      if (p >= n)
        throw DataError("layer pixel outside the grid");
      win[p] = static_cast<std::int32_t>(k);
    }
  }
  for (Index i = 0; i < n; ++i)
    if (win[i] < 0)
      throw DataError("incomplete coverage");
  return winners;
}

MixMask binarize(const LayerStack& stack, const Raster<std::int32_t>& winners) {
  MixMask mask(winners.height(), winners.width());
  const auto* win = winners.pixels().data();
  auto* bits = mask.pixels().data();
  for (Index i = 0; i < mask.size(); ++i)
    bits[i] = stack.layers.at(static_cast<std::size_t>(win[i])).domain == Domain::kSource ? 1 : 0;
  return mask;
}

MixMask reduce_to_mask(const LayerStack& stack) {
  return binarize(stack, reduce_to_index(stack));
}

MixedPair blend(const Image& source_image, const Image& target_image, const LabelMap& source_labels,
                const LabelMap& target_labels, const MixMask& mask) {
  require_same_extent(source_image, target_image, "source and target images");
  require_same_extent(source_image, source_labels, "source image and labels");
  require_same_extent(source_image, target_labels, "source image and target labels");
  require_same_extent(source_image, mask, "images and mask");

  MixedPair out{target_image, target_labels};
  out.labels.set_num_classes(std::max(source_labels.num_classes(), target_labels.num_classes()));
  const auto* bits = mask.pixels().data();
  for (Index i = 0; i < mask.size(); ++i) {
    if (bits[i] == 0)
      continue;
    out.image.pixels().row(i) = source_image.pixels().row(i);
    out.labels.pixels()(i, 0) = source_labels.pixels()(i, 0);
  }
  return out;
}

MixMask classmix_mask(const LabelMap& source_labels, RngState rng) {
  const auto counts = class_pixel_counts(source_labels);
  if (counts.empty())
    throw DataError("classmix: no classes present");
  std::vector<int> present;
  for (const auto& [c, n] : counts)
    present.push_back(c);

  Rng gen(rng);
  std::array<std::uint8_t, 256> chosen{};
  for (auto k : gen.sample_without_replacement(present.size(), (present.size() + 1) / 2))
    chosen[static_cast<std::size_t>(present[k])] = 1;

  MixMask mask(source_labels.height(), source_labels.width());
  const auto* cls = source_labels.pixels().data();
  auto* bits = mask.pixels().data();
  for (Index i = 0; i < mask.size(); ++i)
    bits[i] = chosen[cls[i]];
  return mask;
}

HimixResult himix(const Image& source_image, const LabelMap& source_labels, const Image& target_image,
                  const LabelMap& target_labels, Connectivity connectivity, RngState rng) {
  require_valid(source_image);
  require_valid(target_image);
  require_same_extent(source_image, target_image, "source and target images");

  const auto source_raw = extract_instances(source_labels, connectivity, Domain::kSource);
  const auto target_raw = extract_instances(target_labels, connectivity, Domain::kTarget);
  const auto [source, target] = relabel_disjoint(source_raw, target_raw);
  const auto selected = select_source_instances(source, rng);
  const auto stack = build_layer_stack(source, selected, target);
  auto mask = reduce_to_mask(stack);
  auto mixed = blend(source_image, target_image, source_labels, target_labels, mask);
  return {std::move(mixed), std::move(mask)};
}

}  // namespace himix
