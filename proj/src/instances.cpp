#include "himix/instances.hpp"

#include <numeric>
#include <sstream>

namespace himix {

namespace {

// Disjoint sets over provisional labels; the smaller label becomes the root.
class EquivalenceTable {
 public:
  std::uint32_t make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  std::uint32_t join(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b)
      return a;
    if (a < b) {
      parent_[b] = a;
      return a;
    }
    parent_[a] = b;
    return b;
  }

  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
};

constexpr std::uint32_t kUnlabeled = 0xFFFFFFFFu;

}  // namespace

const char* to_string(Domain d) {
  return d == Domain::kSource ? "source" : "target";
}

InstanceMap::InstanceMap(Raster<std::uint32_t> ids, std::uint32_t first_id, std::vector<InstanceInfo> table)
    : Raster(std::move(ids)), first_id_(first_id), table_(std::move(table)) {}

std::vector<std::uint32_t> InstanceMap::ids() const {
  std::vector<std::uint32_t> out(table_.size());
  std::iota(out.begin(), out.end(), first_id_);
  return out;
}

InstanceMap extract_instances(const LabelMap& labels, Connectivity connectivity, Domain domain) {
  require_valid(labels);
  const Index h = labels.height();
  const Index w = labels.width();
  const std::uint8_t* cls = labels.pixels().data();
  const bool eight = connectivity == Connectivity::kEight;

  std::vector<std::uint32_t> provisional(static_cast<std::size_t>(h * w), kUnlabeled);
  EquivalenceTable eq;

  // First pass: provisional labels from already-visited neighbours.
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      const Index i = y * w + x;
      const std::uint8_t c = cls[i];
      if (c == kIgnoreLabel)
        continue;

      std::uint32_t label = kUnlabeled;
      auto visit = [&](Index j) {
        if (cls[j] != c)
          return;
        const std::uint32_t other = provisional[j];
        label = label == kUnlabeled ? eq.find(other) : eq.join(label, other);
      };
      if (x > 0)
        visit(i - 1);
      if (y > 0) {
        visit(i - w);
        if (eight) {
          if (x > 0)
            visit(i - w - 1);
          if (x + 1 < w)
            visit(i - w + 1);
        }
      }
      provisional[i] = label == kUnlabeled ? eq.make() : label;
    }
  }

  // Second pass: resolve to dense ids in raster order of first appearance.
  std::vector<std::uint32_t> dense(eq.size(), 0);
  std::vector<InstanceInfo> table;
  Raster<std::uint32_t> ids(h, w, 1, 0);
  std::uint32_t* out = ids.pixels().data();
  for (Index i = 0; i < h * w; ++i) {
    if (provisional[i] == kUnlabeled)
      continue;
    const std::uint32_t root = eq.find(provisional[i]);
    std::uint32_t& id = dense[root];
    if (id == 0) {
      table.push_back({cls[i], domain, 0});
      id = static_cast<std::uint32_t>(table.size());
    }
    ++table[id - 1].pixel_count;
    out[i] = id;
  }
  return InstanceMap(std::move(ids), 1, std::move(table));
}

std::pair<InstanceMap, InstanceMap> relabel_disjoint(const InstanceMap& a, const InstanceMap& b) {
  if (b.empty())
    return {a, b};
  const std::uint32_t next = a.empty() ? a.first_id() : a.last_id() + 1;
  if (b.first_id() >= next)
    return {a, b};
  const std::uint32_t shift = next - b.first_id();
  Raster<std::uint32_t> ids = b;
  for (auto& v : ids.pixels().reshaped())
    if (v != 0)
      v += shift;
  return {a, InstanceMap(std::move(ids), next, b.table())};
}

LabelMap paint_classes(const InstanceMap& instances, int num_classes) {
  LabelMap out(instances.height(), instances.width(), num_classes, kIgnoreLabel);
  const auto* ids = instances.pixels().data();
  auto* dst = out.pixels().data();
  for (Index i = 0; i < instances.size(); ++i)
    if (ids[i] != 0)
      dst[i] = instances.info(ids[i]).class_index;
  return out;
}

std::optional<std::string> validate(const InstanceMap& instances) {
  if (instances.height() < 1 || instances.width() < 1 || instances.channels() != 1)
    return "shape mismatch";
  if (instances.first_id() == 0)
    return "instance ids must start above 0";
  std::vector<std::int64_t> seen(instances.instance_count(), 0);
  for (auto v : instances.pixels().reshaped()) {
    if (v == 0)
      continue;
    if (!instances.contains(v)) {
      std::ostringstream os;
      os << "instance id " << v << " has no table entry";
      return os.str();
    }
    ++seen[v - instances.first_id()];
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (seen[k] != instances.table()[k].pixel_count) {
      std::ostringstream os;
      os << "table pixel count mismatch for id " << instances.first_id() + k;
      return os.str();
    }
  }
  return std::nullopt;
}

}  // namespace himix
