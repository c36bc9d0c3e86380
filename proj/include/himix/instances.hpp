#pragma once

#include "himix/core.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace himix {

enum class Domain : std::uint8_t { kSource = 0, kTarget = 1 };

const char* to_string(Domain d);

enum class Connectivity { kFour = 4, kEight = 8 };

struct InstanceInfo {
  std::uint8_t class_index = 0;
  Domain domain = Domain::kSource;
  std::int64_t pixel_count = 0;

  bool operator==(const InstanceInfo&) const = default;
};

/// Connected components of a label map.
///
/// Pixel values are instance ids; 0 marks ignore pixels. Ids form the dense
/// range [first_id(), last_id()], and table()[id - first_id()] describes id.
/// A freshly extracted map starts at 1; relabel_disjoint shifts the second map
/// of a pair past the first.
class InstanceMap : public Raster<std::uint32_t> {
 public:
  InstanceMap() = default;
  InstanceMap(Raster<std::uint32_t> ids, std::uint32_t first_id, std::vector<InstanceInfo> table);

  std::uint32_t first_id() const { return first_id_; }
  std::uint32_t last_id() const { return first_id_ + static_cast<std::uint32_t>(table_.size()) - 1; }
  std::size_t instance_count() const { return table_.size(); }
  bool empty() const { return table_.empty(); }

  bool contains(std::uint32_t id) const {
    return id >= first_id_ && id - first_id_ < table_.size();
  }
  const InstanceInfo& info(std::uint32_t id) const { return table_.at(id - first_id_); }
  const std::vector<InstanceInfo>& table() const { return table_; }

  /// All ids in ascending order.
  std::vector<std::uint32_t> ids() const;

  bool operator==(const InstanceMap& other) const {
    return first_id_ == other.first_id_ && table_ == other.table_ && Raster::operator==(other);
  }

 private:
  std::uint32_t first_id_ = 1;
  std::vector<InstanceInfo> table_;
};

/// Label connected components with two-pass union-find. Two pixels share an
/// id iff they have the same class and are joined by a same-class path under
/// `connectivity`. Ids are assigned in raster order of first appearance.
InstanceMap extract_instances(const LabelMap& labels, Connectivity connectivity = Connectivity::kFour,
                              Domain domain = Domain::kSource);

/// Shift b's ids past a's last id. a is returned unchanged.
std::pair<InstanceMap, InstanceMap> relabel_disjoint(const InstanceMap& a, const InstanceMap& b);

/// Paint each instance with its table class; id 0 becomes ignore.
LabelMap paint_classes(const InstanceMap& instances, int num_classes);

/// First violated invariant (dense ids, counts match table), or nullopt.
std::optional<std::string> validate(const InstanceMap& instances);

}  // namespace himix
