#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace himix {

/// Identifies a random stream. Draws are a pure function of (seed, stream,
/// draw index), so two generators built from equal states agree on every
/// platform and regardless of what other streams have been consumed.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  bool operator==(const RngState&) const = default;
};

/// Child stream for a named purpose. Distinct tags give unrelated streams.
RngState derive_rng(RngState master, std::uint64_t tag);

/// Counter-based generator over an RngState.
class Rng {
 public:
  explicit Rng(RngState state);

  std::uint64_t next_u64();
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }
  /// Standard normal via Box-Muller; no cached second value.
  double normal();

  /// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Purpose tags for derive_rng. Changing a value changes every seeded output.
namespace rng_tag {
inline constexpr std::uint64_t kSelection = 1;
inline constexpr std::uint64_t kSourceScene = 2;
inline constexpr std::uint64_t kTargetScene = 3;
inline constexpr std::uint64_t kSourceAugment = 4;
inline constexpr std::uint64_t kTargetAugment = 5;
inline constexpr std::uint64_t kMixedAugment = 6;
inline constexpr std::uint64_t kHead1 = 7;
inline constexpr std::uint64_t kHead2 = 8;
inline constexpr std::uint64_t kMixedPrediction = 9;
inline constexpr std::uint64_t kSourcePrediction = 10;
}  // namespace rng_tag

}  // namespace himix
