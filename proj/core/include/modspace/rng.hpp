#pragma once

#include <cstdint>

namespace modspace {

/// Counter-based generator: value i of stream `seed` is a fixed hash of
/// (seed, i), so ensembles are reproducible across platforms and thread
/// counts. Stateless apart from the running counter.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))), counter_(0) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Standard normal (Box-Muller; consumes two counter values).
  double normal();

  static std::uint64_t hash(std::uint64_t key, std::uint64_t counter);

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace modspace
