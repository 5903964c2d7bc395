#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace ehtcp {

inline constexpr const char* kToolVersion = "0.1.0";

/// splitmix64 step; advances `state` and returns the next value.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic pseudo-random stream with a fixed, platform-independent
/// algorithm, so seeded runs reproduce bit-for-bit everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [a, b).
  double uniform(double a, double b);
  /// Standard normal via Box-Muller (no cached spare, to keep streams
  /// position-independent).
  double normal();

  /// Derives an independent stream; used to give each task its own RNG so
  /// results do not depend on scheduling.
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t state_;
};

/// Runs fn(0..count-1) on up to `threads` workers with a static interleaved
/// partition. Tasks must only write to their own slots; merging in index
/// order afterwards keeps results deterministic. Exceptions propagate.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace ehtcp
