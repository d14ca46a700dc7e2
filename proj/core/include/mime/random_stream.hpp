#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace mime {

/// Mixes a master seed with a task index into an independent 64-bit seed
/// (splitmix64 finalizer applied twice). Used to give every trial its own
/// stream so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Seeded pseudo-random stream. All draws are built from the raw 64-bit
/// engine output rather than <random> distributions, whose algorithms are
/// implementation-defined, so a given seed yields the same sequence on
/// every standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Stream for task `index` under `master_seed`.
  static RandomStream derived(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal by inversion of a uniform draw.
  double normal();

  /// Uniform integer in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n);

  /// Fisher-Yates shuffle driven by below().
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace mime
