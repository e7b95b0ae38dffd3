#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "steiner/errors.hpp"

namespace steiner {

/// Deterministic random source with portable output.
///
/// std::mt19937_64's raw stream is pinned by the standard, but the standard
/// *distributions* are implementation-defined, so sampling goes through a
/// hand-rolled unbiased rejection step. Identical seeds therefore produce
/// identical draws on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Unbiased uniform draw from the inclusive range [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) throw DomainError("Rng::uniform: empty range");
    const std::uint64_t span = hi - lo;
    if (span == std::numeric_limits<std::uint64_t>::max()) return gen_();
    const std::uint64_t bound = span + 1;
    // Rejection sampling: draw until the value falls below the largest
    // multiple of `bound`, then reduce. Expected < 2 draws.
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
    std::uint64_t draw = gen_();
    while (draw > limit) draw = gen_();
    return lo + draw % bound;
  }

  /// Draws `count` distinct elements from `pool` (partial Fisher-Yates).
  /// The returned sample preserves the shuffle order, not the pool order.
  template <typename T>
  std::vector<T> sample_without_replacement(std::vector<T> pool, std::size_t count) {
    if (count > pool.size())
      throw DomainError("Rng::sample_without_replacement: count exceeds pool size");
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(uniform(i, pool.size() - 1));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace steiner
