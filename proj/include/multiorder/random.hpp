#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "multiorder/lattice.hpp"

namespace multiorder {

/// Seeded generator with platform-independent integer sampling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(n) - 1)); }

  bool coin() { return uniform(0, 1) == 1; }

  LatticeVector lattice(std::size_t m, std::int64_t box) {
    std::vector<std::int64_t> v(m);
    for (auto& x : v) x = uniform(-box, box);
    return LatticeVector::from_int64(v);
  }

  /// Random permutation of 0..n-1 (Fisher-Yates).
  std::vector<int> permutation(std::size_t n) {
    std::vector<int> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i);
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[index(i)]);
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace multiorder
