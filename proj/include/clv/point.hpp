#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "clv/signature.hpp"

namespace clv {

/// Coordinate chart point.
struct Point {
  int n = 0;
  std::array<double, kMaxDim> x{};

  static Point of(std::initializer_list<double> xs) {
    Point p;
    for (double v : xs) p.x[p.n++] = v;
    return p;
  }
};

/// SplitMix64: tiny deterministic generator so seeded reports are
/// byte-identical across platforms (std distributions are not).
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// uniform in [0, 1)
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// uniform in [-1, 1]
  double next_sym() { return 2.0 * next_unit() - 1.0; }

  /// small integer in [lo, hi]
  int next_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }

  Point next_point(int n) {
    Point p;
    p.n = n;
    for (int i = 0; i < n; ++i) p.x[i] = next_sym();
    return p;
  }
};

}  // namespace clv
