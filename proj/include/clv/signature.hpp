#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace clv {

inline constexpr int kMaxDim = 8;

/// Orthonormal-frame metric signature: n frame directions with g^{aa} = ±1
/// and vanishing off-diagonal components.
struct Signature {
  int n = 0;
  std::array<int8_t, kMaxDim> diag{};

  static Signature euclidean(int n) {
    Signature s = with_diag(n, nullptr);
    return s;
  }

  static Signature lorentzian(int n) {
    // one timelike direction, placed first
    Signature s = euclidean(n);
    s.diag[0] = -1;
    return s;
  }

  static Signature from_list(const std::array<int8_t, kMaxDim>& d, int n) {
    Signature s;
    if (n < 2 || n > kMaxDim)
      throw std::invalid_argument("signature dimension must be in [2, 8]");
    s.n = n;
    for (int i = 0; i < n; ++i) {
      if (d[i] != 1 && d[i] != -1)
        throw std::invalid_argument("signature entries must be +1 or -1");
      s.diag[i] = d[i];
    }
    return s;
  }

  int metric(int a) const { return diag[a]; }
  unsigned blade_count() const { return 1u << n; }
  bool euclid() const {
    for (int i = 0; i < n; ++i)
      if (diag[i] != 1) return false;
    return true;
  }

  bool operator==(const Signature& o) const {
    if (n != o.n) return false;
    for (int i = 0; i < n; ++i)
      if (diag[i] != o.diag[i]) return false;
    return true;
  }
  bool operator!=(const Signature& o) const { return !(*this == o); }

 private:
  static Signature with_diag(int n, const int8_t*) {
    Signature s;
    if (n < 2 || n > kMaxDim)
      throw std::invalid_argument("signature dimension must be in [2, 8]");
    s.n = n;
    for (int i = 0; i < n; ++i) s.diag[i] = 1;
    return s;
  }
};

namespace blades {

inline int grade(unsigned mask) { return std::popcount(mask); }

/// Sign of reordering the juxtaposition e^A e^B into canonical ascending
/// order, counting transpositions. Shared by the wedge and Clifford kernels.
inline int reorder_sign(unsigned a, unsigned b) {
  a >>= 1;
  int swaps = 0;
  while (a) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

/// Sign picked up by i_{X_a} reaching past the blade factors below index a.
inline int contraction_sign(unsigned mask, int a) {
  const unsigned below = mask & ((1u << a) - 1u);
  return (std::popcount(below) & 1) ? -1 : 1;
}

inline std::string name(unsigned mask) {
  if (mask == 0) return "1";
  std::string s = "e";
  for (int a = 0; a < kMaxDim; ++a)
    if (mask & (1u << a)) s += static_cast<char>('1' + a);
  return s;
}

}  // namespace blades

}  // namespace clv
