#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "clv/errors.hpp"
#include "clv/signature.hpp"

namespace clv {

/// Order-2 jet of a complex function of up to kMaxDim coordinates: value,
/// gradient, symmetric Hessian (packed upper triangle). Arithmetic is exact
/// through second order; jets are the engine's differentiation carrier.
struct Jet {
  static constexpr int kHessSize = kMaxDim * (kMaxDim + 1) / 2;

  std::complex<double> v{};
  std::array<std::complex<double>, kMaxDim> g{};
  std::array<std::complex<double>, kHessSize> h{};

  Jet() = default;
  Jet(std::complex<double> value) : v(value) {}
  Jet(double value) : v(value) {}

  static int hidx(int i, int j) {
    if (i > j) std::swap(i, j);
    return j * (j + 1) / 2 + i;
  }

  std::complex<double> hess(int i, int j) const { return h[hidx(i, j)]; }
  void set_hess(int i, int j, std::complex<double> x) { h[hidx(i, j)] = x; }

  /// Coordinate jet x_mu at value x: unit gradient slot, zero Hessian.
  static Jet coordinate(int mu, double x) {
    Jet j(x);
    j.g[mu] = 1.0;
    return j;
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < kMaxDim; ++i) g[i] += o.g[i];
    for (int i = 0; i < kHessSize; ++i) h[i] += o.h[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < kMaxDim; ++i) g[i] -= o.g[i];
    for (int i = 0; i < kHessSize; ++i) h[i] -= o.h[i];
    return *this;
  }
  Jet& operator+=(std::complex<double> c) {
    v += c;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  Jet operator-() const {
    Jet r;
    r.v = -v;
    for (int i = 0; i < kMaxDim; ++i) r.g[i] = -g[i];
    for (int i = 0; i < kHessSize; ++i) r.h[i] = -h[i];
    return r;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v * b.v;
    for (int i = 0; i < kMaxDim; ++i) r.g[i] = a.v * b.g[i] + a.g[i] * b.v;
    for (int j = 0; j < kMaxDim; ++j)
      for (int i = 0; i <= j; ++i)
        r.h[hidx(i, j)] = a.v * b.h[hidx(i, j)] + b.v * a.h[hidx(i, j)] +
                          a.g[i] * b.g[j] + a.g[j] * b.g[i];
    return r;
  }

  template <class T>
  Jet operator*(const T& t) const {
    Jet r = *this;
    std::complex<double> c(t);
    r.v *= c;
    for (int i = 0; i < kMaxDim; ++i) r.g[i] *= c;
    for (int i = 0; i < kHessSize; ++i) r.h[i] *= c;
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  friend Jet reciprocal(const Jet& b) {
    if (b.v == std::complex<double>(0.0))
      throw SingularityError("jet division by zero value");
    const std::complex<double> w = 1.0 / b.v;
    const std::complex<double> w2 = w * w;
    const std::complex<double> w3 = w2 * w;
    Jet r;
    r.v = w;
    for (int i = 0; i < kMaxDim; ++i) r.g[i] = -w2 * b.g[i];
    for (int j = 0; j < kMaxDim; ++j)
      for (int i = 0; i <= j; ++i)
        r.h[hidx(i, j)] =
            -w2 * b.h[hidx(i, j)] + 2.0 * w3 * b.g[i] * b.g[j];
    return r;
  }

  friend Jet exp(const Jet& a) {
    const std::complex<double> e = std::exp(a.v);
    Jet r;
    r.v = e;
    for (int i = 0; i < kMaxDim; ++i) r.g[i] = e * a.g[i];
    for (int j = 0; j < kMaxDim; ++j)
      for (int i = 0; i <= j; ++i)
        r.h[hidx(i, j)] = e * (a.h[hidx(i, j)] + a.g[i] * a.g[j]);
    return r;
  }
};

inline Jet operator*(std::complex<double> c, const Jet& j) { return j * c; }
inline Jet operator*(double c, const Jet& j) { return j * c; }

/// Jet of the directional coefficient ∂_mu f assembled from f's jet: the
/// value comes from the gradient, the gradient from the Hessian, and the
/// Hessian order is lost (filled with zeros). Consumers must respect the
/// field-level depth bookkeeping.
inline Jet shift_partial(const Jet& f, int mu) {
  Jet r;
  r.v = f.g[mu];
  for (int i = 0; i < kMaxDim; ++i) r.g[i] = f.hess(mu, i);
  return r;
}

inline std::complex<double> value_of(const Jet& j) { return j.v; }
inline std::complex<double> value_of(std::complex<double> c) { return c; }

inline bool scalar_is_zero(const Jet& j) {
  if (j.v != std::complex<double>(0.0)) return false;
  for (const auto& g : j.g)
    if (g != std::complex<double>(0.0)) return false;
  for (const auto& h : j.h)
    if (h != std::complex<double>(0.0)) return false;
  return true;
}

}  // namespace clv
