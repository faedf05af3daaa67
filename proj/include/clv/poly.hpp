#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "clv/jet.hpp"
#include "clv/point.hpp"

namespace clv {

/// Monomial exponent tuple over up to kMaxDim coordinates.
struct Mono {
  std::array<uint8_t, kMaxDim> e{};
  auto operator<=>(const Mono&) const = default;
  int degree() const {
    int d = 0;
    for (auto v : e) d += v;
    return d;
  }
};

/// Sparse multivariate polynomial with complex coefficients. Terms are kept
/// sorted by monomial; exact-zero coefficients are dropped.
class Poly {
 public:
  Poly() = default;

  static Poly constant(cplx c) {
    Poly p;
    if (c != cplx(0.0)) p.t_.push_back({Mono{}, c});
    return p;
  }

  static Poly coordinate(int mu) {
    Poly p;
    Mono m;
    m.e[mu] = 1;
    p.t_.push_back({m, cplx(1.0)});
    return p;
  }

  static Poly monomial(Mono m, cplx c) {
    Poly p;
    if (c != cplx(0.0)) p.t_.push_back({m, c});
    return p;
  }

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const {
    return t_.empty() || (t_.size() == 1 && t_[0].first == Mono{});
  }
  const std::vector<std::pair<Mono, cplx>>& terms() const { return t_; }

  Poly& operator+=(const Poly& o) {
    std::vector<std::pair<Mono, cplx>> out;
    out.reserve(t_.size() + o.t_.size());
    size_t i = 0, j = 0;
    while (i < t_.size() || j < o.t_.size()) {
      if (j == o.t_.size() || (i < t_.size() && t_[i].first < o.t_[j].first)) {
        out.push_back(t_[i++]);
      } else if (i == t_.size() || o.t_[j].first < t_[i].first) {
        out.push_back(o.t_[j++]);
      } else {
        cplx c = t_[i].second + o.t_[j].second;
        if (c != cplx(0.0)) out.push_back({t_[i].first, c});
        ++i;
        ++j;
      }
    }
    t_ = std::move(out);
    return *this;
  }

  Poly& operator-=(const Poly& o) { return *this += o * cplx(-1.0); }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a += (b * cplx(-1.0)); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a.t_) {
      Poly partial;
      partial.t_.reserve(b.t_.size());
      for (const auto& [mb, cb] : b.t_) {
        Mono m = ma;
        for (int k = 0; k < kMaxDim; ++k) m.e[k] += mb.e[k];
        partial.t_.push_back({m, ca * cb});
      }
      // b sorted and ma fixed keeps partial sorted
      r += partial;
    }
    return r;
  }

  Poly operator*(cplx c) const {
    Poly r = *this;
    if (c == cplx(0.0)) {
      r.t_.clear();
      return r;
    }
    for (auto& t : r.t_) t.second *= c;
    return r;
  }
  Poly operator*(double c) const { return *this * cplx(c); }
  Poly operator-() const { return *this * cplx(-1.0); }

  Poly partial(int mu) const {
    Poly r;
    for (const auto& [m, c] : t_) {
      if (m.e[mu] == 0) continue;
      Mono d = m;
      d.e[mu] -= 1;
      r.t_.push_back({d, c * static_cast<double>(m.e[mu])});
    }
    std::sort(r.t_.begin(), r.t_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return r;
  }

  cplx eval(const Point& p) const {
    cplx s = 0.0;
    for (const auto& [m, c] : t_) {
      cplx t = c;
      for (int k = 0; k < kMaxDim; ++k)
        for (int r = 0; r < m.e[k]; ++r) t *= p.x[k];
      s += t;
    }
    return s;
  }

  /// Exact order-2 jet at p, assembled from per-coordinate power derivatives.
  Jet eval_jet(const Point& p) const {
    Jet out;
    for (const auto& [m, c] : t_) {
      // powers, first and second derivatives of x_k^{e_k}
      std::array<double, kMaxDim> p0, p1, p2;
      for (int k = 0; k < kMaxDim; ++k) {
        const int e = m.e[k];
        const double x = p.x[k];
        p0[k] = ipow(x, e);
        p1[k] = e > 0 ? e * ipow(x, e - 1) : 0.0;
        p2[k] = e > 1 ? e * (e - 1.0) * ipow(x, e - 2) : 0.0;
      }
      double prod = 1.0;
      for (int k = 0; k < kMaxDim; ++k) prod *= p0[k];
      out.v += c * prod;
      for (int i = 0; i < kMaxDim; ++i) {
        if (m.e[i] == 0) continue;
        double gi = p1[i];
        for (int k = 0; k < kMaxDim; ++k)
          if (k != i) gi *= p0[k];
        out.g[i] += c * gi;
      }
      for (int j = 0; j < kMaxDim; ++j) {
        for (int i = 0; i <= j; ++i) {
          double hij;
          if (i == j) {
            if (m.e[i] < 2) continue;
            hij = p2[i];
            for (int k = 0; k < kMaxDim; ++k)
              if (k != i) hij *= p0[k];
          } else {
            if (m.e[i] == 0 || m.e[j] == 0) continue;
            hij = p1[i] * p1[j];
            for (int k = 0; k < kMaxDim; ++k)
              if (k != i && k != j) hij *= p0[k];
          }
          out.h[Jet::hidx(i, j)] += c * hij;
        }
      }
    }
    return out;
  }

  bool operator==(const Poly& o) const { return t_ == o.t_; }

 private:
  static double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  }

  std::vector<std::pair<Mono, cplx>> t_;
};

/// Scalar in the closed family Σ_k P_k(x) · exp(s_k · χ(x)) with integer
/// weights s_k and a χ shared at field level. Closed under sums, products,
/// and coordinate partials, so operator pipelines retain exact jets.
class PolyExp {
 public:
  PolyExp() = default;
  PolyExp(Poly p) {
    if (!p.is_zero()) t_.push_back({0, std::move(p)});
  }
  PolyExp(cplx c) : PolyExp(Poly::constant(c)) {}
  PolyExp(double c) : PolyExp(Poly::constant(cplx(c))) {}

  static PolyExp weighted(int s, Poly p) {
    PolyExp r;
    if (!p.is_zero()) r.t_.push_back({s, std::move(p)});
    return r;
  }

  bool is_zero() const { return t_.empty(); }
  const std::vector<std::pair<int, Poly>>& terms() const { return t_; }

  PolyExp& operator+=(const PolyExp& o) {
    for (const auto& [s, p] : o.t_) add_term(s, p);
    return *this;
  }
  PolyExp& operator-=(const PolyExp& o) {
    for (const auto& [s, p] : o.t_) add_term(s, -p);
    return *this;
  }
  PolyExp& operator+=(cplx c) {
    add_term(0, Poly::constant(c));
    return *this;
  }
  friend PolyExp operator+(PolyExp a, const PolyExp& b) { return a += b; }
  friend PolyExp operator-(PolyExp a, const PolyExp& b) { return a -= b; }
  PolyExp operator-() const { return *this * cplx(-1.0); }

  friend PolyExp operator*(const PolyExp& a, const PolyExp& b) {
    PolyExp r;
    for (const auto& [sa, pa] : a.t_)
      for (const auto& [sb, pb] : b.t_) r.add_term(sa + sb, pa * pb);
    return r;
  }
  PolyExp operator*(cplx c) const {
    PolyExp r;
    for (const auto& [s, p] : t_) r.add_term(s, p * c);
    return r;
  }
  PolyExp operator*(double c) const { return *this * cplx(c); }

  /// ∂_mu with respect to the shared exponent generator χ.
  PolyExp partial(int mu, const Poly& chi) const {
    PolyExp r;
    const Poly dchi = chi.partial(mu);
    for (const auto& [s, p] : t_) {
      Poly dp = p.partial(mu);
      if (s != 0) dp += dchi * p * cplx(static_cast<double>(s));
      r.add_term(s, dp);
    }
    return r;
  }

  Jet eval_jet(const Point& pt, const Poly& chi) const {
    Jet out;
    Jet chij;
    bool have_chi = false;
    for (const auto& [s, p] : t_) {
      Jet term = p.eval_jet(pt);
      if (s != 0) {
        if (!have_chi) {
          chij = chi.eval_jet(pt);
          have_chi = true;
        }
        term = term * exp(chij * static_cast<double>(s));
      }
      out += term;
    }
    return out;
  }

  cplx eval(const Point& pt, const Poly& chi) const {
    cplx out = 0.0;
    for (const auto& [s, p] : t_) {
      cplx term = p.eval(pt);
      if (s != 0) term *= std::exp(static_cast<double>(s) * chi.eval(pt));
      out += term;
    }
    return out;
  }

 private:
  void add_term(int s, Poly p) {
    if (p.is_zero()) return;
    for (auto& [ts, tp] : t_) {
      if (ts == s) {
        tp += p;
        prune();
        return;
      }
    }
    t_.push_back({s, std::move(p)});
    std::sort(t_.begin(), t_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  void prune() {
    std::erase_if(t_, [](const auto& t) { return t.second.is_zero(); });
  }

  std::vector<std::pair<int, Poly>> t_;
};

inline PolyExp operator*(cplx c, const PolyExp& p) { return p * c; }
inline PolyExp operator*(double c, const PolyExp& p) { return p * c; }

inline bool scalar_is_zero(const PolyExp& p) { return p.is_zero(); }

}  // namespace clv
