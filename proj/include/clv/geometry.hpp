#pragma once

#include <cmath>
#include <vector>

#include "clv/multivector.hpp"
#include "clv/poly.hpp"

namespace clv {

/// Closed-form curvature data of a backend, in frame components.
struct CurvaturePack {
  std::vector<Multivector<cplx>> r_ab;  // n*n curvature 2-forms, row-major
  std::vector<Multivector<cplx>> p_a;   // Ricci 1-forms
  double scalar = 0.0;                  // curvature scalar
  std::vector<Multivector<cplx>> c_ab;  // conformal 2-forms
  std::vector<Multivector<cplx>> k_a;   // Schouten-type 1-forms of Eq-(44) kind

  const Multivector<cplx>& R(int a, int b) const { return r_ab[a * n + b]; }
  const Multivector<cplx>& C(int a, int b) const { return c_ab[a * n + b]; }
  int n = 0;
};

/// Geometry backend: flat chart or the constant-curvature conformally-flat
/// chart e^a = h^{-1} dx^a with h = 1 + (k/4) <x,x>. Frame vectors are
/// X_a = h ∂_a, connection coefficients come from the jet of h, and the
/// closed-form curvature must pass the commutator certification rather than
/// being trusted.
class Geometry {
 public:
  static Geometry flat(Signature sig) { return Geometry(sig, 0.0, false); }

  static Geometry constant_curvature(Signature sig, double k) {
    return Geometry(sig, k, true);
  }

  const Signature& sig() const { return sig_; }
  int dim() const { return sig_.n; }
  bool curved() const { return curved_; }
  double curvature_k() const { return curved_ ? k_ : 0.0; }

  /// h with X_a = h ∂_a (identically 1 on the flat backend).
  const Poly& frame_scale() const { return h_; }

  /// ω_{ab}(X_c), both lower indices, as an exact polynomial.
  const Poly& connection_coeff(int a, int b, int c) const {
    return conn_[(a * sig_.n + b) * sig_.n + c];
  }

  /// Connection bivector B_c = Σ_{a,b} ω_{ab}(X_c) e^a e^b evaluated at p.
  /// The covariant derivative acts as X_c + (1/4)[B_c, ·] on forms and
  /// X_c + (1/4) B_c· on spinors.
  Multivector<Jet> connection_bivector(int c, const Point& p) const {
    Multivector<Jet> b(sig_);
    if (!curved_) return b;
    for (int i = 0; i < sig_.n; ++i)
      for (int j = 0; j < sig_.n; ++j) {
        if (i == j) continue;
        const Poly& w = connection_coeff(i, j, c);
        if (w.is_zero()) continue;
        const unsigned mask = (1u << i) | (1u << j);
        const double sign = blades::reorder_sign(1u << i, 1u << j);
        b[mask] += w.eval_jet(p) * sign;
      }
    return b;
  }

  Multivector<PolyExp> connection_bivector_poly(int c) const {
    Multivector<PolyExp> b(sig_);
    if (!curved_) return b;
    for (int i = 0; i < sig_.n; ++i)
      for (int j = 0; j < sig_.n; ++j) {
        if (i == j) continue;
        const Poly& w = connection_coeff(i, j, c);
        if (w.is_zero()) continue;
        const unsigned mask = (1u << i) | (1u << j);
        const double sign = blades::reorder_sign(1u << i, 1u << j);
        b[mask] += PolyExp(w * cplx(sign));
      }
    return b;
  }

  /// Components of Σ_a ε_a ∇_{X_a} X_a, the vector subtracted in the trace
  /// of the Hessian: V^c = Σ_a ε_a ε_c ω_{ca}(X_a).
  Poly hessian_trace_vector(int c) const {
    Poly v;
    if (!curved_) return v;
    for (int a = 0; a < sig_.n; ++a) {
      const Poly& w = connection_coeff(c, a, a);
      if (w.is_zero()) continue;
      v += w * cplx(static_cast<double>(sig_.metric(a) * sig_.metric(c)));
    }
    return v;
  }

  /// Structure coefficients [X_a, X_b] = C^c_{ab} X_c from torsion freeness.
  Poly bracket_coeff(int a, int b, int c) const {
    Poly r;
    if (!curved_) return r;
    r += connection_coeff(c, b, a) * cplx(static_cast<double>(sig_.metric(c)));
    r -= connection_coeff(c, a, b) * cplx(static_cast<double>(sig_.metric(c)));
    return r;
  }

  CurvaturePack curvature() const {
    CurvaturePack pk;
    const int n = sig_.n;
    pk.n = n;
    const double k = curvature_k();
    pk.scalar = k * n * (n - 1);
    pk.r_ab.reserve(n * n);
    pk.c_ab.reserve(n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Multivector<cplx> r(sig_);
        if (a != b && k != 0.0) {
          const double low = sig_.metric(a) * sig_.metric(b);
          const unsigned mask = (1u << a) | (1u << b);
          r[mask] = k * low * blades::reorder_sign(1u << a, 1u << b);
        }
        pk.r_ab.push_back(r);
        pk.c_ab.push_back(Multivector<cplx>(sig_));  // zero in both backends
      }
    for (int a = 0; a < n; ++a) {
      Multivector<cplx> p(sig_);
      p[1u << a] = k * (n - 1) * sig_.metric(a);
      pk.p_a.push_back(p);
      Multivector<cplx> ka(sig_);
      ka[1u << a] = -(k / 2.0) * sig_.metric(a);
      pk.k_a.push_back(ka);
    }
    return pk;
  }

  bool chart_ok(const Point& p) const {
    if (!curved_) return true;
    return std::abs(h_.eval(p).real()) >= 0.1;
  }

  /// Box sampling with the chart rejection policy. Returns the number of
  /// rejected draws through `rejected` when non-null.
  Point sample_point(Rng& rng, int* rejected = nullptr) const {
    for (int tries = 0; tries < 1000; ++tries) {
      Point p = rng.next_point(sig_.n);
      if (chart_ok(p)) return p;
      if (rejected) ++*rejected;
    }
    throw SingularityError("point sampling failed: chart domain too small");
  }

 private:
  Geometry(Signature sig, double k, bool curved)
      : sig_(sig), k_(k), curved_(curved && k != 0.0) {
    conn_.assign(sig_.n * sig_.n * sig_.n, Poly());
    if (curved_) {
      // h = 1 + (k/4) Σ ε_mu x_mu^2
      h_ = Poly::constant(1.0);
      for (int mu = 0; mu < sig_.n; ++mu) {
        Mono m;
        m.e[mu] = 2;
        h_ += Poly::monomial(m, cplx(k_ / 4.0 * sig_.metric(mu)));
      }
      // ω_{ab}(X_c) = ε_b ∂_a h δ_{bc} − ε_a ∂_b h δ_{ac}
      for (int a = 0; a < sig_.n; ++a)
        for (int b = 0; b < sig_.n; ++b)
          for (int c = 0; c < sig_.n; ++c) {
            Poly w;
            if (b == c)
              w += h_.partial(a) * cplx(static_cast<double>(sig_.metric(b)));
            if (a == c)
              w -= h_.partial(b) * cplx(static_cast<double>(sig_.metric(a)));
            conn_[(a * sig_.n + b) * sig_.n + c] = w;
          }
    } else {
      h_ = Poly::constant(1.0);
    }
  }

  Signature sig_;
  double k_;
  bool curved_;
  Poly h_;
  std::vector<Poly> conn_;
};

}  // namespace clv
