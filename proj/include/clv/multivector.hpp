#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "clv/errors.hpp"
#include "clv/signature.hpp"

namespace clv {

using cplx = std::complex<double>;

inline bool scalar_is_zero(const cplx& c) { return c == cplx(0.0); }

/// Dense multivector over the 2^n blade basis of an orthonormal frame.
/// Blade bitmask convention: bit a set <=> e^{a+1} present, factors ordered
/// by ascending index. The scalar model S is complex for plain values and a
/// jet (or polynomial) type for field coefficients.
template <class S>
class Multivector {
 public:
  explicit Multivector(Signature sig) : sig_(sig), c_(sig.blade_count()) {}

  static Multivector zero(Signature sig) { return Multivector(sig); }

  static Multivector blade(Signature sig, unsigned mask, S coeff) {
    Multivector m(sig);
    m.c_[mask] = std::move(coeff);
    return m;
  }

  static Multivector scalar(Signature sig, S value) {
    return blade(sig, 0u, std::move(value));
  }

  const Signature& sig() const { return sig_; }
  int dim() const { return sig_.n; }
  unsigned size() const { return static_cast<unsigned>(c_.size()); }

  S& operator[](unsigned mask) { return c_[mask]; }
  const S& operator[](unsigned mask) const { return c_[mask]; }

  Multivector& operator+=(const Multivector& o) {
    check_sig(o);
    for (unsigned i = 0; i < size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    check_sig(o);
    for (unsigned i = 0; i < size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend Multivector operator+(Multivector a, const Multivector& b) {
    a += b;
    return a;
  }
  friend Multivector operator-(Multivector a, const Multivector& b) {
    a -= b;
    return a;
  }
  Multivector operator-() const {
    Multivector r(sig_);
    for (unsigned i = 0; i < size(); ++i) r.c_[i] = -c_[i];
    return r;
  }

  template <class T>
  Multivector& scale(const T& t) {
    for (auto& v : c_) v = v * t;
    return *this;
  }

  void check_sig(const Multivector& o) const {
    if (sig_ != o.sig_) throw UsageError("multivector signature mismatch");
  }

 private:
  Signature sig_;
  std::vector<S> c_;
};

template <class S, class T>
Multivector<S> operator*(Multivector<S> m, const T& t) {
  m.scale(t);
  return m;
}
template <class S, class T>
Multivector<S> operator*(const T& t, Multivector<S> m) {
  m.scale(t);
  return m;
}

/// e^{a+1} as a multivector value.
template <class S>
Multivector<S> coframe_form(Signature sig, int a, S one) {
  return Multivector<S>::blade(sig, 1u << a, std::move(one));
}

// ---------------------------------------------------------------------------
// exterior / Clifford kernels
// ---------------------------------------------------------------------------

namespace detail_mv {

/// Slots worth multiplying; sparse inputs dominate in practice.
template <class S>
void nonzero_slots(const Multivector<S>& m, std::vector<unsigned>& out) {
  out.clear();
  for (unsigned i = 0; i < m.size(); ++i)
    if (!scalar_is_zero(m[i])) out.push_back(i);
}

}  // namespace detail_mv

template <class S>
Multivector<S> wedge(const Multivector<S>& a, const Multivector<S>& b) {
  a.check_sig(b);
  Multivector<S> r(a.sig());
  std::vector<unsigned> ia, ib;
  detail_mv::nonzero_slots(a, ia);
  detail_mv::nonzero_slots(b, ib);
  for (unsigned i : ia) {
    for (unsigned j : ib) {
      if (i & j) continue;  // repeated factor
      const double s = blades::reorder_sign(i, j);
      r[i | j] += (a[i] * b[j]) * s;
    }
  }
  return r;
}

/// Contraction i_{X_{a+1}} with the frame vector; antiderivation of degree -1.
template <class S>
Multivector<S> interior(int a, const Multivector<S>& m) {
  if (a < 0 || a >= m.dim()) throw UsageError("interior: bad frame index");
  Multivector<S> r(m.sig());
  const unsigned bit = 1u << a;
  for (unsigned i = 0; i < m.size(); ++i) {
    if (!(i & bit)) continue;
    const double s = blades::contraction_sign(i, a);
    r[i & ~bit] += m[i] * s;
  }
  return r;
}

/// Contraction with the raised frame vector X^{a+1} = g^{aa} X_{a+1}.
template <class S>
Multivector<S> interior_raised(int a, const Multivector<S>& m) {
  Multivector<S> r = interior(a, m);
  if (m.sig().metric(a) < 0) r.scale(-1.0);
  return r;
}

template <class S>
Multivector<S> clifford(const Multivector<S>& a, const Multivector<S>& b) {
  a.check_sig(b);
  const Signature& sig = a.sig();
  Multivector<S> r(sig);
  std::vector<unsigned> ia, ib;
  detail_mv::nonzero_slots(a, ia);
  detail_mv::nonzero_slots(b, ib);
  for (unsigned i : ia) {
    for (unsigned j : ib) {
      int s = blades::reorder_sign(i, j);
      unsigned common = i & j;
      while (common) {
        const int bitpos = std::countr_zero(common);
        s *= sig.metric(bitpos);
        common &= common - 1;
      }
      r[i ^ j] += (a[i] * b[j]) * static_cast<double>(s);
    }
  }
  return r;
}

/// Main automorphism: grade-p part scaled by (-1)^p.
template <class S>
Multivector<S> eta(const Multivector<S>& m) {
  Multivector<S> r(m.sig());
  for (unsigned i = 0; i < m.size(); ++i)
    r[i] = (blades::grade(i) & 1) ? -m[i] : m[i];
  return r;
}

template <class S>
Multivector<S> grade_project(const Multivector<S>& m, int p) {
  if (p < 0 || p > m.dim()) throw UsageError("grade_project: grade out of range");
  Multivector<S> r(m.sig());
  for (unsigned i = 0; i < m.size(); ++i)
    if (blades::grade(i) == p) r[i] = m[i];
  return r;
}

/// Degree operator e^a ∧ i_{X_a}: multiplies each grade-p part by p.
template <class S>
Multivector<S> pi_degree(const Multivector<S>& m) {
  Multivector<S> r(m.sig());
  for (unsigned i = 0; i < m.size(); ++i)
    r[i] = m[i] * static_cast<double>(blades::grade(i));
  return r;
}

template <class S>
Multivector<S> clifford_bracket(const Multivector<S>& a,
                                const Multivector<S>& b) {
  return clifford(a, b) - clifford(b, a);
}

/// Contraction form of the bracket, valid when `two_form` is homogeneous of
/// grade 2: [F, b] = -2 i_{X^a} F ∧ i_{X_a} b.
template <class S>
Multivector<S> clifford_bracket_two_form(const Multivector<S>& two_form,
                                         const Multivector<S>& b) {
  Multivector<S> r(b.sig());
  for (int a = 0; a < b.dim(); ++a)
    r += wedge(interior_raised(a, two_form), interior(a, b));
  r.scale(-2.0);
  return r;
}

/// Brute-force frame sandwich Σ_a e^a · m · e_a. On a homogeneous grade-p
/// input this equals (-1)^p (n-2p) m, and (n - 2Π) η m in general.
template <class S>
Multivector<S> frame_sandwich(const Multivector<S>& m) {
  const Signature& sig = m.sig();
  Multivector<S> r(sig);
  S one{};
  one += cplx(1.0, 0.0);  // scalar unit in the coefficient model
  for (int a = 0; a < sig.n; ++a) {
    auto ea = coframe_form<S>(sig, a, one);
    auto lowered = ea * static_cast<double>(sig.metric(a));
    r += clifford(clifford(ea, m), lowered);
  }
  return r;
}

/// Closed form (n - 2Π) η m of the frame sandwich.
template <class S>
Multivector<S> frame_sandwich_closed_form(const Multivector<S>& m) {
  const int n = m.dim();
  Multivector<S> r(m.sig());
  for (unsigned i = 0; i < m.size(); ++i) {
    const int p = blades::grade(i);
    const double f = (p & 1 ? -1.0 : 1.0) * (n - 2.0 * p);
    r[i] = m[i] * f;
  }
  return r;
}

// value-level norms (complex coefficients)

inline double norm(const Multivector<cplx>& m) {
  double s = 0;
  for (unsigned i = 0; i < m.size(); ++i) s += std::norm(m[i]);
  return std::sqrt(s);
}

inline Multivector<cplx> value_part(const Multivector<cplx>& m) { return m; }

}  // namespace clv
