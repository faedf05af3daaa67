#pragma once

#include "clv/calculus.hpp"
#include "clv/field.hpp"
#include "clv/gamma.hpp"

namespace clv {

template <class S>
void add_to(Spinor<S>& a, const Spinor<S>& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}
template <class S>
void sub_to(Spinor<S>& a, const Spinor<S>& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
}
template <class S, class T>
Spinor<S> scaled(Spinor<S> a, const T& t) {
  for (auto& v : a) v = v * t;
  return a;
}

// ---------------------------------------------------------------------------
// jet path
// ---------------------------------------------------------------------------

/// ∇_{X_a} ψ = X_a(ψ) + (1/4) B_a · ψ with the connection bivector acting by
/// left Clifford multiplication.
inline Spinor<Jet> spinor_nabla_from_jets(const Geometry& g, const GammaRep& rep,
                                          const Spinor<Jet>& psi, int a,
                                          const Point& p) {
  Spinor<Jet> out(psi.size());
  const Jet hj = g.frame_scale().eval_jet(p);
  for (size_t i = 0; i < psi.size(); ++i) out[i] = hj * shift_partial(psi[i], a);
  if (g.curved()) {
    const Multivector<Jet> b = g.connection_bivector(a, p);
    add_to(out, scaled(rep.act(b, psi), 0.25));
  }
  return out;
}

inline void require_depth(const SpinorField& f, int needed, const char* what) {
  if (f.depth() < needed)
    throw PreconditionError(
        "", std::string(what) + ": jet depth exhausted (have " +
                std::to_string(f.depth()) + ", need " + std::to_string(needed) + ")");
}

inline SpinorField spinor_covariant_derivative(const Geometry& g,
                                               const GammaRep& rep,
                                               const SpinorField& f, int a) {
  require_depth(f, 1, "spinor_covariant_derivative");
  return SpinorField::closure(
      f.sig(), f.dim(),
      [g, &rep, f, a](const Point& p) {
        return spinor_nabla_from_jets(g, rep, f.eval(p), a, p);
      },
      f.depth() - 1);
}

inline Spinor<Jet> spinor_covariant_derivative_at(const Geometry& g,
                                                  const GammaRep& rep,
                                                  const SpinorField& f, int a,
                                                  const Point& p) {
  require_depth(f, 1, "spinor_covariant_derivative");
  return spinor_nabla_from_jets(g, rep, f.eval(p), a, p);
}

inline Spinor<Jet> dirac_from_jets(const Geometry& g, const GammaRep& rep,
                                   const Spinor<Jet>& psi, const Point& p) {
  Spinor<Jet> out(psi.size());
  for (int a = 0; a < g.sig().n; ++a)
    add_to(out, rep.act_frame(a, spinor_nabla_from_jets(g, rep, psi, a, p)));
  return out;
}

/// Dirac operator D̸ = e^a · ∇_{X_a}.
inline SpinorField dirac(const Geometry& g, const GammaRep& rep,
                         const SpinorField& f) {
  require_depth(f, 1, "dirac");
  return SpinorField::closure(
      f.sig(), f.dim(),
      [g, &rep, f](const Point& p) { return dirac_from_jets(g, rep, f.eval(p), p); },
      f.depth() - 1);
}

inline Spinor<Jet> dirac_at(const Geometry& g, const GammaRep& rep,
                            const SpinorField& f, const Point& p) {
  require_depth(f, 1, "dirac");
  return dirac_from_jets(g, rep, f.eval(p), p);
}

/// Penrose operator residual ∇_{X_a} ψ - (1/n) e_a · D̸ψ for one direction.
inline Spinor<Jet> penrose_residual_at(const Geometry& g, const GammaRep& rep,
                                       const SpinorField& f, int a,
                                       const Point& p) {
  require_depth(f, 1, "penrose_residual");
  const Spinor<Jet> psi = f.eval(p);
  Spinor<Jet> out = spinor_nabla_from_jets(g, rep, psi, a, p);
  Spinor<Jet> dpsi = dirac_from_jets(g, rep, psi, p);
  const double c = static_cast<double>(g.sig().metric(a)) / g.sig().n;
  sub_to(out, scaled(rep.act_frame(a, dpsi), c));
  return out;
}

/// Spinor trace of the Hessian, gauged analogue handled in gauge.hpp.
inline Spinor<Jet> spinor_trace_hessian_at(const Geometry& g, const GammaRep& rep,
                                           const SpinorField& f, const Point& p) {
  require_depth(f, 2, "spinor_trace_hessian");
  const Signature& sig = g.sig();
  Spinor<Jet> out(f.dim());
  for (int a = 0; a < sig.n; ++a) {
    SpinorField inner = spinor_covariant_derivative(g, rep, f, a);
    add_to(out, scaled(spinor_covariant_derivative_at(g, rep, inner, a, p),
                       static_cast<double>(sig.metric(a))));
  }
  const Spinor<Jet> psi = f.eval(p);
  for (int c = 0; c < sig.n; ++c) {
    const Poly v = g.hessian_trace_vector(c);
    if (v.is_zero()) continue;
    sub_to(out, scaled(spinor_nabla_from_jets(g, rep, psi, c, p), v.eval_jet(p)));
  }
  return out;
}

/// Lichnerowicz residual D̸²ψ - ∇²ψ + (1/4)𝓡ψ.
inline Spinor<Jet> lichnerowicz_residual_at(const Geometry& g, const GammaRep& rep,
                                            const CurvaturePack& pack,
                                            const SpinorField& f, const Point& p) {
  Spinor<Jet> out = dirac_at(g, rep, dirac(g, rep, f), p);
  sub_to(out, spinor_trace_hessian_at(g, rep, f, p));
  add_to(out, scaled(f.eval(p), 0.25 * pack.scalar));
  return out;
}

/// Spinor curvature commutator oracle, compared against (1/2) R_ab · ψ.
inline Spinor<Jet> spinor_curvature_commutator_at(const Geometry& g,
                                                  const GammaRep& rep,
                                                  const SpinorField& f, int a,
                                                  int b, const Point& p) {
  require_depth(f, 2, "spinor_curvature_commutator");
  SpinorField nb = spinor_covariant_derivative(g, rep, f, b);
  SpinorField na = spinor_covariant_derivative(g, rep, f, a);
  Spinor<Jet> out = spinor_covariant_derivative_at(g, rep, nb, a, p);
  sub_to(out, spinor_covariant_derivative_at(g, rep, na, b, p));
  const Spinor<Jet> psi = f.eval(p);
  for (int c = 0; c < g.sig().n; ++c) {
    const Poly coeff = g.bracket_coeff(a, b, c);
    if (coeff.is_zero()) continue;
    sub_to(out, scaled(spinor_nabla_from_jets(g, rep, psi, c, p), coeff.eval_jet(p)));
  }
  return out;
}

struct TwistorIntegrability {
  Spinor<cplx> dirac_square;            // D̸²ψ + (n / 4(n-1)) 𝓡 ψ
  std::vector<Spinor<cplx>> grad_dirac; // ∇_a D̸ψ - (n/2) K_a · ψ, per a
  std::vector<Spinor<cplx>> conformal;  // C_ab · ψ, per ordered pair a < b
  double max_norm = 0.0;
};

inline Spinor<cplx> values_of(const Spinor<Jet>& s) {
  Spinor<cplx> out(s.size());
  for (size_t i = 0; i < s.size(); ++i) out[i] = s[i].v;
  return out;
}

inline Spinor<cplx> act_value(const GammaRep& rep, const Multivector<cplx>& w,
                              const Spinor<cplx>& psi) {
  return rep.act(w, psi);
}

/// Integrability residuals of the twistor equation.
inline TwistorIntegrability twistor_integrability_at(const Geometry& g,
                                                     const GammaRep& rep,
                                                     const CurvaturePack& pack,
                                                     const SpinorField& f,
                                                     const Point& p) {
  const int n = g.sig().n;
  TwistorIntegrability out;

  Spinor<Jet> dsq = dirac_at(g, rep, dirac(g, rep, f), p);
  Spinor<cplx> psi = values_of(f.eval(p));
  out.dirac_square = values_of(dsq);
  add_to(out.dirac_square,
         scaled(psi, cplx(pack.scalar * n / (4.0 * (n - 1)))));
  out.max_norm = norm(out.dirac_square);

  SpinorField dpsi_field = dirac(g, rep, f);
  for (int a = 0; a < n; ++a) {
    Spinor<cplx> r =
        values_of(spinor_covariant_derivative_at(g, rep, dpsi_field, a, p));
    sub_to(r, scaled(act_value(rep, pack.k_a[a], psi), cplx(n / 2.0)));
    out.max_norm = std::max(out.max_norm, norm(r));
    out.grad_dirac.push_back(std::move(r));
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Spinor<cplx> r = act_value(rep, pack.C(a, b), psi);
      out.max_norm = std::max(out.max_norm, norm(r));
      out.conformal.push_back(std::move(r));
    }
  return out;
}

/// Massive Dirac residual D̸ψ - mψ.
inline Spinor<cplx> massive_residual_at(const Geometry& g, const GammaRep& rep,
                                        const SpinorField& f, double m,
                                        const Point& p) {
  Spinor<cplx> r = values_of(dirac_at(g, rep, f, p));
  sub_to(r, scaled(values_of(f.eval(p)), cplx(m)));
  return r;
}

// ---------------------------------------------------------------------------
// Dirac currents
// ---------------------------------------------------------------------------

/// Grade-p Dirac current (ψ ψ̄)_p = (e_{a_1} ... e_{a_p} · ψ, ψ) e^{a_1} ∧ ...
/// with the index sum running over all tuples, so each ascending blade
/// carries p! identical contributions.
inline Multivector<cplx> dirac_current(const Signature& sig, const GammaRep& rep,
                                       const DualPairing& pairing,
                                       const Spinor<cplx>& psi, int p) {
  if (p < 0 || p > sig.n) throw UsageError("dirac_current: grade out of range");
  Multivector<cplx> out(sig);
  double fact = 1.0;
  for (int i = 2; i <= p; ++i) fact *= i;
  for (unsigned mask = 0; mask < sig.blade_count(); ++mask) {
    if (blades::grade(mask) != p) continue;
    double lower = 1.0;  // e_a = ε_a e^a per factor
    for (int a = 0; a < sig.n; ++a)
      if (mask & (1u << a)) lower *= sig.metric(a);
    Spinor<cplx> acted(psi.size());
    const Matrix& bl = rep.blade(mask);
    for (int i = 0; i < rep.dim(); ++i)
      for (int j = 0; j < rep.dim(); ++j) acted[i] += bl.at(i, j) * psi[j];
    out[mask] = fact * lower * pairing.pair(acted, psi);
  }
  return out;
}

// ---------------------------------------------------------------------------
// analytic path
// ---------------------------------------------------------------------------

inline AnalyticSpinor spinor_nabla_analytic(const Geometry& g, const GammaRep& rep,
                                            const AnalyticSpinor& f, int a) {
  AnalyticSpinor out;
  out.chi = f.chi;
  out.comp.resize(f.comp.size());
  const PolyExp hp{g.frame_scale()};
  for (size_t i = 0; i < f.comp.size(); ++i)
    out.comp[i] = hp * f.comp[i].partial(a, f.chi);
  if (g.curved()) {
    const Multivector<PolyExp> b = g.connection_bivector_poly(a);
    add_to(out.comp, scaled(rep.act(b, f.comp), PolyExp(0.25)));
  }
  return out;
}

inline AnalyticSpinor dirac_analytic(const Geometry& g, const GammaRep& rep,
                                     const AnalyticSpinor& f) {
  AnalyticSpinor out;
  out.chi = f.chi;
  out.comp.resize(f.comp.size());
  for (int a = 0; a < g.sig().n; ++a)
    add_to(out.comp, rep.act_frame(a, spinor_nabla_analytic(g, rep, f, a).comp));
  return out;
}

}  // namespace clv
