#pragma once

#include "clv/field.hpp"
#include "clv/geometry.hpp"

namespace clv {

inline Multivector<cplx> value_jets(const Multivector<Jet>& m) {
  Multivector<cplx> out(m.sig());
  for (unsigned i = 0; i < m.size(); ++i) out[i] = m[i].v;
  return out;
}

// ---------------------------------------------------------------------------
// jet path: generic transformers on arbitrary form fields
// ---------------------------------------------------------------------------

/// ∇_{X_a} assembled from already-evaluated coefficient jets:
/// X_a(coeffs) + (1/4)[B_a, ·]. The directional term costs one jet order.
inline Multivector<Jet> nabla_from_jets(const Geometry& g,
                                        const Multivector<Jet>& f, int a,
                                        const Point& p) {
  const Signature& sig = g.sig();
  Multivector<Jet> out(sig);
  const Jet hj = g.frame_scale().eval_jet(p);
  for (unsigned m = 0; m < f.size(); ++m) {
    if (scalar_is_zero(f[m])) continue;
    out[m] = hj * shift_partial(f[m], a);
  }
  if (g.curved()) {
    const Multivector<Jet> b = g.connection_bivector(a, p);
    out += clifford_bracket(b, f) * 0.25;
  }
  return out;
}

inline void require_depth(const FormField& f, int needed, const char* what) {
  if (f.depth() < needed)
    throw PreconditionError(
        "", std::string(what) + ": jet depth exhausted (have " +
                std::to_string(f.depth()) + ", need " + std::to_string(needed) + ")");
}

inline FormField covariant_derivative(const Geometry& g, const FormField& f,
                                      int a) {
  require_depth(f, 1, "covariant_derivative");
  return FormField::closure(
      f.sig(),
      [g, f, a](const Point& p) { return nabla_from_jets(g, f.eval(p), a, p); },
      f.depth() - 1);
}

inline Multivector<Jet> covariant_derivative_at(const Geometry& g,
                                                const FormField& f, int a,
                                                const Point& p) {
  require_depth(f, 1, "covariant_derivative");
  return nabla_from_jets(g, f.eval(p), a, p);
}

namespace detail {

enum class DiffKind { Exterior, CoDerivative, HodgeDeRham };

inline Multivector<Jet> first_order_from_jets(const Geometry& g,
                                              const Multivector<Jet>& f,
                                              const Point& p, DiffKind kind) {
  const Signature& sig = g.sig();
  Multivector<Jet> out(sig);
  for (int a = 0; a < sig.n; ++a) {
    Multivector<Jet> na = nabla_from_jets(g, f, a, p);
    switch (kind) {
      case DiffKind::Exterior:
        out += wedge(coframe_form<Jet>(sig, a, Jet(1.0)), na);
        break;
      case DiffKind::CoDerivative:
        out -= interior_raised(a, na);
        break;
      case DiffKind::HodgeDeRham:
        out += clifford(coframe_form<Jet>(sig, a, Jet(1.0)), na);
        break;
    }
  }
  return out;
}

inline FormField first_order(const Geometry& g, const FormField& f,
                             DiffKind kind, const char* what) {
  require_depth(f, 1, what);
  return FormField::closure(
      f.sig(),
      [g, f, kind](const Point& p) {
        return first_order_from_jets(g, f.eval(p), p, kind);
      },
      f.depth() - 1);
}

}  // namespace detail

/// d = e^a ∧ ∇_{X_a}
inline FormField d(const Geometry& g, const FormField& f) {
  return detail::first_order(g, f, detail::DiffKind::Exterior, "d");
}
/// δ = -i_{X^a} ∇_{X_a}
inline FormField delta(const Geometry& g, const FormField& f) {
  return detail::first_order(g, f, detail::DiffKind::CoDerivative, "delta");
}
/// Hodge–de Rham operator e^a · ∇_{X_a} = d - δ
inline FormField hodge_de_rham(const Geometry& g, const FormField& f) {
  return detail::first_order(g, f, detail::DiffKind::HodgeDeRham, "hodge_de_rham");
}

inline Multivector<Jet> d_at(const Geometry& g, const FormField& f, const Point& p) {
  require_depth(f, 1, "d");
  return detail::first_order_from_jets(g, f.eval(p), p, detail::DiffKind::Exterior);
}
inline Multivector<Jet> delta_at(const Geometry& g, const FormField& f, const Point& p) {
  require_depth(f, 1, "delta");
  return detail::first_order_from_jets(g, f.eval(p), p, detail::DiffKind::CoDerivative);
}
inline Multivector<Jet> hodge_de_rham_at(const Geometry& g, const FormField& f,
                                         const Point& p) {
  require_depth(f, 1, "hodge_de_rham");
  return detail::first_order_from_jets(g, f.eval(p), p, detail::DiffKind::HodgeDeRham);
}

/// Trace of the Hessian ∇² = ∇_{X^a} ∇_{X_a} - ∇_{∇_{X^a} X_a}.
inline Multivector<Jet> trace_hessian_at(const Geometry& g, const FormField& f,
                                         const Point& p) {
  require_depth(f, 2, "trace_hessian");
  const Signature& sig = g.sig();
  Multivector<Jet> out(sig);
  for (int a = 0; a < sig.n; ++a) {
    FormField inner = covariant_derivative(g, f, a);
    out += covariant_derivative_at(g, inner, a, p) *
           static_cast<double>(sig.metric(a));
  }
  const Multivector<Jet> fj = f.eval(p);
  for (int c = 0; c < sig.n; ++c) {
    const Poly v = g.hessian_trace_vector(c);
    if (v.is_zero()) continue;
    out -= v.eval_jet(p) * nabla_from_jets(g, fj, c, p);
  }
  return out;
}

/// Laplace operator via the square of the Hodge–de Rham operator.
inline Multivector<Jet> laplace_at(const Geometry& g, const FormField& f,
                                   const Point& p) {
  require_depth(f, 2, "laplace");
  return hodge_de_rham_at(g, hodge_de_rham(g, f), p);
}

/// Laplace operator via -dδ - δd (route cross-checked against laplace_at).
inline Multivector<Jet> laplace_dd_at(const Geometry& g, const FormField& f,
                                      const Point& p) {
  require_depth(f, 2, "laplace");
  Multivector<Jet> r = d_at(g, delta(g, f), p);
  r += delta_at(g, d(g, f), p);
  return -r;
}

/// Curvature action R(X_a, X_b) α = (1/2)[R_ab, α] from the backend's
/// closed-form curvature 2-forms.
inline Multivector<Jet> curvature_action_at(const Geometry&,
                                            const CurvaturePack& pack,
                                            const FormField& f, int a, int b,
                                            const Point& p) {
  Multivector<Jet> fj = f.eval(p);
  Multivector<Jet> rab(f.sig());
  const Multivector<cplx>& r = pack.R(a, b);
  for (unsigned m = 0; m < r.size(); ++m) rab[m] = Jet(r[m]);
  return clifford_bracket(rab, fj) * 0.5;
}

/// Second-covariant-derivative commutator oracle for the curvature action:
/// ∇_a ∇_b f - ∇_b ∇_a f - ∇_{[X_a, X_b]} f, fully jet-based.
inline Multivector<Jet> curvature_commutator_at(const Geometry& g,
                                                const FormField& f, int a,
                                                int b, const Point& p) {
  require_depth(f, 2, "curvature_commutator");
  FormField nb = covariant_derivative(g, f, b);
  FormField na = covariant_derivative(g, f, a);
  Multivector<Jet> out = covariant_derivative_at(g, nb, a, p);
  out -= covariant_derivative_at(g, na, b, p);
  const Multivector<Jet> fj = f.eval(p);
  for (int c = 0; c < g.sig().n; ++c) {
    const Poly coeff = g.bracket_coeff(a, b, c);
    if (coeff.is_zero()) continue;
    out -= coeff.eval_jet(p) * nabla_from_jets(g, fj, c, p);
  }
  return out;
}

/// Curvature endomorphism I(R) = e^a ∧ i_{X^b} R(X_b, X_a).
inline Multivector<Jet> curvature_endomorphism_at(const Geometry& g,
                                                  const CurvaturePack& pack,
                                                  const FormField& f,
                                                  const Point& p) {
  const Signature& sig = g.sig();
  Multivector<Jet> out(sig);
  for (int a = 0; a < sig.n; ++a)
    for (int b = 0; b < sig.n; ++b) {
      Multivector<Jet> act = curvature_action_at(g, pack, f, b, a, p);
      out += wedge(coframe_form<Jet>(sig, a, Jet(1.0)), interior_raised(b, act));
    }
  return out;
}

/// I(R) α = (1/4) R_ab · α · e^{ab} + (1/4) 𝓡 α (Clifford-product route).
inline Multivector<cplx> curvature_endomorphism_clifford(
    const CurvaturePack& pack, const Multivector<cplx>& alpha) {
  const Signature sig = alpha.sig();
  Multivector<cplx> out(sig);
  for (int a = 0; a < pack.n; ++a)
    for (int b = 0; b < pack.n; ++b) {
      if (a == b) continue;
      auto eab = wedge(coframe_form<cplx>(sig, a, 1.0),
                       coframe_form<cplx>(sig, b, 1.0));
      out += clifford(clifford(pack.R(a, b), alpha), eab);
    }
  out.scale(0.25);
  out += alpha * (0.25 * pack.scalar);
  return out;
}

/// I(R) α = P_a ∧ i_{X^a} α - R_ab ∧ i_{X^b} i_{X^a} α (wedge route).
inline Multivector<cplx> curvature_endomorphism_wedge(
    const CurvaturePack& pack, const Multivector<cplx>& alpha) {
  Multivector<cplx> out(alpha.sig());
  for (int a = 0; a < pack.n; ++a)
    out += wedge(pack.p_a[a], interior_raised(a, alpha));
  for (int a = 0; a < pack.n; ++a)
    for (int b = 0; b < pack.n; ++b)
      out -= wedge(pack.R(a, b), interior_raised(b, interior_raised(a, alpha)));
  return out;
}

/// Weitzenböck residual d̸² f - ∇² f + I(R) f; zero for a correct backend.
inline Multivector<Jet> weitzenbock_residual_at(const Geometry& g,
                                                const CurvaturePack& pack,
                                                const FormField& f,
                                                const Point& p) {
  Multivector<Jet> r = laplace_at(g, f, p);
  r -= trace_hessian_at(g, f, p);
  r += curvature_endomorphism_at(g, pack, f, p);
  return r;
}

// ---------------------------------------------------------------------------
// analytic path: exact symbolic calculus on the PolyExp family
// ---------------------------------------------------------------------------

inline AnalyticForm nabla_analytic(const Geometry& g, const AnalyticForm& f,
                                   int a) {
  AnalyticForm out{f.mv.sig()};
  out.chi = f.chi;
  const Poly& h = g.frame_scale();
  const PolyExp hp{h};
  for (unsigned m = 0; m < f.mv.size(); ++m) {
    if (f.mv[m].is_zero()) continue;
    out.mv[m] = hp * f.mv[m].partial(a, f.chi);
  }
  if (g.curved()) {
    const Multivector<PolyExp> b = g.connection_bivector_poly(a);
    out.mv += clifford_bracket(b, f.mv) * PolyExp(0.25);
  }
  return out;
}

inline AnalyticForm d_analytic(const Geometry& g, const AnalyticForm& f) {
  AnalyticForm out{f.mv.sig()};
  out.chi = f.chi;
  for (int a = 0; a < g.sig().n; ++a)
    out.mv += wedge(coframe_form<PolyExp>(g.sig(), a, PolyExp(1.0)),
                    nabla_analytic(g, f, a).mv);
  return out;
}

inline AnalyticForm delta_analytic(const Geometry& g, const AnalyticForm& f) {
  AnalyticForm out{f.mv.sig()};
  out.chi = f.chi;
  for (int a = 0; a < g.sig().n; ++a)
    out.mv -= interior_raised(a, nabla_analytic(g, f, a).mv);
  return out;
}

inline AnalyticForm hodge_analytic(const Geometry& g, const AnalyticForm& f) {
  AnalyticForm out{f.mv.sig()};
  out.chi = f.chi;
  for (int a = 0; a < g.sig().n; ++a)
    out.mv += clifford(coframe_form<PolyExp>(g.sig(), a, PolyExp(1.0)),
                       nabla_analytic(g, f, a).mv);
  return out;
}

}  // namespace clv
