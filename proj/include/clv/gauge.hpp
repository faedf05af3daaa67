#pragma once

#include "clv/calculus.hpp"
#include "clv/spinor_calculus.hpp"

namespace clv {

/// U(1) gauge potential A with curvature F = dA. The hatted operators act on
/// charge-q sections as ∇ + q·i_X A; the paper's formulas are the q = 1 case,
/// and operator outputs add the charges of their inputs so that the hatted
/// Leibniz rule holds across compositions.
class GaugePotential {
 public:
  static GaugePotential none(const Geometry& g) {
    GaugePotential pot;
    pot.a_ = FormField::zero(g.sig());
    pot.f_ = FormField::zero(g.sig());
    pot.trivial_ = true;
    return pot;
  }

  /// A = dχ (flat connection, F = 0 enforced by construction through d).
  static GaugePotential exact(const Geometry& g, const Poly& chi) {
    AnalyticForm a{g.sig()};
    a.chi = Poly();  // coefficients of A are plain polynomials
    // dχ in frame components: X_a(χ) e^a = h ∂_a χ e^a
    for (int mu = 0; mu < g.sig().n; ++mu) {
      Poly c = g.frame_scale() * chi.partial(mu);
      if (!c.is_zero()) a.mv[1u << mu] = PolyExp(c);
    }
    GaugePotential pot;
    pot.a_ = FormField::analytic(std::move(a));
    pot.f_ = FormField::analytic(d_analytic(g, pot.a_.analytic_form()));
    pot.chi_ = chi;
    return pot;
  }

  static GaugePotential from_field(const Geometry& g, FormField a) {
    GaugePotential pot;
    if (a.is_analytic())
      pot.f_ = FormField::analytic(d_analytic(g, a.analytic_form()));
    else
      pot.f_ = d(g, a);
    pot.a_ = std::move(a);
    return pot;
  }

  bool trivial() const { return trivial_; }
  const FormField& potential() const { return a_; }
  const FormField& curvature() const { return f_; }
  const std::optional<Poly>& chi() const { return chi_; }

  Multivector<Jet> potential_jets(const Point& p) const { return a_.eval(p); }
  Multivector<cplx> curvature_value(const Point& p) const { return f_.value(p); }

 private:
  GaugePotential() : a_(FormField::zero(Signature::euclidean(2))), f_(a_) {}

  FormField a_;
  FormField f_;
  bool trivial_ = false;
  std::optional<Poly> chi_;
};

// ---------------------------------------------------------------------------
// gauged operators on forms (charge q)
// ---------------------------------------------------------------------------

inline Multivector<Jet> gauged_nabla_from_jets(const Geometry& g,
                                               const Multivector<Jet>& a_jets,
                                               const Multivector<Jet>& f, int a,
                                               const Point& p, int q) {
  Multivector<Jet> out = nabla_from_jets(g, f, a, p);
  if (q != 0) out += f * (a_jets[1u << a] * static_cast<double>(q));
  return out;
}

inline FormField gauged_covariant_derivative(const Geometry& g,
                                             const GaugePotential& pot,
                                             const FormField& f, int a) {
  require_depth(f, 1, "gauged_covariant_derivative");
  const int q = f.charge();
  FormField out = FormField::closure(
      f.sig(),
      [g, pot, f, a, q](const Point& p) {
        return gauged_nabla_from_jets(g, pot.potential_jets(p), f.eval(p), a, p, q);
      },
      f.depth() - 1);
  out.set_charge(q);
  return out;
}

namespace detail {

inline Multivector<Jet> gauged_first_order_from_jets(
    const Geometry& g, const Multivector<Jet>& a_jets,
    const Multivector<Jet>& f, const Point& p, int q, DiffKind kind) {
  const Signature& sig = g.sig();
  Multivector<Jet> out(sig);
  for (int a = 0; a < sig.n; ++a) {
    Multivector<Jet> na = gauged_nabla_from_jets(g, a_jets, f, a, p, q);
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

inline FormField gauged_first_order(const Geometry& g, const GaugePotential& pot,
                                    const FormField& f, DiffKind kind,
                                    const char* what) {
  require_depth(f, 1, what);
  const int q = f.charge();
  FormField out = FormField::closure(
      f.sig(),
      [g, pot, f, q, kind](const Point& p) {
        return gauged_first_order_from_jets(g, pot.potential_jets(p), f.eval(p),
                                            p, q, kind);
      },
      f.depth() - 1);
  out.set_charge(q);
  return out;
}

}  // namespace detail

/// d̂ = e^a ∧ ∇̂_{X_a} (gauged-connection route).
inline FormField gauged_d(const Geometry& g, const GaugePotential& pot,
                          const FormField& f) {
  return detail::gauged_first_order(g, pot, f, detail::DiffKind::Exterior,
                                    "gauged_d");
}
inline FormField gauged_delta(const Geometry& g, const GaugePotential& pot,
                              const FormField& f) {
  return detail::gauged_first_order(g, pot, f, detail::DiffKind::CoDerivative,
                                    "gauged_delta");
}
inline FormField gauged_hodge_de_rham(const Geometry& g,
                                      const GaugePotential& pot,
                                      const FormField& f) {
  return detail::gauged_first_order(g, pot, f, detail::DiffKind::HodgeDeRham,
                                    "gauged_hodge_de_rham");
}

inline Multivector<Jet> gauged_d_at(const Geometry& g, const GaugePotential& pot,
                                    const FormField& f, const Point& p) {
  require_depth(f, 1, "gauged_d");
  return detail::gauged_first_order_from_jets(g, pot.potential_jets(p), f.eval(p),
                                              p, f.charge(), detail::DiffKind::Exterior);
}
inline Multivector<Jet> gauged_delta_at(const Geometry& g,
                                        const GaugePotential& pot,
                                        const FormField& f, const Point& p) {
  require_depth(f, 1, "gauged_delta");
  return detail::gauged_first_order_from_jets(g, pot.potential_jets(p), f.eval(p),
                                              p, f.charge(),
                                              detail::DiffKind::CoDerivative);
}
inline Multivector<Jet> gauged_hodge_at(const Geometry& g,
                                        const GaugePotential& pot,
                                        const FormField& f, const Point& p) {
  require_depth(f, 1, "gauged_hodge_de_rham");
  return detail::gauged_first_order_from_jets(g, pot.potential_jets(p), f.eval(p),
                                              p, f.charge(),
                                              detail::DiffKind::HodgeDeRham);
}

/// Shifted route d̂ = d + q A ∧ (cross-checked against the connection route).
inline Multivector<Jet> gauged_d_shifted_at(const Geometry& g,
                                            const GaugePotential& pot,
                                            const FormField& f, const Point& p) {
  Multivector<Jet> out = d_at(g, f, p);
  out += wedge(pot.potential_jets(p), f.eval(p)) * static_cast<double>(f.charge());
  return out;
}

/// Shifted route δ̂ = δ - q i_{Ã}.
inline Multivector<Jet> gauged_delta_shifted_at(const Geometry& g,
                                                const GaugePotential& pot,
                                                const FormField& f,
                                                const Point& p) {
  Multivector<Jet> out = delta_at(g, f, p);
  const Multivector<Jet> a_jets = pot.potential_jets(p);
  const Multivector<Jet> fj = f.eval(p);
  for (int a = 0; a < g.sig().n; ++a) {
    const Jet comp = a_jets[1u << a] * static_cast<double>(g.sig().metric(a));
    out -= interior(a, fj) * (comp * static_cast<double>(f.charge()));
  }
  return out;
}

/// Gauged Laplace operator (d̂ - δ̂)².
inline Multivector<Jet> gauged_laplace_at(const Geometry& g,
                                          const GaugePotential& pot,
                                          const FormField& f, const Point& p) {
  require_depth(f, 2, "gauged_laplace");
  FormField dd = gauged_d(g, pot, f);
  FormField del = gauged_delta(g, pot, f);
  Multivector<Jet> r = gauged_d_at(g, pot, dd, p);
  r -= gauged_d_at(g, pot, del, p);
  r -= gauged_delta_at(g, pot, dd, p);
  r += gauged_delta_at(g, pot, del, p);
  return r;
}

inline Multivector<Jet> gauged_covariant_derivative_at(const Geometry& g,
                                                       const GaugePotential& pot,
                                                       const FormField& f, int a,
                                                       const Point& p) {
  require_depth(f, 1, "gauged_covariant_derivative");
  return gauged_nabla_from_jets(g, pot.potential_jets(p), f.eval(p), a, p,
                                f.charge());
}

/// Gauged curvature commutator oracle [∇̂_a, ∇̂_b] - ∇̂_{[X_a, X_b]}.
inline Multivector<Jet> gauged_curvature_commutator_at(const Geometry& g,
                                                       const GaugePotential& pot,
                                                       const FormField& f, int a,
                                                       int b, const Point& p) {
  require_depth(f, 2, "gauged_curvature_commutator");
  FormField nb = gauged_covariant_derivative(g, pot, f, b);
  FormField na = gauged_covariant_derivative(g, pot, f, a);
  Multivector<Jet> out = gauged_covariant_derivative_at(g, pot, nb, a, p);
  out -= gauged_covariant_derivative_at(g, pot, na, b, p);
  const Multivector<Jet> fj = f.eval(p);
  const Multivector<Jet> a_jets = pot.potential_jets(p);
  for (int c = 0; c < g.sig().n; ++c) {
    const Poly coeff = g.bracket_coeff(a, b, c);
    if (coeff.is_zero()) continue;
    out -= coeff.eval_jet(p) *
           gauged_nabla_from_jets(g, a_jets, fj, c, p, f.charge());
  }
  return out;
}

/// Expected gauged curvature action R̂(X_a, X_b) = R(X_a, X_b) - q i_{X_a} i_{X_b} F.
inline Multivector<Jet> gauged_curvature_action_at(const Geometry& g,
                                                   const CurvaturePack& pack,
                                                   const GaugePotential& pot,
                                                   const FormField& f, int a,
                                                   int b, const Point& p) {
  Multivector<Jet> out = curvature_action_at(g, pack, f, a, b, p);
  const Multivector<cplx> fc = pot.curvature_value(p);
  const cplx scalar = interior(a, interior(b, fc))[0];
  out -= f.eval(p) * (scalar * static_cast<double>(f.charge()));
  return out;
}

// ---------------------------------------------------------------------------
// gauged operators on spinors
// ---------------------------------------------------------------------------

inline Spinor<Jet> gauged_spinor_nabla_from_jets(const Geometry& g,
                                                 const GammaRep& rep,
                                                 const Multivector<Jet>& a_jets,
                                                 const Spinor<Jet>& psi, int a,
                                                 const Point& p, int q) {
  Spinor<Jet> out = spinor_nabla_from_jets(g, rep, psi, a, p);
  if (q != 0)
    add_to(out, scaled(psi, a_jets[1u << a] * static_cast<double>(q)));
  return out;
}

inline SpinorField gauged_spinor_derivative(const Geometry& g, const GammaRep& rep,
                                            const GaugePotential& pot,
                                            const SpinorField& f, int a) {
  require_depth(f, 1, "gauged_spinor_derivative");
  const int q = f.charge();
  SpinorField out = SpinorField::closure(
      f.sig(), f.dim(),
      [g, &rep, pot, f, a, q](const Point& p) {
        return gauged_spinor_nabla_from_jets(g, rep, pot.potential_jets(p),
                                             f.eval(p), a, p, q);
      },
      f.depth() - 1);
  out.set_charge(q);
  return out;
}

inline Spinor<Jet> gauged_dirac_from_jets(const Geometry& g, const GammaRep& rep,
                                          const Multivector<Jet>& a_jets,
                                          const Spinor<Jet>& psi, const Point& p,
                                          int q) {
  Spinor<Jet> out(psi.size());
  for (int a = 0; a < g.sig().n; ++a)
    add_to(out, rep.act_frame(
                    a, gauged_spinor_nabla_from_jets(g, rep, a_jets, psi, a, p, q)));
  return out;
}

/// Gauged Dirac operator D̂ = e^a · ∇̂_{X_a} = D̸ + q A·.
inline SpinorField gauged_dirac(const Geometry& g, const GammaRep& rep,
                                const GaugePotential& pot, const SpinorField& f) {
  require_depth(f, 1, "gauged_dirac");
  const int q = f.charge();
  SpinorField out = SpinorField::closure(
      f.sig(), f.dim(),
      [g, &rep, pot, f, q](const Point& p) {
        return gauged_dirac_from_jets(g, rep, pot.potential_jets(p), f.eval(p), p, q);
      },
      f.depth() - 1);
  out.set_charge(q);
  return out;
}

inline Spinor<Jet> gauged_dirac_at(const Geometry& g, const GammaRep& rep,
                                   const GaugePotential& pot, const SpinorField& f,
                                   const Point& p) {
  require_depth(f, 1, "gauged_dirac");
  return gauged_dirac_from_jets(g, rep, pot.potential_jets(p), f.eval(p), p,
                                f.charge());
}

inline Spinor<Jet> gauged_spinor_derivative_at(const Geometry& g,
                                               const GammaRep& rep,
                                               const GaugePotential& pot,
                                               const SpinorField& f, int a,
                                               const Point& p) {
  require_depth(f, 1, "gauged_spinor_derivative");
  return gauged_spinor_nabla_from_jets(g, rep, pot.potential_jets(p), f.eval(p),
                                       a, p, f.charge());
}

inline Spinor<Jet> gauged_spinor_trace_hessian_at(const Geometry& g,
                                                  const GammaRep& rep,
                                                  const GaugePotential& pot,
                                                  const SpinorField& f,
                                                  const Point& p) {
  require_depth(f, 2, "gauged_spinor_trace_hessian");
  const Signature& sig = g.sig();
  Spinor<Jet> out(f.dim());
  for (int a = 0; a < sig.n; ++a) {
    SpinorField inner = gauged_spinor_derivative(g, rep, pot, f, a);
    add_to(out, scaled(gauged_spinor_derivative_at(g, rep, pot, inner, a, p),
                       static_cast<double>(sig.metric(a))));
  }
  const Spinor<Jet> psi = f.eval(p);
  const Multivector<Jet> a_jets = pot.potential_jets(p);
  for (int c = 0; c < sig.n; ++c) {
    const Poly v = g.hessian_trace_vector(c);
    if (v.is_zero()) continue;
    sub_to(out,
           scaled(gauged_spinor_nabla_from_jets(g, rep, a_jets, psi, c, p,
                                                f.charge()),
                  v.eval_jet(p)));
  }
  return out;
}

/// Gauged Lichnerowicz residual D̂²ψ - ∇̂²ψ + (1/4)𝓡ψ - q F·ψ.
inline Spinor<Jet> gauged_lichnerowicz_residual_at(
    const Geometry& g, const GammaRep& rep, const CurvaturePack& pack,
    const GaugePotential& pot, const SpinorField& f, const Point& p) {
  Spinor<Jet> out = gauged_dirac_at(g, rep, pot, gauged_dirac(g, rep, pot, f), p);
  sub_to(out, gauged_spinor_trace_hessian_at(g, rep, pot, f, p));
  add_to(out, scaled(f.eval(p), 0.25 * pack.scalar));
  Multivector<cplx> fc = pot.curvature_value(p);
  Multivector<Jet> fcj(f.sig());
  for (unsigned m = 0; m < fc.size(); ++m) fcj[m] = Jet(fc[m]);
  sub_to(out, scaled(rep.act(fcj, f.eval(p)), static_cast<double>(f.charge())));
  return out;
}

/// Gauged twistor residual ∇̂_{X_a} ψ - (1/n) e_a · D̂ψ for one direction.
inline Spinor<Jet> gauged_twistor_residual_at(const Geometry& g,
                                              const GammaRep& rep,
                                              const GaugePotential& pot,
                                              const SpinorField& f, int a,
                                              const Point& p) {
  require_depth(f, 1, "gauged_twistor_residual");
  const Multivector<Jet> a_jets = pot.potential_jets(p);
  const Spinor<Jet> psi = f.eval(p);
  Spinor<Jet> out =
      gauged_spinor_nabla_from_jets(g, rep, a_jets, psi, a, p, f.charge());
  Spinor<Jet> dpsi = gauged_dirac_from_jets(g, rep, a_jets, psi, p, f.charge());
  const double c = static_cast<double>(g.sig().metric(a)) / g.sig().n;
  sub_to(out, scaled(rep.act_frame(a, dpsi), c));
  return out;
}

struct GaugedTwistorIntegrability {
  Spinor<cplx> dirac_square;
  std::vector<Spinor<cplx>> grad_dirac;
  std::vector<Spinor<cplx>> conformal;
  double max_norm = 0.0;
};

/// Integrability residuals of the gauged twistor equation; reduce to the
/// ungauged ones when A = 0.
inline GaugedTwistorIntegrability gauged_twistor_integrability_at(
    const Geometry& g, const GammaRep& rep, const CurvaturePack& pack,
    const GaugePotential& pot, const SpinorField& f, const Point& p) {
  const int n = g.sig().n;
  const int q = f.charge();
  GaugedTwistorIntegrability out;
  const Multivector<cplx> fcurv = pot.curvature_value(p) * static_cast<double>(q);
  const Spinor<cplx> psi = values_of(f.eval(p));

  // D̂²ψ + (n/4(n-1))𝓡ψ - (n/(n-1)) F·ψ
  Spinor<cplx> r1 =
      values_of(gauged_dirac_at(g, rep, pot, gauged_dirac(g, rep, pot, f), p));
  add_to(r1, scaled(psi, cplx(pack.scalar * n / (4.0 * (n - 1)))));
  sub_to(r1, scaled(rep.act(fcurv, psi), cplx(n / (n - 1.0))));
  out.max_norm = norm(r1);
  out.dirac_square = std::move(r1);

  // ∇̂_a D̂ψ - (n/2) K_a·ψ + (n/((n-1)(n-2))) e_a·F·ψ - (n/(n-2)) i_{X_a}F·ψ
  SpinorField dpsi = gauged_dirac(g, rep, pot, f);
  for (int a = 0; a < n; ++a) {
    Spinor<cplx> r = values_of(gauged_spinor_derivative_at(g, rep, pot, dpsi, a, p));
    sub_to(r, scaled(rep.act(pack.k_a[a], psi), cplx(n / 2.0)));
    Multivector<cplx> ea =
        coframe_form<cplx>(g.sig(), a, cplx(g.sig().metric(a)));
    add_to(r, scaled(rep.act(clifford(ea, fcurv), psi),
                     cplx(n / ((n - 1.0) * (n - 2.0)))));
    sub_to(r, scaled(rep.act(interior(a, fcurv), psi), cplx(n / (n - 2.0))));
    out.max_norm = std::max(out.max_norm, norm(r));
    out.grad_dirac.push_back(std::move(r));
  }

  // C_ab·ψ - 2(i_a i_b F)ψ - (n/(n-2))(e_b·i_a F - e_a·i_b F)·ψ
  //        - (4/((n-1)(n-2))) e_a·e_b·F·ψ
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Spinor<cplx> r = rep.act(pack.C(a, b), psi);
      const cplx iiab = interior(a, interior(b, fcurv))[0];
      sub_to(r, scaled(psi, 2.0 * iiab));
      Multivector<cplx> ea = coframe_form<cplx>(g.sig(), a, cplx(g.sig().metric(a)));
      Multivector<cplx> eb = coframe_form<cplx>(g.sig(), b, cplx(g.sig().metric(b)));
      Multivector<cplx> mixed =
          clifford(eb, interior(a, fcurv)) - clifford(ea, interior(b, fcurv));
      sub_to(r, scaled(rep.act(mixed, psi), cplx(n / (n - 2.0))));
      sub_to(r, scaled(rep.act(clifford(ea, clifford(eb, fcurv)), psi),
                       cplx(4.0 / ((n - 1.0) * (n - 2.0)))));
      out.max_norm = std::max(out.max_norm, norm(r));
      out.conformal.push_back(std::move(r));
    }
  return out;
}

/// Gauged massive residual D̂ψ - mψ.
inline Spinor<cplx> gauged_massive_residual_at(const Geometry& g,
                                               const GammaRep& rep,
                                               const GaugePotential& pot,
                                               const SpinorField& f, double m,
                                               const Point& p) {
  Spinor<cplx> r = values_of(gauged_dirac_at(g, rep, pot, f, p));
  sub_to(r, scaled(values_of(f.eval(p)), cplx(m)));
  return r;
}

// ---------------------------------------------------------------------------
// analytic path
// ---------------------------------------------------------------------------

inline const Multivector<PolyExp>& analytic_potential(const GaugePotential& pot) {
  return pot.potential().analytic_form().mv;
}

inline AnalyticForm gauged_nabla_analytic(const Geometry& g,
                                          const GaugePotential& pot,
                                          const AnalyticForm& f, int a, int q) {
  AnalyticForm out = nabla_analytic(g, f, a);
  if (q != 0) {
    const PolyExp& comp = analytic_potential(pot)[1u << a];
    if (!comp.is_zero())
      out.mv += f.mv * (comp * cplx(static_cast<double>(q)));
  }
  return out;
}

inline AnalyticForm gauged_d_analytic(const Geometry& g, const GaugePotential& pot,
                                      const AnalyticForm& f, int q) {
  AnalyticForm out{f.mv.sig()};
  out.chi = f.chi;
  for (int a = 0; a < g.sig().n; ++a)
    out.mv += wedge(coframe_form<PolyExp>(g.sig(), a, PolyExp(1.0)),
                    gauged_nabla_analytic(g, pot, f, a, q).mv);
  return out;
}

inline AnalyticForm gauged_delta_analytic(const Geometry& g,
                                          const GaugePotential& pot,
                                          const AnalyticForm& f, int q) {
  AnalyticForm out{f.mv.sig()};
  out.chi = f.chi;
  for (int a = 0; a < g.sig().n; ++a)
    out.mv -= interior_raised(a, gauged_nabla_analytic(g, pot, f, a, q).mv);
  return out;
}

inline AnalyticSpinor gauged_spinor_nabla_analytic(const Geometry& g,
                                                   const GammaRep& rep,
                                                   const GaugePotential& pot,
                                                   const AnalyticSpinor& f, int a,
                                                   int q) {
  AnalyticSpinor out = spinor_nabla_analytic(g, rep, f, a);
  if (q != 0) {
    const PolyExp& comp = analytic_potential(pot)[1u << a];
    if (!comp.is_zero()) {
      const PolyExp factor = comp * cplx(static_cast<double>(q));
      for (size_t i = 0; i < f.comp.size(); ++i)
        out.comp[i] += f.comp[i] * factor;
    }
  }
  return out;
}

inline AnalyticSpinor gauged_dirac_analytic(const Geometry& g, const GammaRep& rep,
                                            const GaugePotential& pot,
                                            const AnalyticSpinor& f, int q) {
  AnalyticSpinor out;
  out.chi = f.chi;
  out.comp.resize(f.comp.size());
  for (int a = 0; a < g.sig().n; ++a)
    add_to(out.comp,
           rep.act_frame(a, gauged_spinor_nabla_analytic(g, rep, pot, f, a, q).comp));
  return out;
}

}  // namespace clv
