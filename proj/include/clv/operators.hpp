#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clv/gauge.hpp"

namespace clv {

// ---------------------------------------------------------------------------
// equation registry
// ---------------------------------------------------------------------------

enum class EquationId {
  Twistor40,
  Cky47,
  CkyInt48,
  NormalCkyInt51,
  ConfLaplace52,
  Potential65,
  GaugedTwistor71,
  GaugedLaplaceGamma77,
  GaugedConfLaplace83,
  GaugedPotential96,
  GaugedCky99,
  GaugedCkyInt100,
  Harmonic22,
  Massive23,
  GaugedHarmonic38,
  GaugedMassive39,
  Obstruction112,
};

struct EquationInfo {
  EquationId id;
  const char* name;
  const char* subject;  // "form" | "spinor" | "form+spinor"
  const char* summary;
};

inline const std::vector<EquationInfo>& equation_table() {
  static const std::vector<EquationInfo> table = {
      {EquationId::Harmonic22, "HARMONIC(22)", "spinor",
       "massless Dirac condition D psi = 0"},
      {EquationId::Massive23, "MASSIVE(23)", "spinor",
       "massive Dirac condition D psi = m psi"},
      {EquationId::GaugedHarmonic38, "GAUGED_HARMONIC(38)", "spinor",
       "massless gauged Dirac condition"},
      {EquationId::GaugedMassive39, "GAUGED_MASSIVE(39)", "spinor",
       "massive gauged Dirac condition"},
      {EquationId::Twistor40, "TWISTOR(40)", "spinor",
       "twistor condition: covariant derivative equals (1/n) e_a . D psi in "
       "every frame direction"},
      {EquationId::Cky47, "CKY(47)", "form",
       "conformal Killing-Yano condition on a homogeneous p-form"},
      {EquationId::CkyInt48, "CKY_INT(48)", "form",
       "CKY integrability: second derivatives balance the curvature action"},
      {EquationId::NormalCkyInt51, "NORMAL_CKY_INT(51)", "form",
       "normal-CKY integrability against the Schouten-type 1-forms"},
      {EquationId::ConfLaplace52, "CONF_LAPLACE(52)", "form",
       "conformal Laplace condition on a function"},
      {EquationId::Potential65, "POTENTIAL(65)", "form",
       "potential-form condition (generalized conformal Laplace)"},
      {EquationId::GaugedTwistor71, "GAUGED_TWISTOR(71)", "spinor",
       "gauged twistor condition"},
      {EquationId::GaugedLaplaceGamma77, "GAUGED_LAPLACE_GAMMA(77)", "form",
       "gauged Laplace condition with curvature eigenvalue gamma"},
      {EquationId::GaugedConfLaplace83, "GAUGED_CONF_LAPLACE(83)", "form",
       "gauged conformal Laplace condition (gamma = 0)"},
      {EquationId::GaugedPotential96, "GAUGED_POTENTIAL(96)", "form",
       "gauged potential-form condition"},
      {EquationId::GaugedCky99, "GAUGED_CKY(99)", "form",
       "gauged conformal Killing-Yano condition"},
      {EquationId::GaugedCkyInt100, "GAUGED_CKY_INT(100)", "form",
       "gauged CKY integrability against the gauged curvature action"},
      {EquationId::Obstruction112, "OBSTRUCTION_112", "form+spinor",
       "gauge-curvature obstruction terms of the gauged harmonic symmetry "
       "operator; each vanishes when F = 0"},
  };
  return table;
}

inline std::string equation_name(EquationId id) {
  for (const auto& e : equation_table())
    if (e.id == id) return e.name;
  throw UsageError("unknown equation id");
}

inline std::optional<EquationId> parse_equation(const std::string& s) {
  for (const auto& e : equation_table())
    if (s == e.name) return e.id;
  return std::nullopt;
}

/// Everything a residual evaluator may need.
struct OpContext {
  const Geometry& g;
  const GammaRep& rep;
  const CurvaturePack& pack;
  const GaugePotential& pot;
  double mass = 0.0;
  double gamma_eig = 0.0;
};

struct ResidualValue {
  double norm = 0.0;
  std::map<std::string, double> parts;
};

inline Multivector<cplx> value_part_of(const FormField& f, const Point& p) {
  return f.value(p);
}

namespace detail {

inline int required_grade(const FormField& f, const char* what) {
  auto g = f.homogeneous_grade();
  if (!g)
    throw PreconditionError("", std::string(what) +
                                    ": subject must be a homogeneous p-form");
  return *g;
}

inline void require_potential_grade(int n, int p, const char* what) {
  if (n == 2 * (p + 1) || n == 2 * (p - 1))
    throw SingularityError(std::string(what) + ": coefficients singular at n = " +
                           std::to_string(n) + ", p = " + std::to_string(p) +
                           " (unsupported grade/dimension combination)");
}

inline Multivector<cplx> act_curvature_sum(const OpContext& ctx,
                                           const FormField& omega,
                                           const Point& p, bool gauged) {
  // Σ_{a,b} e^b ∧ i_{X^a} R(X_a, X_b) ω, with the gauged action subtracting
  // q (i_{X_a} i_{X_b} F) ω.
  const Signature& sig = ctx.g.sig();
  Multivector<cplx> out(sig);
  const Multivector<cplx> omega_val = omega.value(p);
  Multivector<cplx> fcurv(sig);
  if (gauged)
    fcurv = ctx.pot.curvature_value(p) * static_cast<double>(omega.charge());
  for (int a = 0; a < sig.n; ++a)
    for (int b = 0; b < sig.n; ++b) {
      Multivector<cplx> rw =
          clifford_bracket(ctx.pack.R(a, b), omega_val) * 0.5;
      if (gauged) {
        const cplx ii = interior(a, interior(b, fcurv))[0];
        rw -= omega_val * ii;
      }
      out += wedge(coframe_form<cplx>(sig, b, 1.0), interior_raised(a, rw));
    }
  return out;
}

}  // namespace detail

/// Left-minus-right residual of the identified equation at a point.
/// Directional equations report the worst frame direction.
inline ResidualValue equation_residual(EquationId id, const OpContext& ctx,
                                       const FormField* form,
                                       const SpinorField* spinor,
                                       const Point& p) {
  const Signature& sig = ctx.g.sig();
  const int n = sig.n;
  ResidualValue rv;

  auto need_form = [&]() -> const FormField& {
    if (!form) throw PreconditionError(equation_name(id), "subject must be a form");
    return *form;
  };
  auto need_spinor = [&]() -> const SpinorField& {
    if (!spinor)
      throw PreconditionError(equation_name(id), "subject must be a spinor");
    return *spinor;
  };

  switch (id) {
    case EquationId::Harmonic22: {
      rv.norm = norm(values_of(dirac_at(ctx.g, ctx.rep, need_spinor(), p)));
      return rv;
    }
    case EquationId::Massive23: {
      rv.norm = norm(massive_residual_at(ctx.g, ctx.rep, need_spinor(), ctx.mass, p));
      return rv;
    }
    case EquationId::GaugedHarmonic38: {
      rv.norm =
          norm(values_of(gauged_dirac_at(ctx.g, ctx.rep, ctx.pot, need_spinor(), p)));
      return rv;
    }
    case EquationId::GaugedMassive39: {
      rv.norm = norm(
          gauged_massive_residual_at(ctx.g, ctx.rep, ctx.pot, need_spinor(), ctx.mass, p));
      return rv;
    }
    case EquationId::Twistor40: {
      const SpinorField& psi = need_spinor();
      for (int a = 0; a < n; ++a) {
        const double r = norm(values_of(penrose_residual_at(ctx.g, ctx.rep, psi, a, p)));
        rv.parts["direction " + std::to_string(a + 1)] = r;
        rv.norm = std::max(rv.norm, r);
      }
      return rv;
    }
    case EquationId::GaugedTwistor71: {
      const SpinorField& psi = need_spinor();
      for (int a = 0; a < n; ++a) {
        const double r = norm(
            values_of(gauged_twistor_residual_at(ctx.g, ctx.rep, ctx.pot, psi, a, p)));
        rv.parts["direction " + std::to_string(a + 1)] = r;
        rv.norm = std::max(rv.norm, r);
      }
      return rv;
    }
    case EquationId::Cky47:
    case EquationId::GaugedCky99: {
      const FormField& omega = need_form();
      const bool gauged = (id == EquationId::GaugedCky99);
      const int pgrade = detail::required_grade(omega, "CKY");
      FormField dw = gauged ? gauged_d(ctx.g, ctx.pot, omega) : d(ctx.g, omega);
      FormField del = gauged ? gauged_delta(ctx.g, ctx.pot, omega) : delta(ctx.g, omega);
      const Multivector<cplx> dwv = value_part_of(dw, p);
      const Multivector<cplx> delv = value_part_of(del, p);
      for (int a = 0; a < n; ++a) {
        Multivector<cplx> lhs =
            gauged ? value_jets(gauged_covariant_derivative_at(ctx.g, ctx.pot, omega, a, p))
                   : value_jets(covariant_derivative_at(ctx.g, omega, a, p));
        Multivector<cplx> rhs = interior(a, dwv) * (1.0 / (pgrade + 1.0));
        Multivector<cplx> xa =
            coframe_form<cplx>(sig, a, cplx(static_cast<double>(sig.metric(a))));
        rhs -= wedge(xa, delv) * (1.0 / (n - pgrade + 1.0));
        const double r = norm(lhs - rhs);
        rv.parts["direction " + std::to_string(a + 1)] = r;
        rv.norm = std::max(rv.norm, r);
      }
      return rv;
    }
    case EquationId::CkyInt48:
    case EquationId::NormalCkyInt51:
    case EquationId::GaugedCkyInt100: {
      const FormField& omega = need_form();
      const bool gauged = (id == EquationId::GaugedCkyInt100);
      const int pgrade = detail::required_grade(omega, "CKY integrability");
      FormField dw = gauged ? gauged_d(ctx.g, ctx.pot, omega) : d(ctx.g, omega);
      FormField del = gauged ? gauged_delta(ctx.g, ctx.pot, omega) : delta(ctx.g, omega);
      Multivector<cplx> lhs =
          (gauged ? value_jets(gauged_delta_at(ctx.g, ctx.pot, dw, p))
                  : value_jets(delta_at(ctx.g, dw, p))) *
          (pgrade / (pgrade + 1.0));
      lhs += (gauged ? value_jets(gauged_d_at(ctx.g, ctx.pot, del, p))
                     : value_jets(d_at(ctx.g, del, p))) *
             ((n - pgrade) / (n - pgrade + 1.0));
      Multivector<cplx> rhs(sig);
      if (id == EquationId::NormalCkyInt51) {
        const Multivector<cplx> omega_val = omega.value(p);
        for (int a = 0; a < n; ++a)
          rhs -= wedge(ctx.pack.k_a[a], interior_raised(a, omega_val)) *
                 (2.0 * (n - pgrade));
      } else {
        rhs = detail::act_curvature_sum(ctx, omega, p, gauged);
      }
      rv.norm = norm(lhs - rhs);
      return rv;
    }
    case EquationId::ConfLaplace52: {
      const FormField& f = need_form();
      Multivector<cplx> r = value_jets(laplace_at(ctx.g, f, p));
      r -= f.value(p) * ((n - 2.0) / (4.0 * (n - 1.0)) * ctx.pack.scalar);
      rv.norm = norm(r);
      return rv;
    }
    case EquationId::GaugedLaplaceGamma77:
    case EquationId::GaugedConfLaplace83: {
      const FormField& f = need_form();
      const double gamma =
          (id == EquationId::GaugedLaplaceGamma77) ? ctx.gamma_eig : 0.0;
      Multivector<cplx> r = value_jets(gauged_laplace_at(ctx.g, ctx.pot, f, p));
      const double coeff =
          (1.0 + (n - 2.0) / (n - 1.0)) * gamma -
          (n - 2.0) / (4.0 * (n - 1.0)) * ctx.pack.scalar;
      r += f.value(p) * coeff;
      rv.norm = norm(r);
      return rv;
    }
    case EquationId::Potential65:
    case EquationId::GaugedPotential96: {
      const FormField& alpha = need_form();
      const bool gauged = (id == EquationId::GaugedPotential96);
      const int pgrade = detail::required_grade(alpha, "potential form");
      detail::require_potential_grade(n, pgrade, "potential equation");
      FormField da = gauged ? gauged_d(ctx.g, ctx.pot, alpha) : d(ctx.g, alpha);
      FormField del = gauged ? gauged_delta(ctx.g, ctx.pot, alpha) : delta(ctx.g, alpha);
      Multivector<cplx> lhs =
          (gauged ? value_jets(gauged_delta_at(ctx.g, ctx.pot, da, p))
                  : value_jets(delta_at(ctx.g, da, p))) *
          (1.0 / (n - 2.0 * (pgrade + 1.0)));
      lhs += (gauged ? value_jets(gauged_d_at(ctx.g, ctx.pot, del, p))
                     : value_jets(d_at(ctx.g, del, p))) *
             (1.0 / (n - 2.0 * (pgrade - 1.0)));
      const Multivector<cplx> av = alpha.value(p);
      Multivector<cplx> rhs(sig);
      for (int a = 0; a < n; ++a)
        rhs += wedge(ctx.pack.p_a[a], interior_raised(a, av)) * (1.0 / (n - 2.0));
      rhs -= av * ((n + 2.0 * (pgrade - 1.0)) /
                   (4.0 * (n - 1.0) * (n - 2.0)) * ctx.pack.scalar);
      rv.norm = norm(lhs - rhs);
      return rv;
    }
    case EquationId::Obstruction112: {
      const FormField& omega = need_form();
      const SpinorField& psi = need_spinor();
      const int pgrade = detail::required_grade(omega, "obstruction");
      const Multivector<cplx> w = omega.value(p);
      const Spinor<cplx> ps = values_of(psi.eval(p));
      const Multivector<cplx> fcurv = ctx.pot.curvature_value(p);
      Spinor<cplx> t1 = ctx.rep.act(wedge(fcurv, w), ps);
      t1 = scaled(std::move(t1), cplx(pgrade / (pgrade + 1.0)));
      Multivector<cplx> mixed(sig);
      for (int a = 0; a < n; ++a)
        mixed += wedge(interior_raised(a, fcurv), interior(a, w));
      Spinor<cplx> t2 = scaled(ctx.rep.act(mixed, ps), cplx(-3.0));
      // ordered index pairs: the antisymmetric scalar-operator pair would
      // double-count under a full Einstein sum
      Multivector<cplx> contracted(sig);
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          const cplx ii = interior_raised(a, interior_raised(b, fcurv))[0];
          if (ii == cplx(0.0)) continue;
          contracted += interior(a, interior(b, w)) * ii;
        }
      Spinor<cplx> t3 = scaled(ctx.rep.act(contracted, ps),
                               cplx(-(n - pgrade) / (n - pgrade + 1.0)));
      rv.parts["wedge term"] = norm(t1);
      rv.parts["mixed contraction term"] = norm(t2);
      rv.parts["double contraction term"] = norm(t3);
      Spinor<cplx> total = t1;
      add_to(total, t2);
      add_to(total, t3);
      rv.norm = std::max({norm(t1), norm(t2), norm(t3), norm(total)});
      return rv;
    }
  }
  throw UsageError("unhandled equation id");
}

// ---------------------------------------------------------------------------
// symmetry and transformation operators
// ---------------------------------------------------------------------------

enum class OpKind {
  LOmega,          // twistor -> twistor, CKY ingredient
  ScriptLOmega,    // harmonic -> harmonic, CKY ingredient
  LF,              // twistor -> harmonic, conformal Laplace function
  LAlpha,          // twistor -> harmonic, potential form (or middle form)
  HatLOmega,
  HatScriptLOmega,
  HatLF,
  HatLAlpha,
};

inline bool is_hatted(OpKind k) {
  return k == OpKind::HatLOmega || k == OpKind::HatScriptLOmega ||
         k == OpKind::HatLF || k == OpKind::HatLAlpha;
}
inline bool is_twistor_stage(OpKind k) {
  return k == OpKind::LOmega || k == OpKind::HatLOmega;
}
inline bool is_transform_stage(OpKind k) {
  return k == OpKind::LF || k == OpKind::LAlpha || k == OpKind::HatLF ||
         k == OpKind::HatLAlpha;
}
inline bool is_harmonic_stage(OpKind k) {
  return k == OpKind::ScriptLOmega || k == OpKind::HatScriptLOmega;
}

struct OperatorSpec {
  OpKind kind;
  FormField ingredient;
  /// LAlpha variant: the ingredient is a harmonic middle form acting as
  /// Ω·ψ with α = 0 (even dimensions).
  bool middle_omega = false;
};

namespace detail {

inline AnalyticForm with_chi(AnalyticForm f, const Poly& chi) {
  require_compatible_chi(f.chi, chi);
  f.chi = chi;
  return f;
}
inline AnalyticSpinor with_chi(AnalyticSpinor f, const Poly& chi) {
  require_compatible_chi(f.chi, chi);
  f.chi = chi;
  return f;
}

inline std::optional<EquationId> ingredient_equation(OpKind k, bool middle) {
  switch (k) {
    case OpKind::LOmega:
    case OpKind::ScriptLOmega:
      return EquationId::Cky47;
    case OpKind::HatLOmega:
      return EquationId::Cky47;  // ordinary CKY forms suffice for this stage
    case OpKind::HatScriptLOmega:
      return EquationId::GaugedCky99;
    case OpKind::LF:
      return EquationId::ConfLaplace52;
    case OpKind::HatLF:
      return EquationId::GaugedConfLaplace83;
    case OpKind::LAlpha:
      return middle ? std::nullopt : std::optional(EquationId::Potential65);
    case OpKind::HatLAlpha:
      return middle ? std::nullopt : std::optional(EquationId::GaugedPotential96);
  }
  return std::nullopt;
}

inline void verify_ingredient(const OperatorSpec& spec, const OpContext& ctx,
                              const std::vector<Point>& points, double tol) {
  const bool hat = is_hatted(spec.kind);
  if (spec.middle_omega) {
    // harmonic middle form: d̂Ω = δ̂Ω = 0 and grade n/2
    const int n = ctx.g.sig().n;
    const auto grade = spec.ingredient.homogeneous_grade();
    if (n % 2 != 0 || !grade || *grade != n / 2)
      throw PreconditionError("MIDDLE_FORM",
                              "middle-form branch needs a homogeneous n/2-form "
                              "in even dimension");
    for (const Point& p : points) {
      const double r =
          hat ? norm(value_jets(gauged_d_at(ctx.g, ctx.pot, spec.ingredient, p))) +
                    norm(value_jets(gauged_delta_at(ctx.g, ctx.pot, spec.ingredient, p)))
              : norm(value_jets(d_at(ctx.g, spec.ingredient, p))) +
                    norm(value_jets(delta_at(ctx.g, spec.ingredient, p)));
      if (r > tol)
        throw PreconditionError("MIDDLE_FORM",
                                "ingredient is not a harmonic middle form "
                                "(residual " + std::to_string(r) + ")");
    }
    return;
  }
  const auto eq = ingredient_equation(spec.kind, spec.middle_omega);
  if (!eq) return;
  for (const Point& p : points) {
    const double r = equation_residual(*eq, ctx, &spec.ingredient, nullptr, p).norm;
    if (r > tol)
      throw PreconditionError(equation_name(*eq),
                              "ingredient residual " + std::to_string(r) +
                                  " exceeds tolerance " + std::to_string(tol));
  }
}

}  // namespace detail

/// Ω of the first-order transformation ansatz: the (p+1) + (p-1) graded form
/// built from d̂α and δ̂α. Feeding it back reproduces the L_α operator.
inline FormField omega_from_alpha(const OpContext& ctx, const FormField& alpha,
                                  bool gauged) {
  const int n = ctx.g.sig().n;
  const int p = detail::required_grade(alpha, "omega_from_alpha");
  detail::require_potential_grade(n, p, "omega_from_alpha");
  const double sign = (p % 2 == 0) ? 1.0 : -1.0;
  const double c1 = sign * n / (n - 2.0 * (p + 1.0));
  const double c2 = sign * n / (n - 2.0 * (p - 1.0));
  if (alpha.is_analytic() && (!gauged || ctx.pot.potential().is_analytic())) {
    const AnalyticForm& a = alpha.analytic_form();
    const int q = alpha.charge();
    AnalyticForm da = gauged ? gauged_d_analytic(ctx.g, ctx.pot, a, q)
                             : d_analytic(ctx.g, a);
    AnalyticForm del = gauged ? gauged_delta_analytic(ctx.g, ctx.pot, a, q)
                              : delta_analytic(ctx.g, a);
    AnalyticForm out{a.mv.sig()};
    out.chi = a.chi;
    out.mv = da.mv * cplx(c1);
    out.mv -= del.mv * cplx(c2);
    FormField f = FormField::analytic(std::move(out));
    f.set_charge(alpha.charge());
    return f;
  }
  const Geometry g = ctx.g;
  const GaugePotential pot = ctx.pot;
  FormField da = gauged ? gauged_d(g, pot, alpha) : d(g, alpha);
  FormField del = gauged ? gauged_delta(g, pot, alpha) : delta(g, alpha);
  FormField out = FormField::closure(
      alpha.sig(),
      [da, del, c1, c2](const Point& p) {
        Multivector<Jet> r = da.eval(p) * c1;
        r -= del.eval(p) * c2;
        return r;
      },
      alpha.depth() - 1);
  out.set_charge(alpha.charge());
  return out;
}

struct ApplyOptions {
  std::vector<Point> precondition_points;
  double ingredient_tol = 1e-10;
};

/// Applies one symmetry/transformation operator to a spinor field. Analytic
/// inputs produce analytic outputs (exact jets at any later stage); opaque
/// inputs fall back to jet assembly and lose one derivative order.
inline SpinorField apply(const OperatorSpec& spec, const OpContext& ctx,
                         const SpinorField& psi, const ApplyOptions& opt) {
  const Geometry& g = ctx.g;
  const GammaRep& rep = ctx.rep;
  const Signature& sig = g.sig();
  const int n = sig.n;
  const bool hat = is_hatted(spec.kind);
  const FormField& ing = spec.ingredient;

  detail::verify_ingredient(spec, ctx, opt.precondition_points, opt.ingredient_tol);

  const int p = detail::required_grade(ing, "operator ingredient");
  if ((spec.kind == OpKind::LF || spec.kind == OpKind::HatLF) && p != 0)
    throw PreconditionError("", "L_f needs a function (0-form) ingredient");
  if ((spec.kind == OpKind::LAlpha || spec.kind == OpKind::HatLAlpha) &&
      !spec.middle_omega)
    detail::require_potential_grade(n, p, "L_alpha");

  const int q_out = psi.charge() + ing.charge();

  // stage coefficients
  const double sgn = (p % 2 == 0) ? 1.0 : -1.0;
  const double lo_c0 = -sgn * p / static_cast<double>(n);
  const double lo_c1 = p / (2.0 * (p + 1.0));
  const double lo_c2 = p / (2.0 * (n - p + 1.0));
  const double sl_c1 = p / (p + 1.0);
  const double sl_c2 = (n - p) / (n - p + 1.0);

  const bool analytic_ok =
      psi.is_analytic() && ing.is_analytic() &&
      (!hat || ctx.pot.potential().is_analytic());

  if (analytic_ok) {
    const Poly chi = merge_chi(psi.analytic_spinor().chi, ing.analytic_form().chi);
    AnalyticSpinor ps = detail::with_chi(psi.analytic_spinor(), chi);
    AnalyticForm w = detail::with_chi(ing.analytic_form(), chi);
    const int qpsi = psi.charge();
    const int qing = ing.charge();

    auto dF = [&](const AnalyticForm& f, int q) {
      return hat ? gauged_d_analytic(g, ctx.pot, f, q) : d_analytic(g, f);
    };
    auto deltaF = [&](const AnalyticForm& f, int q) {
      return hat ? gauged_delta_analytic(g, ctx.pot, f, q) : delta_analytic(g, f);
    };
    auto diracS = [&](const AnalyticSpinor& s, int q) {
      return hat ? gauged_dirac_analytic(g, rep, ctx.pot, s, q)
                 : dirac_analytic(g, rep, s);
    };
    auto nablaS = [&](const AnalyticSpinor& s, int a, int q) {
      return hat ? gauged_spinor_nabla_analytic(g, rep, ctx.pot, s, a, q)
                 : spinor_nabla_analytic(g, rep, s, a);
    };

    AnalyticSpinor out;
    out.chi = chi;
    out.comp.assign(rep.dim(), PolyExp());

    switch (spec.kind) {
      case OpKind::LOmega:
      case OpKind::HatLOmega: {
        AnalyticSpinor theta = diracS(ps, qpsi);
        add_to(out.comp, scaled(rep.act(w.mv, theta.comp), PolyExp(lo_c0)));
        add_to(out.comp,
               scaled(rep.act(dF(w, qing).mv, ps.comp), PolyExp(lo_c1)));
        add_to(out.comp,
               scaled(rep.act(deltaF(w, qing).mv, ps.comp), PolyExp(lo_c2)));
        break;
      }
      case OpKind::ScriptLOmega:
      case OpKind::HatScriptLOmega: {
        for (int a = 0; a < n; ++a) {
          Multivector<PolyExp> ew =
              clifford(coframe_form<PolyExp>(sig, a, PolyExp(1.0)), w.mv);
          add_to(out.comp, rep.act(ew, nablaS(ps, a, qpsi).comp));
        }
        add_to(out.comp, scaled(rep.act(dF(w, qing).mv, ps.comp), PolyExp(sl_c1)));
        sub_to(out.comp, scaled(rep.act(deltaF(w, qing).mv, ps.comp), PolyExp(sl_c2)));
        break;
      }
      case OpKind::LF:
      case OpKind::HatLF: {
        AnalyticSpinor theta = diracS(ps, qpsi);
        const PolyExp fscale = w.mv[0] * cplx((n - 2.0) / n);
        add_to(out.comp, scaled(theta.comp, fscale));
        add_to(out.comp, rep.act(dF(w, qing).mv, ps.comp));
        break;
      }
      case OpKind::LAlpha:
      case OpKind::HatLAlpha: {
        if (spec.middle_omega) {
          add_to(out.comp, rep.act(w.mv, ps.comp));
        } else {
          AnalyticSpinor theta = diracS(ps, qpsi);
          add_to(out.comp, rep.act(w.mv, theta.comp));
          FormField omega = omega_from_alpha(ctx, ing, hat);
          AnalyticForm om = detail::with_chi(omega.analytic_form(), chi);
          add_to(out.comp, rep.act(om.mv, ps.comp));
        }
        break;
      }
    }
    SpinorField out_field = SpinorField::analytic(sig, std::move(out));
    out_field.set_charge(q_out);
    return out_field;
  }

  // jet path: one derivative order is consumed
  const int depth_out = std::min(psi.depth(), ing.depth()) - 1;
  if (depth_out < 0)
    throw PreconditionError(
        "", "jet depth exhausted: operator application needs depth >= 1 inputs");

  const GaugePotential pot = ctx.pot;
  const OperatorSpec spec_copy = spec;
  const SpinorField psi_copy = psi;

  FormField dw = hat ? gauged_d(g, pot, ing) : d(g, ing);
  FormField delw = hat ? gauged_delta(g, pot, ing) : delta(g, ing);
  std::optional<FormField> omega;
  if ((spec.kind == OpKind::LAlpha || spec.kind == OpKind::HatLAlpha) &&
      !spec.middle_omega)
    omega = omega_from_alpha(ctx, ing, hat);

  auto eval = [g, rep = &ctx.rep, pot, spec_copy, psi_copy, dw, delw, omega, n,
               sig, hat, lo_c0, lo_c1, lo_c2, sl_c1,
               sl_c2](const Point& pt) -> Spinor<Jet> {
    const SpinorField& psi_f = psi_copy;
    const FormField& w = spec_copy.ingredient;
    const int qpsi = psi_f.charge();
    const Spinor<Jet> ps = psi_f.eval(pt);
    const Multivector<Jet> a_jets = pot.potential_jets(pt);
    const Multivector<Jet> wj = w.eval(pt);

    auto theta = [&]() {
      return hat ? gauged_dirac_from_jets(g, *rep, a_jets, ps, pt, qpsi)
                 : dirac_from_jets(g, *rep, ps, pt);
    };
    Spinor<Jet> out(rep->dim());
    switch (spec_copy.kind) {
      case OpKind::LOmega:
      case OpKind::HatLOmega: {
        add_to(out, scaled(rep->act(wj, theta()), lo_c0));
        add_to(out, scaled(rep->act(dw.eval(pt), ps), lo_c1));
        add_to(out, scaled(rep->act(delw.eval(pt), ps), lo_c2));
        break;
      }
      case OpKind::ScriptLOmega:
      case OpKind::HatScriptLOmega: {
        for (int a = 0; a < n; ++a) {
          Spinor<Jet> na =
              hat ? gauged_spinor_nabla_from_jets(g, *rep, a_jets, ps, a, pt, qpsi)
                  : spinor_nabla_from_jets(g, *rep, ps, a, pt);
          add_to(out, rep->act(clifford(coframe_form<Jet>(sig, a, Jet(1.0)), wj), na));
        }
        add_to(out, scaled(rep->act(dw.eval(pt), ps), sl_c1));
        sub_to(out, scaled(rep->act(delw.eval(pt), ps), sl_c2));
        break;
      }
      case OpKind::LF:
      case OpKind::HatLF: {
        add_to(out, scaled(theta(), wj[0] * ((n - 2.0) / n)));
        add_to(out, rep->act(dw.eval(pt), ps));
        break;
      }
      case OpKind::LAlpha:
      case OpKind::HatLAlpha: {
        if (spec_copy.middle_omega) {
          add_to(out, rep->act(wj, ps));
        } else {
          add_to(out, rep->act(wj, theta()));
          add_to(out, rep->act(omega->eval(pt), ps));
        }
        break;
      }
    }
    return out;
  };
  SpinorField out = SpinorField::closure(sig, rep.dim(), eval, depth_out);
  out.set_charge(q_out);
  return out;
}

/// Composes stages with the sequencing rule: twistor-preserving stages, then
/// at most one twistor-to-harmonic transform, then harmonic-preserving stages.
/// A pipeline whose input is already harmonic starts past the transform phase
/// and admits only harmonic-preserving stages.
inline SpinorField pipeline(const std::vector<OperatorSpec>& stages,
                            const OpContext& ctx, const SpinorField& psi,
                            const ApplyOptions& opt,
                            bool harmonic_input = false) {
  // 0: twistor, 1: transformed, 2: harmonic-preserving
  int phase = harmonic_input ? 1 : 0;
  for (const auto& s : stages) {
    if (is_twistor_stage(s.kind)) {
      if (phase != 0)
        throw PreconditionError(
            "", "invalid stage order: twistor-preserving stage after the "
                "transform stage");
    } else if (is_transform_stage(s.kind)) {
      if (phase >= 1)
        throw PreconditionError(
            "", "invalid stage order: more than one transform stage");
      phase = 1;
    } else {
      if (phase == 0)
        throw PreconditionError(
            "", "invalid stage order: harmonic-preserving stage before the "
                "transform stage");
      phase = 2;
    }
  }
  SpinorField cur = psi;
  for (const auto& s : stages) cur = apply(s, ctx, cur, opt);
  return cur;
}

}  // namespace clv
