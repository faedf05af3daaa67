#pragma once

#include "clv/operators.hpp"

namespace clv {

/// Hodge star on oriented Euclidean 4-space, orientation fixed to e1234.
inline Multivector<cplx> hodge_star(const Multivector<cplx>& m) {
  const Signature& sig = m.sig();
  if (sig.n != 4 || !sig.euclid())
    throw UsageError("hodge_star: requires Euclidean dimension 4");
  const unsigned full = sig.blade_count() - 1;
  Multivector<cplx> out(sig);
  for (unsigned mask = 0; mask < m.size(); ++mask) {
    if (m[mask] == cplx(0.0)) continue;
    const unsigned comp = full & ~mask;
    out[comp] += m[mask] * static_cast<double>(blades::reorder_sign(mask, comp));
  }
  return out;
}

/// Self-dual / anti-self-dual projections of a 2-form.
inline Multivector<cplx> self_dual(const Multivector<cplx>& f) {
  return (f + hodge_star(f)) * 0.5;
}
inline Multivector<cplx> anti_self_dual(const Multivector<cplx>& f) {
  return (f - hodge_star(f)) * 0.5;
}

/// τ^ψ, the 2-form Dirac current entering the curvature equation.
inline Multivector<cplx> tau(const Signature& sig, const GammaRep& rep,
                             const DualPairing& pairing, const Spinor<cplx>& psi) {
  if (sig.n != 4) throw UsageError("tau: requires dimension 4");
  return dirac_current(sig, rep, pairing, psi, 2);
}

struct SWState {
  SpinorField psi;
  GaugePotential pot;
};

struct SWResidual {
  Spinor<cplx> dirac;          // D̂ψ
  Multivector<cplx> curvature; // F⁺ + (1/4) τ^ψ
  double dirac_norm = 0.0;
  double curvature_norm = 0.0;
};

inline SWResidual sw_residuals(const OpContext& ctx, const SWState& state,
                               const DualPairing& pairing, const Point& p) {
  const Signature& sig = ctx.g.sig();
  if (sig.n != 4 || !sig.euclid())
    throw UsageError("sw_residuals: requires Euclidean dimension 4");
  Spinor<cplx> dres =
      values_of(gauged_dirac_at(ctx.g, ctx.rep, state.pot, state.psi, p));
  const Multivector<cplx> f = state.pot.curvature_value(p);
  Multivector<cplx> r = self_dual(f);
  r += tau(sig, ctx.rep, pairing, values_of(state.psi.eval(p))) * 0.25;
  SWResidual out{std::move(dres), std::move(r), 0.0, 0.0};
  out.dirac_norm = norm(out.dirac);
  out.curvature_norm = norm(out.curvature);
  return out;
}

struct CurrentCheck {
  double max_norm = 0.0;
  std::vector<double> per_point;
  bool vanishing = false;
  double tolerance = 0.0;
};

/// Vanishing 2-form Dirac current condition on a transformed candidate:
/// with a flat connection (F = 0) a passing candidate solves both equations.
inline CurrentCheck vanishing_current_check(const OpContext& ctx,
                                            const SpinorField& candidate,
                                            const DualPairing& pairing,
                                            const std::vector<Point>& points,
                                            double tolerance) {
  if (ctx.g.sig().n != 4)
    throw UsageError("vanishing_current_check: requires dimension 4");
  CurrentCheck out;
  out.tolerance = tolerance;
  for (const Point& p : points) {
    const double r =
        norm(tau(ctx.g.sig(), ctx.rep, pairing, values_of(candidate.eval(p))));
    out.per_point.push_back(r);
    out.max_norm = std::max(out.max_norm, r);
  }
  out.vanishing = out.max_norm <= tolerance;
  return out;
}

}  // namespace clv
