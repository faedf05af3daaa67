#include "clv/gauge.hpp"
#include "test_support.hpp"

using namespace clv;
using clv::test::max_abs;

namespace {

Spinor<cplx> random_spinor(Rng& rng, int dim) {
  Spinor<cplx> s(dim);
  for (auto& c : s) c = cplx(rng.next_sym(), rng.next_sym());
  return s;
}

GaugePotential linear_potential(const Geometry& g) {
  // A = x1 e2, F = e1 ∧ e2 (constant)
  return GaugePotential::from_field(
      g, polynomial_form(g.sig(), {{1u << 1, Poly::coordinate(0)}}));
}

double spinor_diff(const Spinor<cplx>& a, const Spinor<cplx>& b) {
  double r = 0;
  for (size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

}  // namespace

TEST_CASE("gauge curvature F = dA and dF = 0") {
  Signature sig = Signature::euclidean(4);
  Geometry g = Geometry::flat(sig);
  Rng rng(149);
  std::map<unsigned, Poly> comps;
  for (int a = 0; a < 4; ++a) comps[1u << a] = clv::test::random_poly(rng, 4);
  GaugePotential pot = GaugePotential::from_field(g, polynomial_form(sig, comps));
  for (int t = 0; t < 5; ++t) {
    Point p = rng.next_point(4);
    CHECK(max_abs(pot.curvature_value(p) - value_jets(d_at(g, pot.potential(), p))) <
          1e-13);
    CHECK(max_abs(value_jets(d_at(g, pot.curvature(), p))) < 1e-12);
  }
  // exact potential: F = 0 identically
  GaugePotential exact = GaugePotential::exact(
      g, Poly::coordinate(0) * Poly::coordinate(1));
  for (int t = 0; t < 5; ++t) {
    Point p = rng.next_point(4);
    CHECK(max_abs(exact.curvature_value(p)) < 1e-14);
  }
}

TEST_CASE("A = 0 reduces every gauged operator to its ungauged form") {
  Signature sig = Signature::euclidean(4);
  Geometry g = Geometry::constant_curvature(sig, 0.8);
  GaugePotential none = GaugePotential::none(g);
  GammaRep rep(sig);
  Rng rng(151);
  FormField f = clv::test::random_poly_form(rng, sig, 1);
  f.set_charge(1);
  SpinorField psi = coordinate_spinor_field(sig, rep, random_spinor(rng, 4),
                                            random_spinor(rng, 4));
  psi.set_charge(1);
  CurvaturePack pack = g.curvature();
  for (int t = 0; t < 4; ++t) {
    Point p = g.sample_point(rng);
    CHECK(max_abs(value_jets(gauged_d_at(g, none, f, p)) -
                  value_jets(d_at(g, f, p))) == 0.0);
    CHECK(max_abs(value_jets(gauged_delta_at(g, none, f, p)) -
                  value_jets(delta_at(g, f, p))) == 0.0);
    CHECK(spinor_diff(values_of(gauged_dirac_at(g, rep, none, psi, p)),
                      values_of(dirac_at(g, rep, psi, p))) == 0.0);
    // gauged integrability residuals reduce bit-for-bit
    TwistorIntegrability plain = twistor_integrability_at(g, rep, pack, psi, p);
    GaugedTwistorIntegrability gauged =
        gauged_twistor_integrability_at(g, rep, pack, none, psi, p);
    CHECK(spinor_diff(plain.dirac_square, gauged.dirac_square) == 0.0);
    for (size_t i = 0; i < plain.grad_dirac.size(); ++i)
      CHECK(spinor_diff(plain.grad_dirac[i], gauged.grad_dirac[i]) == 0.0);
    for (size_t i = 0; i < plain.conformal.size(); ++i)
      CHECK(spinor_diff(plain.conformal[i], gauged.conformal[i]) == 0.0);
  }
}

TEST_CASE("connection route equals shifted route for gauged d and delta") {
  Rng rng(157);
  for (const Signature& sig : clv::test::test_signatures(4)) {
    for (double k : {0.0, 0.9}) {
      Geometry g = k == 0.0 ? Geometry::flat(sig)
                            : Geometry::constant_curvature(sig, k);
      std::map<unsigned, Poly> comps;
      for (int a = 0; a < 4; ++a) comps[1u << a] = clv::test::random_poly(rng, 4);
      GaugePotential pot = GaugePotential::from_field(g, polynomial_form(sig, comps));
      for (int grade : {0, 1, 2}) {
        FormField f = clv::test::random_poly_form(rng, sig, grade);
        f.set_charge(1);
        for (int t = 0; t < 4; ++t) {
          Point p = g.sample_point(rng);
          CHECK(max_abs(value_jets(gauged_d_at(g, pot, f, p)) -
                        value_jets(gauged_d_shifted_at(g, pot, f, p))) < 1e-10);
          CHECK(max_abs(value_jets(gauged_delta_at(g, pot, f, p)) -
                        value_jets(gauged_delta_shifted_at(g, pot, f, p))) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("squares of gauged exterior and co-derivative") {
  Rng rng(163);
  Signature sig = Signature::euclidean(4);
  Geometry g = Geometry::flat(sig);
  std::map<unsigned, Poly> comps;
  for (int a = 0; a < 4; ++a) comps[1u << a] = clv::test::random_poly(rng, 4);
  GaugePotential pot = GaugePotential::from_field(g, polynomial_form(sig, comps));

  for (int grade : {0, 1, 2}) {
    FormField f = clv::test::random_poly_form(rng, sig, grade);
    f.set_charge(1);
    for (int t = 0; t < 5; ++t) {
      Point p = rng.next_point(4);
      const Multivector<cplx> fv = f.value(p);
      const Multivector<cplx> fcurv = pot.curvature_value(p);

      // d̂² = F ∧
      Multivector<cplx> dd = value_jets(gauged_d_at(g, pot, gauged_d(g, pot, f), p));
      CHECK(max_abs(dd - wedge(fcurv, fv)) < 1e-9);

      // δ̂² = −(i_{X^a} i_{X^b} F) i_{X_a} i_{X_b} over ordered pairs
      Multivector<cplx> deldel =
          value_jets(gauged_delta_at(g, pot, gauged_delta(g, pot, f), p));
      Multivector<cplx> expect(sig);
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
          const cplx ii = interior_raised(a, interior_raised(b, fcurv))[0];
          if (ii == cplx(0.0)) continue;
          expect -= interior(a, interior(b, fv)) * ii;
        }
      CHECK(max_abs(deldel - expect) < 1e-9);
    }
  }
}

TEST_CASE("gauged Laplace operator against the expanded oracle") {
  // A = dχ on a scalar: Δ̂f = Δf + 2<A, df> − f δA + f <A, A> + f F
  Signature sig = Signature::euclidean(3);
  Geometry g = Geometry::flat(sig);
  Rng rng(167);
  Poly chi = clv::test::random_poly(rng, 3);
  GaugePotential pot = GaugePotential::exact(g, chi);
  FormField f = polynomial_form(sig, {{0u, clv::test::random_poly(rng, 3)}});
  f.set_charge(1);
  for (int t = 0; t < 6; ++t) {
    Point p = rng.next_point(3);
    Multivector<cplx> lhs = value_jets(gauged_laplace_at(g, pot, f, p));

    const Multivector<cplx> a_val = pot.potential().value(p);
    const Multivector<cplx> df = value_jets(d_at(g, f, p));
    const cplx fval = f.value(p)[0];
    cplx a_dot_df = 0.0, a_dot_a = 0.0;
    for (int mu = 0; mu < 3; ++mu) {
      a_dot_df += a_val[1u << mu] * df[1u << mu];
      a_dot_a += a_val[1u << mu] * a_val[1u << mu];
    }
    const cplx delta_a = value_jets(delta_at(g, pot.potential(), p))[0];
    Multivector<cplx> rhs = value_jets(laplace_at(g, f, p));
    rhs[0] += 2.0 * a_dot_df - fval * delta_a + fval * a_dot_a;
    rhs += pot.curvature_value(p) * fval;  // d̂² contribution (zero here)
    CHECK(max_abs(lhs - rhs) < 1e-10);
  }
  // A = 0 on the flat backend: constant forms are annihilated
  GaugePotential none = GaugePotential::none(g);
  FormField c = constant_form(sig, {{1u << 0, cplx(2.0)}});
  c.set_charge(1);
  CHECK(max_abs(value_jets(gauged_laplace_at(g, none, c, rng.next_point(3)))) == 0.0);
}

TEST_CASE("gauged curvature action") {
  Rng rng(173);
  Signature sig = Signature::euclidean(4);

  SECTION("exact potential has no gauge contribution") {
    Geometry g = Geometry::constant_curvature(sig, 0.5);
    CurvaturePack pack = g.curvature();
    GaugePotential pot = GaugePotential::exact(g, clv::test::random_poly(rng, 4));
    FormField f = clv::test::random_poly_form(rng, sig, 1);
    f.set_charge(1);
    for (int t = 0; t < 3; ++t) {
      Point p = g.sample_point(rng);
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
          Multivector<cplx> commutator =
              value_jets(gauged_curvature_commutator_at(g, pot, f, a, b, p));
          Multivector<cplx> ungauged =
              value_jets(curvature_action_at(g, pack, f, a, b, p));
          CHECK(max_abs(commutator - ungauged) < 1e-9);
        }
    }
  }

  SECTION("flat backend, constant F on a scalar") {
    Geometry g = Geometry::flat(sig);
    CurvaturePack pack = g.curvature();
    GaugePotential pot = linear_potential(g);
    FormField f = polynomial_form(sig, {{0u, clv::test::random_poly(rng, 4)}});
    f.set_charge(1);
    for (int t = 0; t < 4; ++t) {
      Point p = rng.next_point(4);
      const Multivector<cplx> fcurv = pot.curvature_value(p);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          if (a == b) continue;
          Multivector<cplx> commutator =
              value_jets(gauged_curvature_commutator_at(g, pot, f, a, b, p));
          // R̂(X_a, X_b) f = −(i_{X_a} i_{X_b} F) f on the flat backend
          Multivector<cplx> expect =
              f.value(p) * (-interior(a, interior(b, fcurv))[0]);
          CHECK(max_abs(commutator - expect) < 1e-10);
          CHECK(max_abs(commutator -
                        value_jets(gauged_curvature_action_at(g, pack, pot, f,
                                                              a, b, p))) < 1e-10);
          // antisymmetry
          Multivector<cplx> swapped =
              value_jets(gauged_curvature_commutator_at(g, pot, f, b, a, p));
          CHECK(max_abs(commutator + swapped) < 1e-10);
        }
    }
  }
}

TEST_CASE("gauged Lichnerowicz identity with nonzero F") {
  Rng rng(179);
  Signature sig = Signature::euclidean(4);
  Geometry g = Geometry::flat(sig);
  CurvaturePack pack = g.curvature();
  GammaRep rep(sig);
  GaugePotential pot = linear_potential(g);
  SpinorField psi = coordinate_spinor_field(sig, rep, random_spinor(rng, 4),
                                            random_spinor(rng, 4));
  psi.set_charge(1);
  for (int t = 0; t < 6; ++t) {
    Point p = rng.next_point(4);
    CHECK(norm(values_of(gauged_lichnerowicz_residual_at(g, rep, pack, pot, psi, p))) <
          1e-9);
  }
}

TEST_CASE("flat-section Dirac kernel: D-hat of e^{-chi} psi0 vanishes") {
  Signature sig = Signature::euclidean(4);
  Geometry g = Geometry::flat(sig);
  GammaRep rep(sig);
  Rng rng(181);
  Poly chi = clv::test::random_poly(rng, 4);
  GaugePotential pot = GaugePotential::exact(g, chi);
  SpinorField psi0 = constant_spinor_field(sig, rep, random_spinor(rng, 4));
  SpinorField psi_hat = exp_scaled(psi0, chi, 1);
  CHECK(psi_hat.charge() == 1);
  for (int t = 0; t < 6; ++t) {
    Point p = rng.next_point(4);
    CHECK(norm(values_of(gauged_dirac_at(g, rep, pot, psi_hat, p))) < 1e-12);
  }
}

TEST_CASE("gauge covariance of the gauged Dirac operator") {
  // A → A + dχ, ψ → e^{−χ}ψ conjugates D̂
  Signature sig = Signature::euclidean(4);
  Geometry g = Geometry::flat(sig);
  GammaRep rep(sig);
  Rng rng(191);
  std::map<unsigned, Poly> comps;
  for (int a = 0; a < 4; ++a) comps[1u << a] = clv::test::random_poly(rng, 4);
  FormField a_field = polynomial_form(sig, comps);
  Poly chi = clv::test::random_poly(rng, 4);

  GaugePotential pot = GaugePotential::from_field(g, a_field);
  // A' = A + dχ
  AnalyticForm shifted{sig};
  shifted.mv = a_field.analytic_form().mv;
  for (int mu = 0; mu < 4; ++mu)
    shifted.mv[1u << mu] += PolyExp(chi.partial(mu));
  GaugePotential pot_shifted = GaugePotential::from_field(
      g, FormField::analytic(std::move(shifted)));

  SpinorField psi = coordinate_spinor_field(sig, rep, random_spinor(rng, 4),
                                            random_spinor(rng, 4));
  psi.set_charge(1);
  // e^{-χ} ψ with the charge unchanged (same bundle, shifted potential)
  AnalyticSpinor scaled_s = psi.analytic_spinor();
  scaled_s.chi = chi;
  const PolyExp factor = PolyExp::weighted(-1, Poly::constant(1.0));
  for (auto& c : scaled_s.comp) c = c * factor;
  SpinorField psi_prime = SpinorField::analytic(sig, std::move(scaled_s));
  psi_prime.set_charge(1);

  for (int t = 0; t < 6; ++t) {
    Point p = rng.next_point(4);
    Spinor<cplx> lhs = values_of(gauged_dirac_at(g, rep, pot_shifted, psi_prime, p));
    Spinor<cplx> rhs = values_of(gauged_dirac_at(g, rep, pot, psi, p));
    const cplx scale = std::exp(-chi.eval(p));
    rhs = scaled(std::move(rhs), scale);
    CHECK(spinor_diff(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("gauged twistor equation and integrability with a flat connection") {
  Signature sig = Signature::euclidean(4);
  Geometry g = Geometry::flat(sig);
  CurvaturePack pack = g.curvature();
  GammaRep rep(sig);
  Rng rng(193);
  Poly chi = clv::test::random_poly(rng, 4);
  GaugePotential pot = GaugePotential::exact(g, chi);

  SpinorField inner = coordinate_spinor_field(sig, rep, random_spinor(rng, 4),
                                              random_spinor(rng, 4));
  SpinorField psi_hat = exp_scaled(inner, chi, 1);

  for (int t = 0; t < 6; ++t) {
    Point p = rng.next_point(4);
    for (int a = 0; a < 4; ++a)
      CHECK(norm(values_of(gauged_twistor_residual_at(g, rep, pot, psi_hat, a, p))) <
            1e-10);
    GaugedTwistorIntegrability res =
        gauged_twistor_integrability_at(g, rep, pack, pot, psi_hat, p);
    CHECK(res.max_norm < 1e-9);
    // F = 0: the conformal condition reduces to C_ab ψ = 0
    for (const auto& r : res.conformal) CHECK(norm(r) < 1e-10);
  }
}
