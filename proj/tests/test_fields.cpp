#include "clv/calculus.hpp"
#include "clv/spinor_calculus.hpp"
#include "test_support.hpp"

using namespace clv;
using clv::test::max_abs;

TEST_CASE("polynomial field evaluation carries exact derivatives") {
  Signature sig = Signature::euclidean(3);
  // scalar f = x1 x2
  FormField f = polynomial_form(
      sig, {{0u, Poly::coordinate(0) * Poly::coordinate(1)}});
  Point p = Point::of({2.0, -3.0, 0.5});
  Multivector<Jet> jets = f.eval(p);
  CHECK(jets[0].v == cplx(-6.0));
  CHECK(jets[0].g[0] == cplx(-3.0));
  CHECK(jets[0].g[1] == cplx(2.0));
  CHECK(jets[0].g[2] == cplx(0.0));
  CHECK(jets[0].hess(0, 1) == cplx(1.0));

  // constant 1-form: all derivatives vanish
  FormField c = constant_form(sig, {{1u << 0, cplx(3.0)}});
  Multivector<Jet> cj = c.eval(p);
  CHECK(cj[1].v == cplx(3.0));
  for (int mu = 0; mu < 3; ++mu) CHECK(cj[1].g[mu] == cplx(0.0));

  // harmonic polynomial: trace of the Hessian vanishes identically
  Poly harm = Poly::coordinate(0) * Poly::coordinate(0) -
              Poly::coordinate(1) * Poly::coordinate(1);
  FormField h = polynomial_form(sig, {{0u, harm}});
  Multivector<Jet> hj = h.eval(p);
  CHECK(hj[0].hess(0, 0) + hj[0].hess(1, 1) + hj[0].hess(2, 2) == cplx(0.0));
}

TEST_CASE("flat exterior derivative of a polynomial field matches symbolic differentiation") {
  Signature sig = Signature::euclidean(3);
  Geometry g = Geometry::flat(sig);
  FormField f = polynomial_form(
      sig, {{0u, Poly::coordinate(0) * Poly::coordinate(1)}});
  Point p = Point::of({0.7, 1.1, -0.2});
  Multivector<cplx> df = value_jets(d_at(g, f, p));
  // df = x2 e1 + x1 e2
  CHECK(std::abs(df[1] - cplx(1.1)) < 1e-15);
  CHECK(std::abs(df[2] - cplx(0.7)) < 1e-15);
  CHECK(max_abs(value_jets(delta_at(g, f, p))) < 1e-15);
}

TEST_CASE("coordinate spinor ansatz") {
  Signature sig = Signature::euclidean(4);
  GammaRep rep(sig);
  Geometry g = Geometry::flat(sig);
  Spinor<cplx> phi0 = {cplx(1.0), cplx(0.0), cplx(0.5), cplx(0.0)};
  Spinor<cplx> phi1 = {cplx(0.0), cplx(1.0), cplx(0.0), cplx(-0.5)};

  SECTION("zero phi1 gives a constant field") {
    SpinorField psi = coordinate_spinor_field(sig, rep, phi0, Spinor<cplx>(4));
    Point p = Point::of({0.3, -0.4, 0.9, 0.1});
    Spinor<Jet> j = psi.eval(p);
    for (int i = 0; i < 4; ++i) {
      CHECK(j[i].v == phi0[i]);
      for (int mu = 0; mu < 4; ++mu) CHECK(j[i].g[mu] == cplx(0.0));
    }
  }

  SECTION("Dirac operator gives n phi1") {
    SpinorField psi = coordinate_spinor_field(sig, rep, phi0, phi1);
    Rng rng(5);
    for (int t = 0; t < 5; ++t) {
      Point p = rng.next_point(4);
      Spinor<cplx> dv = values_of(dirac_at(g, rep, psi, p));
      for (int i = 0; i < 4; ++i) CHECK(std::abs(dv[i] - 4.0 * phi1[i]) < 1e-14);
    }
  }

  SECTION("Penrose residual vanishes at random points") {
    SpinorField psi = coordinate_spinor_field(sig, rep, phi0, phi1);
    Rng rng(6);
    for (int t = 0; t < 5; ++t) {
      Point p = rng.next_point(4);
      for (int a = 0; a < 4; ++a)
        CHECK(norm(values_of(penrose_residual_at(g, rep, psi, a, p))) < 1e-14);
    }
  }

  SECTION("dimension mismatch is rejected") {
    CHECK_THROWS_AS(coordinate_spinor_field(sig, rep, {cplx(1.0)}, phi1), UsageError);
  }
}

TEST_CASE("analytic path and jet path agree on derivative operators") {
  Rng rng(47);
  for (const Signature& sig :
       {Signature::euclidean(4), Signature::lorentzian(4)}) {
    for (const Geometry& g :
         {Geometry::flat(sig), Geometry::constant_curvature(sig, 0.7)}) {
      for (int grade = 0; grade <= 2; ++grade) {
        FormField f = clv::test::random_poly_form(rng, sig, grade);
        const AnalyticForm& af = f.analytic_form();
        FormField df_sym = FormField::analytic(d_analytic(g, af));
        FormField delf_sym = FormField::analytic(delta_analytic(g, af));
        FormField hf_sym = FormField::analytic(hodge_analytic(g, af));
        for (int t = 0; t < 6; ++t) {
          Point p = g.sample_point(rng);
          CHECK(max_abs(value_jets(d_at(g, f, p)) - df_sym.value(p)) < 1e-12);
          CHECK(max_abs(value_jets(delta_at(g, f, p)) - delf_sym.value(p)) < 1e-12);
          CHECK(max_abs(value_jets(hodge_de_rham_at(g, f, p)) - hf_sym.value(p)) < 1e-12);
          // d̸ = d − δ
          CHECK(max_abs(value_jets(hodge_de_rham_at(g, f, p)) -
                        value_jets(d_at(g, f, p)) + value_jets(delta_at(g, f, p))) <
                1e-12);
        }
      }
    }
  }
}

TEST_CASE("exp-scaled fields differentiate exactly") {
  Signature sig = Signature::euclidean(4);
  Geometry g = Geometry::flat(sig);
  Poly chi = Poly::coordinate(0) + Poly::coordinate(1) * Poly::coordinate(1);
  FormField inner = polynomial_form(sig, {{0u, Poly::coordinate(1)}});
  FormField f = exp_scaled(inner, chi, 1);
  CHECK(f.charge() == 1);

  Point p = Point::of({0.2, -0.7, 0.4, 0.0});
  const double e = std::exp(-(0.2 + 0.49));
  Multivector<Jet> j = f.eval(p);
  CHECK(std::abs(j[0].v - cplx(-0.7 * e)) < 1e-14);
  // ∂_1 (e^{-χ} x2) = -e^{-χ} x2
  CHECK(std::abs(j[0].g[0] - cplx(0.7 * e)) < 1e-14);
  // ∂_2 (e^{-χ} x2) = e^{-χ}(1 - 2 x2 x2)
  CHECK(std::abs(j[0].g[1] - cplx(e * (1.0 - 2.0 * (-0.7) * (-0.7)))) < 1e-14);

  // symbolic partial matches jet gradient
  const AnalyticForm& af = f.analytic_form();
  PolyExp d0 = af.mv[0].partial(0, af.chi);
  CHECK(std::abs(d0.eval(p, af.chi) - j[0].g[0]) < 1e-14);
}

TEST_CASE("field depth bookkeeping blocks over-differentiation") {
  Signature sig = Signature::euclidean(3);
  Geometry g = Geometry::flat(sig);
  Rng rng(53);
  FormField f = clv::test::random_poly_form(rng, sig, 1);
  FormField once = d(g, f);
  CHECK(once.depth() == 1);
  FormField twice = delta(g, once);
  CHECK(twice.depth() == 0);
  CHECK_THROWS_AS(d(g, twice), PreconditionError);
}
