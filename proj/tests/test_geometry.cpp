#include "clv/scenario.hpp"
#include "test_support.hpp"

using namespace clv;
using clv::test::max_abs;

TEST_CASE("backend certification: curvature from connection jets matches closed forms") {
  for (int n : {3, 4, 5}) {
    for (const Signature& sig : clv::test::test_signatures(n)) {
      for (double k : {0.0, 1.0, -1.0, 0.4}) {
        Geometry g = k == 0.0 ? Geometry::flat(sig)
                              : Geometry::constant_curvature(sig, k);
        CertificationResult cert = certify_backend(g, 25, 99);
        INFO("n=" << n << " k=" << k << " euclid=" << sig.euclid());
        for (const auto& item : cert.items) {
          INFO(item.name << " residual " << item.max_residual);
          CHECK(item.pass());
        }
      }
    }
  }
}

TEST_CASE("constant-curvature pack closed forms") {
  Signature sig = Signature::euclidean(4);
  const double k = 0.7;
  Geometry g = Geometry::constant_curvature(sig, k);
  CurvaturePack pack = g.curvature();
  const int n = 4;

  for (int a = 0; a < n; ++a) {
    // P_a = k(n-1) e_a and K_a = -(k/2) e_a
    Multivector<cplx> ea = coframe_form<cplx>(sig, a, 1.0);
    CHECK(max_abs(pack.p_a[a] - ea * (k * (n - 1.0))) < 1e-15);
    CHECK(max_abs(pack.k_a[a] + ea * (k / 2.0)) < 1e-15);
    for (int b = 0; b < n; ++b) {
      CHECK(max_abs(pack.R(a, b) -
                    wedge(coframe_form<cplx>(sig, a, 1.0),
                          coframe_form<cplx>(sig, b, 1.0)) * k) < 1e-15);
      CHECK(max_abs(pack.C(a, b)) == 0.0);
      CHECK(max_abs(pack.R(a, b) + pack.R(b, a)) == 0.0);
    }
  }
  CHECK(pack.scalar == Catch::Approx(k * n * (n - 1)));
}

TEST_CASE("covariant derivative on the flat backend is the coefficient partial") {
  Signature sig = Signature::euclidean(3);
  Geometry g = Geometry::flat(sig);
  Rng rng(59);
  FormField f = clv::test::random_poly_form(rng, sig, 1);
  Point p = rng.next_point(3);
  Multivector<Jet> fj = f.eval(p);
  for (int a = 0; a < 3; ++a) {
    Multivector<cplx> nab = value_jets(covariant_derivative_at(g, f, a, p));
    for (unsigned m = 0; m < fj.size(); ++m)
      CHECK(std::abs(nab[m] - fj[m].g[a]) < 1e-15);
  }
}

TEST_CASE("connection vanishes at the chart origin") {
  Signature sig = Signature::euclidean(4);
  Geometry g = Geometry::constant_curvature(sig, 1.3);
  Point origin = Point::of({0, 0, 0, 0});
  for (int c = 0; c < 4; ++c) {
    Multivector<Jet> b = g.connection_bivector(c, origin);
    CHECK(max_abs(value_jets(b)) == 0.0);
  }
  // so ∇_a e^b = 0 at the origin
  FormField e2 = constant_form(sig, {{1u << 1, cplx(1.0)}});
  for (int a = 0; a < 4; ++a)
    CHECK(max_abs(value_jets(covariant_derivative_at(g, e2, a, origin))) == 0.0);
}

TEST_CASE("covariant derivative satisfies the Clifford Leibniz rule") {
  Rng rng(61);
  for (const Signature& sig : clv::test::test_signatures(4)) {
    Geometry g = Geometry::constant_curvature(sig, -0.8);
    FormField alpha = clv::test::random_poly_form(rng, sig, 1);
    FormField beta = clv::test::random_poly_form(rng, sig, 2);
    // α·β as an analytic field
    AnalyticForm prod{sig};
    prod.mv = clifford(alpha.analytic_form().mv, beta.analytic_form().mv);
    FormField prod_field = FormField::analytic(std::move(prod));
    for (int t = 0; t < 6; ++t) {
      Point p = g.sample_point(rng);
      for (int a = 0; a < 4; ++a) {
        Multivector<cplx> lhs = value_jets(covariant_derivative_at(g, prod_field, a, p));
        Multivector<cplx> rhs =
            clifford(value_jets(covariant_derivative_at(g, alpha, a, p)),
                     beta.value(p)) +
            clifford(alpha.value(p),
                     value_jets(covariant_derivative_at(g, beta, a, p)));
        CHECK(max_abs(lhs - rhs) < 1e-12);
      }
    }
  }
}

TEST_CASE("d and delta square to zero on both backends") {
  Rng rng(67);
  for (const Signature& sig : clv::test::test_signatures(4)) {
    for (double k : {0.0, 0.9}) {
      Geometry g = k == 0.0 ? Geometry::flat(sig)
                            : Geometry::constant_curvature(sig, k);
      for (int grade : {0, 1, 2}) {
        FormField f = clv::test::random_poly_form(rng, sig, grade);
        for (int t = 0; t < 4; ++t) {
          Point p = g.sample_point(rng);
          CHECK(max_abs(value_jets(d_at(g, d(g, f), p))) < 1e-11);
          CHECK(max_abs(value_jets(delta_at(g, delta(g, f), p))) < 1e-11);
        }
      }
    }
  }
}

TEST_CASE("flat scalar example: d and delta") {
  Signature sig = Signature::euclidean(2);
  Geometry g = Geometry::flat(sig);
  FormField f = polynomial_form(sig, {{0u, Poly::coordinate(0) * Poly::coordinate(1)}});
  Point p = Point::of({0.25, -1.5});
  Multivector<cplx> df = value_jets(d_at(g, f, p));
  CHECK(std::abs(df[1] - cplx(-1.5)) < 1e-15);  // x2 e1
  CHECK(std::abs(df[2] - cplx(0.25)) < 1e-15);  // x1 e2
  CHECK(max_abs(value_jets(delta_at(g, f, p))) == 0.0);
}

TEST_CASE("curvature action examples and jet oracle") {
  Rng rng(71);
  SECTION("flat action vanishes") {
    Signature sig = Signature::euclidean(4);
    Geometry g = Geometry::flat(sig);
    CurvaturePack pack = g.curvature();
    FormField f = clv::test::random_poly_form(rng, sig, 1);
    Point p = rng.next_point(4);
    CHECK(max_abs(value_jets(curvature_action_at(g, pack, f, 0, 1, p))) == 0.0);
    CHECK(max_abs(value_jets(curvature_commutator_at(g, f, 0, 1, p))) < 1e-13);
  }
  SECTION("constant curvature on e1: (1/2)[k e12, e1] = -k e2") {
    Signature sig = Signature::euclidean(4);
    const double k = 1.1;
    Geometry g = Geometry::constant_curvature(sig, k);
    CurvaturePack pack = g.curvature();
    FormField e1 = constant_form(sig, {{1u << 0, cplx(1.0)}});
    Point p = g.sample_point(rng);
    Multivector<cplx> act = value_jets(curvature_action_at(g, pack, e1, 0, 1, p));
    Multivector<cplx> expect = coframe_form<cplx>(sig, 1, cplx(-k));
    CHECK(max_abs(act - expect) < 1e-15);
  }
  SECTION("commutator oracle matches the closed-form action") {
    for (const Signature& sig : clv::test::test_signatures(4)) {
      Geometry g = Geometry::constant_curvature(sig, 0.6);
      CurvaturePack pack = g.curvature();
      for (int grade : {1, 2}) {
        FormField f = clv::test::random_poly_form(rng, sig, grade);
        for (int t = 0; t < 3; ++t) {
          Point p = g.sample_point(rng);
          for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
              Multivector<cplx> commutator =
                  value_jets(curvature_commutator_at(g, f, a, b, p));
              Multivector<cplx> action =
                  value_jets(curvature_action_at(g, pack, f, a, b, p));
              CHECK(max_abs(commutator - action) < 1e-9);
            }
        }
      }
    }
  }
}

TEST_CASE("curvature endomorphism: definition and both expansion routes") {
  Rng rng(73);
  SECTION("flat: zero") {
    Signature sig = Signature::euclidean(4);
    Geometry g = Geometry::flat(sig);
    CurvaturePack pack = g.curvature();
    FormField f = clv::test::random_poly_form(rng, sig, 2);
    Point p = rng.next_point(4);
    CHECK(max_abs(value_jets(curvature_endomorphism_at(g, pack, f, p))) == 0.0);
  }
  SECTION("scalar input: zero") {
    Signature sig = Signature::euclidean(4);
    Geometry g = Geometry::constant_curvature(sig, 1.0);
    CurvaturePack pack = g.curvature();
    FormField f = polynomial_form(sig, {{0u, Poly::coordinate(0)}});
    Point p = g.sample_point(rng);
    CHECK(max_abs(value_jets(curvature_endomorphism_at(g, pack, f, p))) < 1e-15);
  }
  SECTION("1-form eigenvalue k(n-1) and route agreement") {
    for (const Signature& sig : clv::test::test_signatures(4)) {
      const double k = 0.85;
      Geometry g = Geometry::constant_curvature(sig, k);
      CurvaturePack pack = g.curvature();
      FormField f = clv::test::random_poly_form(rng, sig, 1);
      for (int t = 0; t < 4; ++t) {
        Point p = g.sample_point(rng);
        Multivector<cplx> ir = value_jets(curvature_endomorphism_at(g, pack, f, p));
        CHECK(max_abs(ir - f.value(p) * (k * 3.0)) < 1e-12);
        CHECK(max_abs(ir - curvature_endomorphism_clifford(pack, f.value(p))) < 1e-12);
        CHECK(max_abs(ir - curvature_endomorphism_wedge(pack, f.value(p))) < 1e-12);
      }
    }
  }
  SECTION("route agreement on random inhomogeneous values") {
    Signature sig = Signature::euclidean(5);
    Geometry g = Geometry::constant_curvature(sig, -0.5);
    CurvaturePack pack = g.curvature();
    for (int t = 0; t < 20; ++t) {
      Multivector<cplx> v = clv::test::random_int_mv(rng, sig);
      CHECK(max_abs(curvature_endomorphism_clifford(pack, v) -
                    curvature_endomorphism_wedge(pack, v)) < 1e-12);
    }
  }
}

TEST_CASE("Weitzenboeck identity and Laplace route agreement") {
  Rng rng(79);
  SECTION("flat polynomial forms within 1e-10") {
    Signature sig = Signature::euclidean(4);
    Geometry g = Geometry::flat(sig);
    CurvaturePack pack = g.curvature();
    for (int grade : {0, 1, 2}) {
      FormField f = clv::test::random_poly_form(rng, sig, grade);
      for (int t = 0; t < 5; ++t) {
        Point p = rng.next_point(4);
        CHECK(max_abs(value_jets(weitzenbock_residual_at(g, pack, f, p))) < 1e-10);
        CHECK(max_abs(value_jets(laplace_at(g, f, p)) -
                      value_jets(laplace_dd_at(g, f, p))) < 1e-10);
      }
    }
  }
  SECTION("curved random polynomial forms within 1e-8") {
    for (const Signature& sig : clv::test::test_signatures(4)) {
      Geometry g = Geometry::constant_curvature(sig, 1.2);
      CurvaturePack pack = g.curvature();
      for (int grade : {0, 1}) {
        FormField f = clv::test::random_poly_form(rng, sig, grade);
        for (int t = 0; t < 5; ++t) {
          Point p = g.sample_point(rng);
          CHECK(max_abs(value_jets(weitzenbock_residual_at(g, pack, f, p))) < 1e-8);
          CHECK(max_abs(value_jets(laplace_at(g, f, p)) -
                        value_jets(laplace_dd_at(g, f, p))) < 1e-8);
        }
      }
    }
  }
  SECTION("harmonic polynomial is annihilated on the flat backend") {
    Signature sig = Signature::euclidean(2);
    Geometry g = Geometry::flat(sig);
    Poly harm = Poly::coordinate(0) * Poly::coordinate(0) -
                Poly::coordinate(1) * Poly::coordinate(1);
    FormField f = polynomial_form(sig, {{0u, harm}});
    Rng r2(81);
    for (int t = 0; t < 5; ++t) {
      Point p = r2.next_point(2);
      CHECK(max_abs(value_jets(laplace_at(g, f, p))) < 1e-13);
    }
  }
}

TEST_CASE("chart domain policy") {
  Signature sig = Signature::euclidean(4);
  Geometry g = Geometry::constant_curvature(sig, -4.0);
  // h = 1 - |x|^2 vanishes on the unit sphere; the box sampler must reject
  Rng rng(83);
  int rejected = 0;
  for (int i = 0; i < 50; ++i) {
    Point p = g.sample_point(rng, &rejected);
    CHECK(g.chart_ok(p));
  }
  CHECK(rejected > 0);
  CHECK_FALSE(g.chart_ok(Point::of({1.0, 0.0, 0.0, 0.05})));
}
