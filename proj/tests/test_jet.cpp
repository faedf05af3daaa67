#include <functional>

#include "test_support.hpp"

using namespace clv;

namespace {

using ScalarFn = std::function<cplx(const Point&)>;

Point shifted(Point p, int mu, double d) {
  p.x[mu] += d;
  return p;
}

// central differences with one Richardson step
cplx fd_grad(const ScalarFn& f, const Point& p, int mu, double h = 1e-4) {
  auto d = [&](double step) {
    return (f(shifted(p, mu, step)) - f(shifted(p, mu, -step))) / (2.0 * step);
  };
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

cplx fd_hess(const ScalarFn& f, const Point& p, int mu, int nu, double h = 1e-4) {
  auto d = [&](double step) {
    if (mu == nu) {
      return (f(shifted(p, mu, step)) - 2.0 * f(p) + f(shifted(p, mu, -step))) /
             (step * step);
    }
    return (f(shifted(shifted(p, mu, step), nu, step)) -
            f(shifted(shifted(p, mu, step), nu, -step)) -
            f(shifted(shifted(p, mu, -step), nu, step)) +
            f(shifted(shifted(p, mu, -step), nu, -step))) /
           (4.0 * step * step);
  };
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

}  // namespace

TEST_CASE("jet product rule examples") {
  // jet(x1)·jet(x2) at (3,5): value 15, grad (5,3), off-diagonal Hessian 1
  Jet x1 = Jet::coordinate(0, 3.0);
  Jet x2 = Jet::coordinate(1, 5.0);
  Jet prod = x1 * x2;
  CHECK(prod.v == cplx(15.0));
  CHECK(prod.g[0] == cplx(5.0));
  CHECK(prod.g[1] == cplx(3.0));
  CHECK(prod.hess(0, 1) == cplx(1.0));
  CHECK(prod.hess(0, 0) == cplx(0.0));

  Jet c(7.5);
  CHECK(c.g[0] == cplx(0.0));
  CHECK(c.h[0] == cplx(0.0));

  Jet sq = Jet::coordinate(0, 2.0) * Jet::coordinate(0, 2.0);
  CHECK(sq.v == cplx(4.0));
  CHECK(sq.g[0] == cplx(4.0));
  CHECK(sq.hess(0, 0) == cplx(2.0));
}

TEST_CASE("jet arithmetic matches finite differences on rational functions") {
  Rng rng(31);
  const int n = 4;
  for (int trial = 0; trial < 20; ++trial) {
    Poly num = clv::test::random_poly(rng, n, 4);
    // denominator bounded away from zero on the sample box
    Poly den = Poly::constant(6.0) + clv::test::random_poly(rng, n, 2);
    Point p = rng.next_point(n);
    if (std::abs(den.eval(p)) < 0.5) continue;

    ScalarFn f = [&](const Point& q) { return num.eval(q) / den.eval(q); };
    Jet j = num.eval_jet(p) / den.eval_jet(p);

    CHECK(std::abs(j.v - f(p)) < 1e-14);
    for (int mu = 0; mu < n; ++mu)
      CHECK(std::abs(j.g[mu] - fd_grad(f, p, mu)) < 1e-8);
    for (int mu = 0; mu < n; ++mu)
      for (int nu = mu; nu < n; ++nu)
        CHECK(std::abs(j.hess(mu, nu) - fd_hess(f, p, mu, nu)) < 1e-5);
  }
}

TEST_CASE("jet exponential matches finite differences") {
  Rng rng(37);
  const int n = 3;
  for (int trial = 0; trial < 10; ++trial) {
    Poly chi = clv::test::random_poly(rng, n, 3);
    Point p = rng.next_point(n);
    ScalarFn f = [&](const Point& q) { return std::exp(-chi.eval(q)); };
    Jet j = exp(-chi.eval_jet(p));
    CHECK(std::abs(j.v - f(p)) < 1e-12 * std::abs(f(p)) + 1e-14);
    for (int mu = 0; mu < n; ++mu)
      CHECK(std::abs(j.g[mu] - fd_grad(f, p, mu)) < 1e-7);
    for (int mu = 0; mu < n; ++mu)
      for (int nu = mu; nu < n; ++nu)
        CHECK(std::abs(j.hess(mu, nu) - fd_hess(f, p, mu, nu)) < 1e-4);
  }
}

TEST_CASE("jet composition is exact on integer polynomials") {
  Rng rng(41);
  const int n = 3;
  for (int trial = 0; trial < 30; ++trial) {
    Poly f = clv::test::random_poly(rng, n);
    Poly g = clv::test::random_poly(rng, n);
    Point p = rng.next_point(n);

    // product rule: jet(f·g) computed symbolically vs jet arithmetic
    Jet direct = (f * g).eval_jet(p);
    Jet composed = f.eval_jet(p) * g.eval_jet(p);
    CHECK(std::abs(direct.v - composed.v) < 1e-12);
    for (int mu = 0; mu < n; ++mu)
      CHECK(std::abs(direct.g[mu] - composed.g[mu]) < 1e-12);
    for (int mu = 0; mu < n; ++mu)
      for (int nu = mu; nu < n; ++nu)
        CHECK(std::abs(direct.hess(mu, nu) - composed.hess(mu, nu)) < 1e-12);
  }
}

TEST_CASE("jet affine substitution matches symbolic expansion") {
  // f(x1 + 2, x2) via coordinate jets seeded at the shifted point
  Poly f = Poly::coordinate(0) * Poly::coordinate(0) * Poly::coordinate(1);
  Point p = Point::of({1.5, -0.5});
  Jet x0 = Jet::coordinate(0, p.x[0] + 2.0);
  Jet x1 = Jet::coordinate(1, p.x[1]);
  Jet composed = x0 * x0 * x1;
  Point q = Point::of({p.x[0] + 2.0, p.x[1]});
  Jet direct = f.eval_jet(q);
  CHECK(std::abs(direct.v - composed.v) == 0.0);
  for (int mu = 0; mu < 2; ++mu) CHECK(std::abs(direct.g[mu] - composed.g[mu]) == 0.0);
}

TEST_CASE("division by a zero-valued jet is rejected") {
  Jet zero;
  Jet one(1.0);
  CHECK_THROWS_AS(one / zero, SingularityError);
}

TEST_CASE("hessian storage is symmetric by construction") {
  Rng rng(43);
  Poly f = clv::test::random_poly(rng, 4, 5);
  Point p = rng.next_point(4);
  Jet j = f.eval_jet(p);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) CHECK(j.hess(mu, nu) == j.hess(nu, mu));
}
