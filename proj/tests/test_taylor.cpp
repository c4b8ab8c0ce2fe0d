#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gjet/poly.hpp"
#include "gjet/taylor.hpp"

using namespace gjet;

namespace {

// symbolic oracle: exact gradient/hessian of a polynomial at x
void symbolic_jet(const Polynomial& p, const Eigen::VectorXd& x, double& value,
                  Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
  const int n = p.nvars();
  value = p.eval_value(x);
  grad.resize(n);
  hess.resize(n, n);
  for (int i = 0; i < n; ++i) {
    Polynomial di = p.derivative(i);
    grad(i) = di.eval_value(x);
    for (int j = 0; j < n; ++j) hess(i, j) = di.derivative(j).eval_value(x);
  }
}

}  // namespace

TEST_CASE("coordinate seeds") {
  TaylorVector s = seed_coordinates(Eigen::Vector2d(0.0, 0.0));
  CHECK(s[0].value == 0.0);
  CHECK(s[0].grad(0) == 1.0);
  CHECK(s[0].grad(1) == 0.0);
  CHECK(s[1].grad(1) == 1.0);
  CHECK(s[0].hess.cwiseAbs().maxCoeff() == 0.0);

  TaylorVector t = seed_coordinates(Eigen::VectorXd::Constant(1, 1.5));
  CHECK(t[0].value == 1.5);
  CHECK(t[0].grad(0) == 1.0);
}

TEST_CASE("square of a seed carries exact first and second derivatives") {
  TaylorVector s = seed_coordinates(Eigen::VectorXd::Constant(1, 3.0));
  TaylorScalar f = s[0] * s[0];
  CHECK(f.value == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(f.grad(0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(f.hess(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("product of two seeds") {
  TaylorVector s = seed_coordinates(Eigen::Vector2d(2.0, 3.0));
  TaylorScalar f = s[0] * s[1];
  CHECK(f.value == doctest::Approx(6.0));
  CHECK(f.grad(0) == doctest::Approx(3.0));
  CHECK(f.grad(1) == doctest::Approx(2.0));
  CHECK(f.hess(0, 1) == doctest::Approx(1.0));
  CHECK(f.hess(1, 0) == doctest::Approx(1.0));
  CHECK(f.hess(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("additive identity") {
  TaylorVector s = seed_coordinates(Eigen::Vector2d(0.7, -0.3));
  TaylorScalar a = s[0] * s[1] + 0.25;
  TaylorScalar b = a + TaylorScalar::constant(0.0, 2);
  CHECK(b.value == a.value);
  CHECK((b.grad - a.grad).cwiseAbs().maxCoeff() == 0.0);
  CHECK((b.hess - a.hess).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exp of a seed at zero") {
  TaylorVector s = seed_coordinates(Eigen::VectorXd::Zero(1));
  TaylorScalar f = exp(s[0]);
  CHECK(f.value == doctest::Approx(1.0));
  CHECK(f.grad(0) == doctest::Approx(1.0));
  CHECK(f.hess(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("division guard") {
  TaylorVector s = seed_coordinates(Eigen::VectorXd::Zero(1));
  CHECK_THROWS_AS(s[0] / TaylorScalar::constant(0.0, 1), DivisionNearZero);
  CHECK_THROWS_AS(s[0] / TaylorScalar::constant(1e-13, 1), DivisionNearZero);
}

TEST_CASE("random polynomials match the symbolic oracle") {
  Rng rng(20240811ull);
  for (int n = 1; n <= 3; ++n) {
    for (int rep = 0; rep < 40; ++rep) {
      Polynomial p = random_polynomial(rng, n, 4, 1.0);
      Eigen::VectorXd x = rng.uniform_vec(n, -1.0, 1.0);
      double value;
      Eigen::VectorXd grad;
      Eigen::MatrixXd hess;
      symbolic_jet(p, x, value, grad, hess);
      TaylorScalar f = p.eval(seed_coordinates(x));
      double scale = std::max(1.0, std::abs(value));
      CHECK(std::abs(f.value - value) / scale <= 1e-12);
      CHECK((f.grad - grad).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, grad.cwiseAbs().maxCoeff()));
      CHECK((f.hess - hess).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, hess.cwiseAbs().maxCoeff()));
      CHECK((f.hess - f.hess.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
}

TEST_CASE("hessian symmetry survives every operation") {
  Rng rng(77ull);
  for (int rep = 0; rep < 60; ++rep) {
    TaylorVector s = seed_coordinates(rng.uniform_vec(2, -1.0, 1.0));
    TaylorScalar a = sin(s[0]) * exp(s[1]) + s[0] * s[0] * s[1];
    TaylorScalar b = cos(s[1]) + s[0] / (s[1] + 3.0);
    for (const TaylorScalar& v : {a + b, a - b, a * b, a / (b + 5.0), exp(a * 0.1)})
      CHECK((v.hess - v.hess.transpose()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("jet composition: identity and constant") {
  SmoothMap sq{1, 1, [](const TaylorVector& x) {
                 return TaylorVector{x[0] * x[0]};
               }};
  Eigen::VectorXd x1 = Eigen::VectorXd::Constant(1, 1.2);
  MapJet2 inner = extract_jet2(sq, x1);
  MapJet2 ident;
  ident.value = inner.value;
  ident.jac = Eigen::MatrixXd::Identity(1, 1);
  ident.hess = {Eigen::MatrixXd::Zero(1, 1)};
  // outer = identity jet at f(x)
  MapJet2 same = compose_jet2(ident, inner);
  CHECK((same.jac - inner.jac).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((same.hess[0] - inner.hess[0]).cwiseAbs().maxCoeff() <= 1e-15);
  // inner = identity jet: outer unchanged
  MapJet2 ident_at_x;
  ident_at_x.value = x1;
  ident_at_x.jac = Eigen::MatrixXd::Identity(1, 1);
  ident_at_x.hess = {Eigen::MatrixXd::Zero(1, 1)};
  MapJet2 same2 = compose_jet2(inner, ident_at_x);
  CHECK((same2.jac - inner.jac).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((same2.hess[0] - inner.hess[0]).cwiseAbs().maxCoeff() <= 1e-15);
  // constant outer kills all derivative blocks
  MapJet2 constant;
  constant.value = Eigen::VectorXd::Constant(1, 4.0);
  constant.jac = Eigen::MatrixXd::Zero(1, 1);
  constant.hess = {Eigen::MatrixXd::Zero(1, 1)};
  MapJet2 dead = compose_jet2(constant, inner);
  CHECK(dead.jac.cwiseAbs().maxCoeff() == 0.0);
  CHECK(dead.hess[0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("jet composition x^2 then y^3 gives the jet of x^6") {
  SmoothMap sq{1, 1, [](const TaylorVector& x) {
                 return TaylorVector{x[0] * x[0]};
               }};
  SmoothMap cube{1, 1, [](const TaylorVector& y) {
                   return TaylorVector{y[0] * y[0] * y[0]};
                 }};
  Eigen::VectorXd x1 = Eigen::VectorXd::Constant(1, 1.0);
  MapJet2 inner = extract_jet2(sq, x1);
  MapJet2 outer = extract_jet2(cube, inner.value);
  MapJet2 comp = compose_jet2(outer, inner);
  // d/dx x^6 = 6 x^5 -> 6 at 1; d2/dx2 = 30 x^4 -> 30
  CHECK(comp.value(0) == doctest::Approx(1.0));
  CHECK(comp.jac(0, 0) == doctest::Approx(6.0));
  CHECK(comp.hess[0](0, 0) == doctest::Approx(30.0));
}

TEST_CASE("jet composition is associative") {
  Rng rng(5150ull);
  for (int rep = 0; rep < 30; ++rep) {
    auto poly_map = [&](int in_dim, int out_dim) {
      std::vector<Polynomial> ps;
      for (int i = 0; i < out_dim; ++i) ps.push_back(random_polynomial(rng, in_dim, 3, 0.6));
      return SmoothMap{in_dim, out_dim, [ps](const TaylorVector& x) {
                         TaylorVector out;
                         for (const auto& p : ps) out.push_back(p.eval(x));
                         return out;
                       }};
    };
    SmoothMap f = poly_map(2, 2), g = poly_map(2, 2), h = poly_map(2, 2);
    Eigen::VectorXd x = rng.uniform_vec(2, -0.5, 0.5);
    MapJet2 jf = extract_jet2(f, x);
    MapJet2 jg = extract_jet2(g, jf.value);
    MapJet2 jh = extract_jet2(h, jg.value);
    MapJet2 a = compose_jet2(compose_jet2(jh, jg), jf);
    MapJet2 b = compose_jet2(jh, compose_jet2(jg, jf));
    CHECK((a.jac - b.jac).cwiseAbs().maxCoeff() <= 1e-12);
    for (int k = 0; k < 2; ++k)
      CHECK((a.hess[k] - b.hess[k]).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("finite differences confirm Taylor jets") {
  Rng rng(99ull);
  // polynomial map
  Polynomial p = random_polynomial(rng, 2, 3, 0.8);
  SmoothMap f{2, 1, [p](const TaylorVector& x) { return TaylorVector{p.eval(x)}; }};
  FiniteDifferenceReport rep = finite_difference_check(f, Eigen::Vector2d(0.3, -0.2), 1e-4);
  CHECK(rep.max_residual <= 1e-6);

  // constant map
  SmoothMap c{2, 1, [](const TaylorVector& x) {
                return TaylorVector{TaylorScalar::constant(2.5, x[0].nvars())};
              }};
  FiniteDifferenceReport repc = finite_difference_check(c, Eigen::Vector2d(0.0, 0.0), 1e-4);
  CHECK(repc.max_residual <= 1e-12);

  // map involving sin
  SmoothMap s{1, 1, [](const TaylorVector& x) {
                return TaylorVector{sin(x[0]) * x[0]};
              }};
  FiniteDifferenceReport reps =
      finite_difference_check(s, Eigen::VectorXd::Constant(1, 0.7), 1e-4);
  CHECK(reps.max_residual <= 1e-6);
}

TEST_CASE("taylor matrix inverse and exponential") {
  Rng rng(4242ull);
  for (int rep = 0; rep < 20; ++rep) {
    TaylorVector s = seed_coordinates(rng.uniform_vec(2, -0.4, 0.4));
    TaylorMatrix m = TaylorMatrix::identity(3, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = m(i, j) + 0.2 * rng.uniform(-1.0, 1.0) * s[0] +
                  0.15 * rng.uniform(-1.0, 1.0) * s[1] +
                  TaylorScalar::constant(0.1 * rng.uniform(-1.0, 1.0), 2);
    TaylorMatrix prod = m * inverse(m);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(prod(i, j).value - (i == j ? 1.0 : 0.0)) <= 1e-13);
        CHECK(prod(i, j).grad.cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(prod(i, j).hess.cwiseAbs().maxCoeff() <= 1e-12);
      }
    // exp(M)·exp(-M) = I including derivative blocks
    TaylorMatrix e = expm(m);
    TaylorMatrix eneg = expm(-1.0 * m);
    TaylorMatrix one = e * eneg;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(one(i, j).value - (i == j ? 1.0 : 0.0)) <= 1e-12);
        CHECK(one(i, j).grad.cwiseAbs().maxCoeff() <= 1e-11);
      }
  }
}
