#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gjet/lie.hpp"

using namespace gjet;

namespace {

Eigen::MatrixXd rot2(double a) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

double mdiff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

const std::vector<GroupPtr>& all_groups() {
  static const std::vector<GroupPtr> gs{make_u1(), make_so(2), make_so(3),
                                        make_su2(), make_gl(2)};
  return gs;
}

}  // namespace

TEST_CASE("algebra bases are independent and closed under bracket") {
  for (const auto& g : all_groups()) {
    const int d = g->algebra_dim();
    for (int a = 0; a < d; ++a) {
      // independence: projecting a basis vector returns exactly itself
      Eigen::VectorXd coords = g->algebra_coords(g->basis()[static_cast<size_t>(a)]);
      Eigen::VectorXd expected = Eigen::VectorXd::Unit(d, a);
      CHECK((coords - expected).cwiseAbs().maxCoeff() <= 1e-12);
      for (int b = 0; b < d; ++b) {
        Eigen::MatrixXd br = g->basis()[static_cast<size_t>(a)] * g->basis()[static_cast<size_t>(b)] -
                             g->basis()[static_cast<size_t>(b)] * g->basis()[static_cast<size_t>(a)];
        CHECK(g->algebra_residual(br) <= 1e-10);
      }
    }
  }
}

TEST_CASE("multiplication and inverse") {
  Rng rng(11ull);
  for (const auto& g : all_groups()) {
    GroupElement e = GroupElement::identity(g);
    for (int rep = 0; rep < 50; ++rep) {
      GroupElement a = random_element(g, rng, 0.9);
      CHECK(mdiff(mul(a, e).mat, a.mat) == 0.0);
      CHECK(mdiff(mul(inv(a), a).mat, e.mat) <= 1e-12);
    }
  }
  // closed form on rotations
  CHECK(mdiff(mul(GroupElement(make_u1(), rot2(0.4)), GroupElement(make_u1(), rot2(1.1))).mat,
              rot2(1.5)) <= 1e-14);
  CHECK_THROWS_AS(mul(GroupElement(make_u1(), rot2(0.4)),
                      GroupElement::identity(make_so(3))),
                  GroupMismatch);
}

TEST_CASE("exponential map") {
  GroupPtr u1 = make_u1();
  CHECK(mdiff(group_exp(AlgebraElement::zero(u1)).mat, Eigen::MatrixXd::Identity(2, 2)) == 0.0);
  // so(2) generator with angle pi/2
  Eigen::MatrixXd x(2, 2);
  x << 0.0, -M_PI_2, M_PI_2, 0.0;
  CHECK(mdiff(group_exp(AlgebraElement(u1, x)).mat, rot2(M_PI_2)) <= 1e-14);

  Rng rng(13ull);
  for (const auto& g : all_groups()) {
    for (int rep = 0; rep < 40; ++rep) {
      AlgebraElement a = random_algebra(g, rng, 1.0);
      GroupElement ep = group_exp(a);
      AlgebraElement na{g, -a.mat};
      CHECK(mdiff(mul(ep, group_exp(na)).mat,
                  Eigen::MatrixXd::Identity(g->size(), g->size())) <= 1e-12);
      CHECK(g->membership_residual(ep.mat) <= g->eps_grp());
      // one-parameter subgroup property for bounded arguments
      double s = rng.uniform(-1.0, 1.0), t = rng.uniform(-1.0, 1.0);
      Eigen::MatrixXd lhs = group_exp(AlgebraElement{g, (s + t) * a.mat}).mat;
      Eigen::MatrixXd rhs = group_exp(AlgebraElement{g, s * a.mat}).mat *
                            group_exp(AlgebraElement{g, t * a.mat}).mat;
      CHECK(mdiff(lhs, rhs) <= 1e-10);
    }
  }
}

TEST_CASE("adjoint representation") {
  GroupPtr so3 = make_so(3);
  // basis of so(3): plane (0,1) -> index 0, (0,2) -> 1, (1,2) -> 2
  AlgebraElement about_z{so3, so3->basis()[0]};
  AlgebraElement about_y{so3, so3->basis()[1]};
  AlgebraElement about_x{so3, so3->basis()[2]};

  CHECK(mdiff(adjoint(GroupElement::identity(so3), about_x).mat, about_x.mat) == 0.0);

  // a quarter turn in the (0,1) plane takes the (1,2)-plane generator to the
  // (0,2)-plane generator, up to the orientation fixed by the basis
  Eigen::MatrixXd rz = group_exp(AlgebraElement{so3, M_PI_2 * so3->basis()[0]}).mat;
  Eigen::MatrixXd moved = adjoint(GroupElement{so3, rz}, about_x).mat;
  CHECK(std::min(mdiff(moved, about_y.mat), mdiff(moved, Eigen::MatrixXd(-about_y.mat))) <= 1e-13);

  Rng rng(17ull);
  for (const auto& g : all_groups()) {
    for (int rep = 0; rep < 40; ++rep) {
      GroupElement g1 = random_element(g, rng, 0.8);
      GroupElement g2 = random_element(g, rng, 0.8);
      AlgebraElement a = random_algebra(g, rng, 1.0);
      AlgebraElement b = random_algebra(g, rng, 1.0);
      // group action property
      CHECK(mdiff(adjoint(mul(g1, g2), a).mat, adjoint(g1, adjoint(g2, a)).mat) <= 1e-12);
      // Ad(g) preserves the bracket
      CHECK(mdiff(adjoint(g1, bracket(a, b)).mat,
                  bracket(adjoint(g1, a), adjoint(g1, b)).mat) <= 1e-10);
      // Ad lands in the algebra
      CHECK(g->algebra_residual(adjoint(g1, a).mat) <= 1e-10);
    }
  }
}

TEST_CASE("bracket") {
  GroupPtr so3 = make_so(3);
  AlgebraElement ez{so3, so3->basis()[0]}, ey{so3, so3->basis()[1]}, ex{so3, so3->basis()[2]};
  Eigen::MatrixXd br = bracket(ez, ey).mat;
  CHECK(so3->algebra_residual(br) <= 1e-14);
  CHECK(std::min(mdiff(br, ex.mat), mdiff(br, Eigen::MatrixXd(-ex.mat))) <= 1e-14);

  Rng rng(19ull);
  for (const auto& g : all_groups()) {
    AlgebraElement a = random_algebra(g, rng, 1.0);
    AlgebraElement b = random_algebra(g, rng, 1.0);
    CHECK(bracket(a, a).mat.cwiseAbs().maxCoeff() == 0.0);
    CHECK(mdiff(bracket(a, b).mat, Eigen::MatrixXd(-bracket(b, a).mat)) == 0.0);
  }
}

TEST_CASE("random sampling is deterministic and stays on the group") {
  for (const auto& g : all_groups()) {
    CHECK(mdiff(random_element(g, 7ull, 0.0).mat,
                Eigen::MatrixXd::Identity(g->size(), g->size())) == 0.0);
    CHECK(random_algebra(g, 7ull, 0.0).mat.cwiseAbs().maxCoeff() == 0.0);
    CHECK(mdiff(random_element(g, 123ull, 0.7).mat, random_element(g, 123ull, 0.7).mat) == 0.0);
    Rng rng(31ull);
    for (int rep = 0; rep < 1000; ++rep)
      CHECK(g->membership_residual(random_element(g, rng, 1.0).mat) <= g->eps_grp());
  }
}

TEST_CASE("group axioms on random triples") {
  Rng rng(23ull);
  for (const auto& g : all_groups()) {
    for (int rep = 0; rep < 60; ++rep) {
      GroupElement a = random_element(g, rng, 0.9);
      GroupElement b = random_element(g, rng, 0.9);
      GroupElement c = random_element(g, rng, 0.9);
      CHECK(mdiff(mul(mul(a, b), c).mat, mul(a, mul(b, c)).mat) <= 1e-12);
    }
  }
}

TEST_CASE("algebra linear maps compose and transport") {
  Rng rng(29ull);
  GroupPtr so3 = make_so(3);
  AlgebraLinearMap xi = random_algebra_map(so3, rng, 2, 1.0);
  Eigen::MatrixXd b(2, 2);
  b << 1.0, 2.0, -0.5, 0.3;
  Eigen::Vector2d v(0.7, -1.1);
  CHECK(mdiff(xi.precompose(b).apply(v), xi.apply(b * v)) <= 1e-14);
  GroupElement g = random_element(so3, rng, 0.8);
  CHECK(mdiff(adjoint(g, xi).apply(v), adjoint(g, AlgebraElement{so3, xi.apply(v)}).mat) <= 1e-13);
}
