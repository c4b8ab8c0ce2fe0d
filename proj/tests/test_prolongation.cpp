#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gjet/prolongation.hpp"

using namespace gjet;

namespace {

double mdiff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double jet_elem_diff(const JetGroupoidElement& a, const JetGroupoidElement& b) {
  double r = (a.x_src - b.x_src).cwiseAbs().maxCoeff();
  r = std::max(r, (a.x_tgt - b.x_tgt).cwiseAbs().maxCoeff());
  r = std::max(r, mdiff(a.h.mat, b.h.mat));
  r = std::max(r, mdiff(a.frame, b.frame));
  for (int j = 0; j < a.xi.n(); ++j)
    r = std::max(r, mdiff(a.xi.cols[static_cast<size_t>(j)], b.xi.cols[static_cast<size_t>(j)]));
  return r;
}

JetGroupElement random_jetgroup(Rng& rng, const GroupPtr& g, int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) += 0.4 * rng.uniform(-1.0, 1.0);
  return {a, random_element(g, rng, 0.9), random_algebra_map(g, rng, n, 0.7)};
}

ProlongedPoint random_prolonged(Rng& rng, const GroupPtr& g, int n) {
  ProlongedPoint pp;
  pp.x = rng.uniform_vec(n, -0.7, 0.7);
  pp.frame = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pp.frame(i, j) += 0.4 * rng.uniform(-1.0, 1.0);
  pp.g = random_element(g, rng, 0.9);
  pp.xi = random_algebra_map(g, rng, n, 0.7);
  return pp;
}

JetGroupoidElement random_jet_element(Rng& rng, const GroupPtr& group, int n) {
  JetGroupoidElement u;
  u.x_src = rng.uniform_vec(n, -0.7, 0.7);
  u.x_tgt = rng.uniform_vec(n, -0.7, 0.7);
  u.h = random_element(group, rng, 0.9);
  u.frame = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u.frame(i, j) += 0.35 * rng.uniform(-1.0, 1.0);
  u.xi = random_algebra_map(group, rng, n, 0.6);
  return u;
}

}  // namespace

TEST_CASE("jet group closed form on the circle group") {
  GroupPtr u1 = make_u1();
  Eigen::MatrixXd x = u1->basis()[0];
  auto angle = [&](double a) { return group_exp(AlgebraElement{u1, a * x}); };

  JetGroupElement u{Eigen::MatrixXd::Constant(1, 1, 2.0), angle(0.4),
                    AlgebraLinearMap(u1, 1)};
  u.xi0.cols[0] = 5.0 * x;
  JetGroupElement v{Eigen::MatrixXd::Constant(1, 1, 3.0), angle(-0.9),
                    AlgebraLinearMap(u1, 1)};
  v.xi0.cols[0] = 7.0 * x;

  JetGroupElement w = jetgroup_mul(u, v);
  CHECK(w.a0(0, 0) == doctest::Approx(6.0));
  CHECK(mdiff(w.g0.mat, angle(-0.5).mat) <= 1e-14);
  // abelian adjoint is trivial: 5 + 7/2
  CHECK(mdiff(w.xi0.cols[0], 8.5 * x) <= 1e-13);
}

TEST_CASE("jet group axioms") {
  Rng rng(61ull);
  for (const auto& g : {make_u1(), make_so(3), make_su2()}) {
    const int n = 2;
    JetGroupElement ident = jetgroup_identity(g, n);
    for (int rep = 0; rep < 60; ++rep) {
      JetGroupElement a = random_jetgroup(rng, g, n);
      JetGroupElement b = random_jetgroup(rng, g, n);
      JetGroupElement c = random_jetgroup(rng, g, n);
      JetGroupElement lhs = jetgroup_mul(jetgroup_mul(a, b), c);
      JetGroupElement rhs = jetgroup_mul(a, jetgroup_mul(b, c));
      CHECK(mdiff(lhs.a0, rhs.a0) <= 1e-12);
      CHECK(mdiff(lhs.g0.mat, rhs.g0.mat) <= 1e-12);
      CHECK((lhs.xi0 - rhs.xi0).norm() <= 1e-12);

      JetGroupElement li = jetgroup_mul(ident, a);
      CHECK(mdiff(li.a0, a.a0) <= 1e-14);
      CHECK((li.xi0 - a.xi0).norm() <= 1e-14);

      JetGroupElement ii = jetgroup_mul(a, jetgroup_inv(a));
      CHECK(mdiff(ii.a0, ident.a0) <= 1e-12);
      CHECK(mdiff(ii.g0.mat, ident.g0.mat) <= 1e-12);
      CHECK(ii.xi0.norm() <= 1e-12);
    }
  }
}

TEST_CASE("right action on the jet prolongation") {
  Rng rng(67ull);
  GroupPtr so3 = make_so(3);
  const int n = 2;
  for (int rep = 0; rep < 60; ++rep) {
    ProlongedPoint pp = random_prolonged(rng, so3, n);
    JetGroupElement u = random_jetgroup(rng, so3, n);
    JetGroupElement v = random_jetgroup(rng, so3, n);

    // identity fixes the point
    ProlongedPoint same = right_action_p1(pp, jetgroup_identity(so3, n));
    CHECK(mdiff(same.frame, pp.frame) <= 1e-14);
    CHECK(mdiff(same.g.mat, pp.g.mat) <= 1e-14);
    CHECK((same.xi - pp.xi).norm() <= 1e-14);

    // frame slot multiplies exactly
    CHECK(mdiff(right_action_p1(pp, u).frame, pp.frame * u.a0) <= 1e-14);

    // right action axiom
    ProlongedPoint lhs = right_action_p1(right_action_p1(pp, u), v);
    ProlongedPoint rhs = right_action_p1(pp, jetgroup_mul(u, v));
    CHECK(mdiff(lhs.frame, rhs.frame) <= 1e-11);
    CHECK(mdiff(lhs.g.mat, rhs.g.mat) <= 1e-11);
    CHECK((lhs.xi - rhs.xi).norm() <= 1e-11);
  }
}

TEST_CASE("the four fiber actions") {
  Rng rng(71ull);
  GroupPtr so3 = make_so(3);
  FiberSpace lin = FiberSpace::linear_rep(so3);
  const int n = 2;
  JetGroupElement ident = jetgroup_identity(so3, n);

  for (int rep = 0; rep < 50; ++rep) {
    JetGroupElement u = random_jetgroup(rng, so3, n);
    JetGroupElement v = random_jetgroup(rng, so3, n);
    JetGroupElement uv = jetgroup_mul(u, v);

    // connection fiber: translation by the nilpotent part at the identity
    AlgebraLinearMap a0 = random_algebra_map(so3, rng, n, 0.8);
    JetGroupElement shear = ident;
    shear.xi0 = random_algebra_map(so3, rng, n, 0.8);
    CHECK((act_cp_fiber(shear, a0) - (a0 + shear.xi0)).norm() <= 1e-14);
    CHECK((act_cp_fiber(u, act_cp_fiber(v, a0)) - act_cp_fiber(uv, a0)).norm() <= 1e-11);

    // jet fiber with trivial slope part reduces to the linear sandwich
    JetFiberValue jv{rng.uniform_vec(3, -1.0, 1.0), Eigen::MatrixXd::Random(3, n)};
    JetGroupElement pure = u;
    pure.xi0 = AlgebraLinearMap(so3, n);
    JetFiberValue sandwich = act_jet_fiber(pure, jv, lin);
    CHECK(mdiff(sandwich.u, pure.g0.mat * jv.u * pure.a0.inverse()) <= 1e-12);

    // action axioms for the tangent, jet and linearized-jet fibers
    TangentFiberValue tv{rng.uniform_vec(n, -1.0, 1.0), rng.uniform_vec(3, -1.0, 1.0),
                         rng.uniform_vec(3, -1.0, 1.0)};
    TangentFiberValue t1 = act_tangent_fiber(u, act_tangent_fiber(v, tv, lin), lin);
    TangentFiberValue t2 = act_tangent_fiber(uv, tv, lin);
    CHECK((t1.v - t2.v).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK((t1.q - t2.q).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK((t1.vq - t2.vq).cwiseAbs().maxCoeff() <= 1e-11);

    JetFiberValue j1 = act_jet_fiber(u, act_jet_fiber(v, jv, lin), lin);
    JetFiberValue j2 = act_jet_fiber(uv, jv, lin);
    CHECK((j1.q - j2.q).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK(mdiff(j1.u, j2.u) <= 1e-11);

    JetFiberValue l1 = act_linjet_fiber(u, act_linjet_fiber(v, jv, lin), lin);
    JetFiberValue l2 = act_linjet_fiber(uv, jv, lin);
    CHECK(mdiff(l1.u, l2.u) <= 1e-11);
  }
}

TEST_CASE("quotient isomorphisms") {
  Rng rng(73ull);
  GroupPtr so3 = make_so(3);
  FiberSpace lin = FiberSpace::linear_rep(so3);
  const int n = 2;

  // flat data maps to the flat connection value
  Eigen::Vector2d x(0.2, -0.2);
  CHECK(iso_cp(flat_prolonged_point(so3, x), AlgebraLinearMap(so3, n)).norm() == 0.0);

  for (int rep = 0; rep < 60; ++rep) {
    ProlongedPoint pp = random_prolonged(rng, so3, n);
    JetGroupElement u = random_jetgroup(rng, so3, n);
    JetGroupElement uinv = jetgroup_inv(u);

    // structure-group invariance of each quotient map
    AlgebraLinearMap a0 = random_algebra_map(so3, rng, n, 0.8);
    CHECK((iso_cp(right_action_p1(pp, u), act_cp_fiber(uinv, a0)) - iso_cp(pp, a0)).norm() <= 1e-11);

    TangentFiberValue tv{rng.uniform_vec(n, -1.0, 1.0), rng.uniform_vec(3, -1.0, 1.0),
                         rng.uniform_vec(3, -1.0, 1.0)};
    AssociatedTangent ta = iso_tangent(right_action_p1(pp, u),
                                       act_tangent_fiber(uinv, tv, lin), lin);
    AssociatedTangent tb = iso_tangent(pp, tv, lin);
    CHECK((ta.at.qhat - tb.at.qhat).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK((ta.dx - tb.dx).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK((ta.dq - tb.dq).cwiseAbs().maxCoeff() <= 1e-11);

    JetFiberValue jv{rng.uniform_vec(3, -1.0, 1.0), Eigen::MatrixXd::Random(3, n)};
    JetOfSection ja = iso_jet(right_action_p1(pp, u), act_jet_fiber(uinv, jv, lin), lin);
    JetOfSection jb = iso_jet(pp, jv, lin);
    CHECK((ja.value - jb.value).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK(mdiff(ja.slope, jb.slope) <= 1e-11);

    VerticalOneForm fa = iso_linjet(right_action_p1(pp, u),
                                    act_linjet_fiber(uinv, jv, lin), lin);
    VerticalOneForm fb = iso_linjet(pp, jv, lin);
    CHECK(mdiff(fa.coeff, fb.coeff) <= 1e-11);
  }

  // constructive preimage through the jet isomorphism
  for (int rep = 0; rep < 40; ++rep) {
    Eigen::VectorXd xx = rng.uniform_vec(n, -0.7, 0.7);
    JetOfSection target{xx, rng.uniform_vec(3, -1.0, 1.0), Eigen::MatrixXd::Random(3, n)};
    JetOfSection hit = iso_jet(flat_prolonged_point(so3, xx),
                               JetFiberValue{target.value, target.slope}, lin);
    CHECK((hit.value - target.value).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(mdiff(hit.slope, target.slope) <= 1e-10);
  }
}

TEST_CASE("jet groupoids of gauge groupoids are gauge groupoids") {
  Rng rng(79ull);
  GroupPtr so3 = make_so(3);
  const int n = 2;

  // equal prolonged points map to the unit jet
  ProlongedPoint pp = random_prolonged(rng, so3, n);
  CHECK(jet_elem_diff(jggg_map(pp, pp), unit_jet(so3, pp.x)) <= 1e-12);

  for (int rep = 0; rep < 60; ++rep) {
    ProlongedPoint p1 = random_prolonged(rng, so3, n);
    ProlongedPoint p2 = random_prolonged(rng, so3, n);
    ProlongedPoint p3 = random_prolonged(rng, so3, n);
    JetGroupElement u = random_jetgroup(rng, so3, n);

    // invariance under the diagonal structure-group action
    CHECK(jet_elem_diff(jggg_map(right_action_p1(p2, u), right_action_p1(p1, u)),
                        jggg_map(p2, p1)) <= 1e-11);

    // groupoid morphism on composable representative pairs
    CHECK(jet_elem_diff(compose_jets(jggg_map(p3, p2), jggg_map(p2, p1)),
                        jggg_map(p3, p1)) <= 1e-10);

    // canonicalized classes map consistently
    CHECK(jet_elem_diff(jggg_map(canonicalize_pair(p2, p1)), jggg_map(p2, p1)) <= 1e-11);
  }
}

TEST_CASE("constructive inverse of the identification") {
  Rng rng(83ull);
  GroupPtr so3 = make_so(3);
  const int n = 2;

  // unit goes to the unit class
  Eigen::VectorXd x = rng.uniform_vec(n, -0.5, 0.5);
  ProlongedGaugeGroupoidElement unit_class = jggg_inverse(unit_jet(so3, x));
  CHECK(mdiff(unit_class.target.frame, Eigen::MatrixXd::Identity(n, n)) == 0.0);
  CHECK(mdiff(unit_class.target.g.mat, Eigen::MatrixXd::Identity(3, 3)) == 0.0);
  CHECK(unit_class.target.xi.norm() == 0.0);

  for (int rep = 0; rep < 500; ++rep) {
    JetGroupoidElement ug = random_jet_element(rng, so3, n);
    CHECK(jet_elem_diff(jggg_map(jggg_inverse(ug)), ug) <= 1e-12);
  }

  // the section is itself a groupoid morphism on composable pairs
  for (int rep = 0; rep < 60; ++rep) {
    JetGroupoidElement a = random_jet_element(rng, so3, n);
    JetGroupoidElement b = random_jet_element(rng, so3, n);
    b.x_tgt = a.x_src;
    ProlongedGaugeGroupoidElement lhs =
        compose_prolonged(jggg_inverse(a), jggg_inverse(b));
    ProlongedGaugeGroupoidElement rhs = jggg_inverse(compose_jets(a, b));
    CHECK(prolonged_residual(lhs, rhs) <= 1e-10);
  }
}
