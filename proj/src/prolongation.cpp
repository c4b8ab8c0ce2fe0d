#include "gjet/prolongation.hpp"

namespace gjet {

JetGroupElement jetgroup_identity(const GroupPtr& group, int n) {
  return {Eigen::MatrixXd::Identity(n, n), GroupElement::identity(group),
          AlgebraLinearMap(group, n)};
}

JetGroupElement jetgroup_mul(const JetGroupElement& u, const JetGroupElement& v) {
  require_same_group(u.g0.group, v.g0.group);
  if (u.a0.rows() != v.a0.rows()) throw DimensionMismatch("jet group frame sizes");
  JetGroupElement r;
  r.a0 = u.a0 * v.a0;
  r.g0 = mul(u.g0, v.g0);
  r.xi0 = u.xi0 + adjoint(u.g0, v.xi0).precompose(checked_inverse(u.a0, "jet group frame"));
  return r;
}

JetGroupElement jetgroup_inv(const JetGroupElement& u) {
  JetGroupElement r;
  r.a0 = checked_inverse(u.a0, "jet group frame");
  r.g0 = inv(u.g0);
  r.xi0 = -1.0 * adjoint(r.g0, u.xi0.precompose(u.a0));
  return r;
}

ProlongedPoint flat_prolonged_point(const GroupPtr& group, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  return {x, Eigen::MatrixXd::Identity(n, n), GroupElement::identity(group),
          AlgebraLinearMap(group, n)};
}

ProlongedPoint right_action_p1(const ProlongedPoint& pp, const JetGroupElement& u) {
  require_same_group(pp.g.group, u.g0.group);
  ProlongedPoint r;
  r.x = pp.x;
  r.frame = pp.frame * u.a0;
  r.g = mul(pp.g, u.g0);
  AlgebraLinearMap shifted =
      pp.xi + u.xi0.precompose(checked_inverse(pp.frame, "prolonged frame"));
  r.xi = adjoint(inv(u.g0), shifted);
  return r;
}

ProlongedGaugeGroupoidElement canonicalize_pair(const ProlongedPoint& pp2,
                                                const ProlongedPoint& pp1) {
  JetGroupElement norm;
  norm.a0 = checked_inverse(pp1.frame, "source frame");
  norm.g0 = inv(pp1.g);
  norm.xi0 = -1.0 * pp1.xi.precompose(pp1.frame);
  ProlongedGaugeGroupoidElement c;
  c.target = right_action_p1(pp2, norm);
  c.x_src = pp1.x;
  return c;
}

ProlongedGaugeGroupoidElement compose_prolonged(const ProlongedGaugeGroupoidElement& c2,
                                                const ProlongedGaugeGroupoidElement& c1) {
  if ((c2.x_src - c1.target.x).cwiseAbs().maxCoeff() > kBaseMatchTol)
    throw ComposabilityError("compose_prolonged: classes are not composable");
  // jet-group coordinate of the right factor's target in the trivialization
  JetGroupElement u;
  u.a0 = c1.target.frame;
  u.g0 = c1.target.g;
  u.xi0 = adjoint(c1.target.g, c1.target.xi);
  ProlongedGaugeGroupoidElement out;
  out.target = right_action_p1(c2.target, u);
  out.x_src = c1.x_src;
  return out;
}

double prolonged_residual(const ProlongedGaugeGroupoidElement& a,
                          const ProlongedGaugeGroupoidElement& b) {
  double r = (a.x_src - b.x_src).cwiseAbs().maxCoeff();
  r = std::max(r, (a.target.x - b.target.x).cwiseAbs().maxCoeff());
  r = std::max(r, max_abs_diff(a.target.frame, b.target.frame));
  r = std::max(r, max_abs_diff(a.target.g.mat, b.target.g.mat));
  for (int j = 0; j < a.target.xi.n(); ++j)
    r = std::max(r, max_abs_diff(a.target.xi.cols[static_cast<size_t>(j)],
                                 b.target.xi.cols[static_cast<size_t>(j)]));
  return r;
}

TangentFiberValue act_tangent_fiber(const JetGroupElement& u, const TangentFiberValue& w,
                                    const FiberSpace& fiber) {
  if (w.v.size() != u.a0.rows()) throw DimensionMismatch("tangent fiber base part");
  TangentFiberValue r;
  r.v = u.a0 * w.v;
  r.q = fiber.act_value(u.g0.mat, w.q);
  AlgebraElement xv{u.xi0.group, u.xi0.apply(r.v)};
  r.vq = fiber.d_act_fiber(u.g0.mat, w.q) * w.vq - fundamental_vf_q(fiber, xv, r.q);
  return r;
}

JetFiberValue act_jet_fiber(const JetGroupElement& u, const JetFiberValue& w,
                            const FiberSpace& fiber) {
  JetFiberValue r;
  r.q = fiber.act_value(u.g0.mat, w.q);
  r.u = fiber.d_act_fiber(u.g0.mat, w.q) * w.u *
            checked_inverse(u.a0, "jet group frame") -
        fundamental_vf_q_map(fiber, u.xi0, r.q);
  return r;
}

JetFiberValue act_linjet_fiber(const JetGroupElement& u, const JetFiberValue& w,
                               const FiberSpace& fiber) {
  JetFiberValue r;
  r.q = fiber.act_value(u.g0.mat, w.q);
  r.u = fiber.d_act_fiber(u.g0.mat, w.q) * w.u *
        checked_inverse(u.a0, "jet group frame");
  return r;
}

AlgebraLinearMap act_cp_fiber(const JetGroupElement& u, const AlgebraLinearMap& a0) {
  return adjoint(u.g0, a0).precompose(checked_inverse(u.a0, "jet group frame")) + u.xi0;
}

namespace {

// tangent pushforward through rho_Q along (group tangent g·xi_dir, fiber vq)
Eigen::VectorXd push_mixed_tangent(const FiberSpace& fiber, const GroupElement& g,
                                   const Eigen::MatrixXd& body_dir,
                                   const Eigen::VectorXd& q, const Eigen::VectorXd& vq) {
  const int m = g.group->size();
  TaylorMatrix arg(m, m, 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) arg(i, j).grad(0) = body_dir(i, j);
  TaylorMatrix gfield = TaylorMatrix::constant(g.mat, 1) * expm(arg);
  TaylorVector qfield;
  for (int a = 0; a < q.size(); ++a) {
    TaylorScalar s(q(a), 1);
    s.grad(0) = vq(a);
    qfield.push_back(s);
  }
  TaylorVector out = fiber.act(gfield, qfield);
  Eigen::VectorXd d(out.size());
  for (size_t a = 0; a < out.size(); ++a) d(static_cast<int>(a)) = out[a].grad(0);
  return d;
}

}  // namespace

AssociatedTangent iso_tangent(const ProlongedPoint& pp, const TangentFiberValue& w,
                              const FiberSpace& fiber) {
  AssociatedTangent r;
  r.at = rho_q(fiber, {pp.x, pp.g}, w.q);
  r.dx = pp.frame * w.v;
  r.dq = push_mixed_tangent(fiber, pp.g, pp.xi.apply(r.dx), w.q, w.vq);
  return r;
}

JetOfSection iso_jet(const ProlongedPoint& pp, const JetFiberValue& w,
                     const FiberSpace& fiber) {
  const int n = static_cast<int>(pp.x.size());
  Eigen::MatrixXd frame_inv = checked_inverse(pp.frame, "prolonged frame");
  JetOfSection r;
  r.x = pp.x;
  AssociatedPoint at = rho_q(fiber, {pp.x, pp.g}, w.q);
  r.value = at.qhat;
  r.slope.resize(fiber.chart_dim(), n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd ej = Eigen::VectorXd::Unit(n, j);
    r.slope.col(j) = push_mixed_tangent(fiber, pp.g, pp.xi.apply(ej), w.q,
                                        w.u * (frame_inv * ej));
  }
  return r;
}

VerticalOneForm iso_linjet(const ProlongedPoint& pp, const JetFiberValue& w,
                           const FiberSpace& fiber) {
  VerticalOneForm r;
  r.at = rho_q(fiber, {pp.x, pp.g}, w.q);
  r.coeff = fiber.d_act_fiber(pp.g.mat, w.q) * w.u *
            checked_inverse(pp.frame, "prolonged frame");
  return r;
}

AlgebraLinearMap iso_cp(const ProlongedPoint& pp, const AlgebraLinearMap& a0) {
  require_same_group(pp.g.group, a0.group);
  AlgebraLinearMap body =
      pp.xi + a0.precompose(checked_inverse(pp.frame, "prolonged frame"));
  return -1.0 * adjoint(pp.g, body);
}

JetGroupoidElement jggg_map(const ProlongedPoint& pp2, const ProlongedPoint& pp1) {
  require_same_group(pp2.g.group, pp1.g.group);
  JetGroupoidElement r;
  r.x_src = pp1.x;
  r.x_tgt = pp2.x;
  r.h = mul(pp2.g, inv(pp1.g));
  r.frame = pp2.frame * checked_inverse(pp1.frame, "prolonged frame");
  r.xi = adjoint(pp1.g, pp2.xi.precompose(r.frame) - pp1.xi);
  return r;
}

ProlongedGaugeGroupoidElement jggg_inverse(const JetGroupoidElement& ug) {
  ProlongedGaugeGroupoidElement c;
  c.x_src = ug.x_src;
  c.target.x = ug.x_tgt;
  c.target.frame = ug.frame;
  c.target.g = ug.h;
  c.target.xi = ug.xi.precompose(checked_inverse(ug.frame, "jet frame"));
  return c;
}

JetGroupoidElement jggg_map(const ProlongedGaugeGroupoidElement& c) {
  return jggg_map(c.target, flat_prolonged_point(c.target.g.group, c.x_src));
}

}  // namespace gjet
