#include "gjet/bundles.hpp"

namespace gjet {

BaseChart::BaseChart(Eigen::VectorXd l, Eigen::VectorXd h)
    : lo(std::move(l)), hi(std::move(h)) {
  if (lo.size() != hi.size() || lo.size() == 0 || ((hi - lo).array() <= 0).any())
    throw ConfigError("chart bounds empty or inverted");
}

BaseChart BaseChart::centered_box(int n, double half_width) {
  return BaseChart(Eigen::VectorXd::Constant(n, -half_width),
                   Eigen::VectorXd::Constant(n, half_width));
}

bool BaseChart::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lo.size()) return false;
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

FiberSpace::FiberSpace(FiberKind kind, GroupPtr group, int k, ActProgram program)
    : kind_(kind), group_(std::move(group)), k_(k), program_(std::move(program)) {}

FiberSpace FiberSpace::linear_rep(GroupPtr group) {
  const int m = group->size();
  auto program = [](const TaylorMatrix& g, const TaylorVector& q) {
    return g * q;
  };
  return FiberSpace(FiberKind::Linear, std::move(group), m, program);
}

FiberSpace FiberSpace::adjoint_rep(GroupPtr group) {
  const int d = group->algebra_dim();
  GroupPtr gp = group;
  auto program = [gp](const TaylorMatrix& g, const TaylorVector& q) {
    TaylorMatrix x = gp->algebra_from_coords(q);
    return gp->algebra_coords(g * x * inverse(g));
  };
  return FiberSpace(FiberKind::Adjoint, std::move(group), d, program);
}

FiberSpace FiberSpace::conjugation(GroupPtr group) {
  const int m = group->size();
  auto program = [m](const TaylorMatrix& g, const TaylorVector& q) {
    TaylorMatrix x = tmat_of_tvec(q, m, m);
    return tvec_of_tmat(g * x * inverse(g));
  };
  return FiberSpace(FiberKind::Conjugation, std::move(group), m * m, program);
}

FiberSpace FiberSpace::left_translation(GroupPtr group) {
  const int m = group->size();
  auto program = [m](const TaylorMatrix& g, const TaylorVector& q) {
    return tvec_of_tmat(g * tmat_of_tvec(q, m, m));
  };
  return FiberSpace(FiberKind::LeftTranslation, std::move(group), m * m, program);
}

FiberSpace FiberSpace::callback(GroupPtr group, int chart_dim, ActProgram program) {
  return FiberSpace(FiberKind::Callback, std::move(group), chart_dim,
                    std::move(program));
}

FiberSpace FiberSpace::by_name(const std::string& name, GroupPtr group) {
  if (name == "linear") return linear_rep(std::move(group));
  if (name == "adjoint") return adjoint_rep(std::move(group));
  if (name == "conjugation") return conjugation(std::move(group));
  if (name == "callback") {
    // config files cannot carry programs; the named callback is the linear
    // representation routed through the generic program interface
    const int m = group->size();
    return callback(std::move(group), m,
                    [](const TaylorMatrix& g, const TaylorVector& q) { return g * q; });
  }
  throw ConfigError("unknown fiber kind '" + name + "'");
}

TaylorVector FiberSpace::act(const TaylorMatrix& g, const TaylorVector& q) const {
  if (static_cast<int>(q.size()) != k_)
    throw FiberMismatch("fiber value has wrong chart dimension");
  if (g.rows() != group_->size() || g.cols() != group_->size())
    throw DimensionMismatch("fiber action group argument size");
  return program_(g, q);
}

Eigen::VectorXd FiberSpace::act_value(const Eigen::MatrixXd& g,
                                      const Eigen::VectorXd& q) const {
  TaylorVector tq;
  tq.reserve(static_cast<size_t>(q.size()));
  for (int i = 0; i < q.size(); ++i) tq.push_back(TaylorScalar(q(i), 0));
  TaylorVector out = act(TaylorMatrix::constant(g, 0), tq);
  Eigen::VectorXd v(out.size());
  for (size_t i = 0; i < out.size(); ++i) v(static_cast<int>(i)) = out[i].value;
  return v;
}

Eigen::MatrixXd FiberSpace::d_act_fiber(const Eigen::MatrixXd& g,
                                        const Eigen::VectorXd& q) const {
  TaylorVector tq = seed_coordinates(q);
  TaylorVector out = act(TaylorMatrix::constant(g, k_), tq);
  Eigen::MatrixXd d(k_, k_);
  for (int i = 0; i < k_; ++i) d.row(i) = out[static_cast<size_t>(i)].grad.transpose();
  return d;
}

VerticalVector VerticalVector::at_principal(PrincipalPoint p, Eigen::MatrixXd body_coord) {
  VerticalVector v;
  v.principal = true;
  v.at_p = std::move(p);
  v.body = std::move(body_coord);
  return v;
}

VerticalVector VerticalVector::at_associated(AssociatedPoint e, Eigen::VectorXd tangent) {
  VerticalVector v;
  v.principal = false;
  v.at_e = std::move(e);
  v.fiber_tangent = std::move(tangent);
  return v;
}

AssociatedPoint rho_q(const FiberSpace& fiber, const PrincipalPoint& p,
                      const Eigen::VectorXd& q) {
  require_same_group(fiber.group(), p.g.group);
  return {p.x, fiber.act_value(p.g.mat, q)};
}

PrincipalPoint right_action(const PrincipalPoint& p, const GroupElement& g0) {
  return {p.x, mul(p.g, g0)};
}

GroupElement delta_p(const PrincipalPoint& p, const PrincipalPoint& p2, double tol) {
  require_same_group(p.g.group, p2.g.group);
  if (p.x.size() != p2.x.size() || (p.x - p2.x).cwiseAbs().maxCoeff() > tol)
    throw FiberMismatch("delta_p arguments sit over different base points");
  return mul(inv(p.g), p2.g);
}

VerticalVector fundamental_vf_p(const AlgebraElement& x0, const PrincipalPoint& p) {
  require_same_group(x0.group, p.g.group);
  // d/dt (x, g exp(tX0))|0 = (0, g X0): body-frame coordinate is X0 itself
  return VerticalVector::at_principal(p, x0.mat);
}

Eigen::VectorXd fundamental_vf_q(const FiberSpace& fiber, const AlgebraElement& x0,
                                 const Eigen::VectorXd& q) {
  require_same_group(fiber.group(), x0.group);
  const int m = fiber.group()->size();
  // one-variable flow t -> act(exp(-t X0), q), derivative at 0
  TaylorMatrix arg(m, m, 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) arg(i, j).grad(0) = -x0.mat(i, j);
  TaylorMatrix g = expm(arg);
  TaylorVector tq;
  tq.reserve(static_cast<size_t>(q.size()));
  for (int i = 0; i < q.size(); ++i) tq.push_back(TaylorScalar(q(i), 1));
  TaylorVector out = fiber.act(g, tq);
  Eigen::VectorXd d(out.size());
  for (size_t i = 0; i < out.size(); ++i) d(static_cast<int>(i)) = out[i].grad(0);
  return d;
}

Eigen::MatrixXd fundamental_vf_q_map(const FiberSpace& fiber,
                                     const AlgebraLinearMap& xi,
                                     const Eigen::VectorXd& q) {
  require_same_group(fiber.group(), xi.group);
  Eigen::MatrixXd out(fiber.chart_dim(), xi.n());
  for (int j = 0; j < xi.n(); ++j)
    out.col(j) = fundamental_vf_q(
        fiber, AlgebraElement{xi.group, xi.cols[static_cast<size_t>(j)]}, q);
  return out;
}

}  // namespace gjet
