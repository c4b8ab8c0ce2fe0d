#include "gjet/groupoids.hpp"

#include <cmath>

namespace gjet {

namespace {

void require_base_match(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                        const char* what) {
  if (a.size() != b.size() || (a - b).cwiseAbs().maxCoeff() > kBaseMatchTol)
    throw ComposabilityError(std::string(what) + ": base points do not match");
}

}  // namespace

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

GaugeGroupoidElement unit_element(const GroupPtr& group, const Eigen::VectorXd& x) {
  return {x, GroupElement::identity(group), x};
}

GaugeGroupoidElement compose(const GaugeGroupoidElement& g2,
                             const GaugeGroupoidElement& g1) {
  require_base_match(g2.x_src, g1.x_tgt, "compose");
  return {g2.x_tgt, mul(g2.h, g1.h), g1.x_src};
}

GaugeGroupoidElement invert(const GaugeGroupoidElement& g) {
  return {g.x_src, inv(g.h), g.x_tgt};
}

PrincipalPoint act_on_principal(const GaugeGroupoidElement& g, const PrincipalPoint& p) {
  require_base_match(g.x_src, p.x, "act_on_principal");
  return {g.x_tgt, mul(g.h, p.g)};
}

AssociatedPoint act_on_associated(const GaugeGroupoidElement& g,
                                  const AssociatedPoint& e, const FiberSpace& fiber) {
  require_base_match(g.x_src, e.x, "act_on_associated");
  return {g.x_tgt, fiber.act_value(g.h.mat, e.qhat)};
}

GaugeGroupoidElement isotropy_embed(const PrincipalPoint& p, const GroupElement& g0) {
  require_same_group(p.g.group, g0.group);
  // class of [p·g0, p], normalized: left factor becomes (x, g g0 g^{-1})
  return {p.x, mul(mul(p.g, g0), inv(p.g)), p.x};
}

VerticalVector act_on_vertical(const GaugeGroupoidElement& g, const VerticalVector& v,
                               const FiberSpace* fiber) {
  if (v.principal) {
    // left translation commutes with the right flow, body coordinate survives
    return VerticalVector::at_principal(act_on_principal(g, v.at_p), v.body);
  }
  if (fiber == nullptr)
    throw FiberMismatch("associated vertical transport needs its fiber space");
  AssociatedPoint moved = act_on_associated(g, v.at_e, *fiber);
  Eigen::MatrixXd d = fiber->d_act_fiber(g.h.mat, v.at_e.qhat);
  return VerticalVector::at_associated(moved, d * v.fiber_tangent);
}

Eigen::VectorXd VecBilinear::apply(const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(k);
  for (int a = 0; a < k; ++a) out(a) = u.transpose() * comp[static_cast<size_t>(a)] * v;
  return out;
}

VecBilinear VecBilinear::transpose_args() const {
  VecBilinear out(k, n);
  for (int a = 0; a < k; ++a)
    out.comp[static_cast<size_t>(a)] = comp[static_cast<size_t>(a)].transpose();
  return out;
}

VecBilinear VecBilinear::sym() const { return 0.5 * (*this + transpose_args()); }
VecBilinear VecBilinear::antisym() const { return 0.5 * (*this - transpose_args()); }

double VecBilinear::norm() const {
  double r = 0.0;
  for (const auto& m : comp) r = std::max(r, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  return r;
}

double VecBilinear::asymmetry() const {
  double r = 0.0;
  for (const auto& m : comp)
    r = std::max(r, m.size() ? (m - m.transpose()).cwiseAbs().maxCoeff() : 0.0);
  return r;
}

VecBilinear operator+(const VecBilinear& a, const VecBilinear& b) {
  if (a.k != b.k || a.n != b.n) throw DimensionMismatch("bilinear add");
  VecBilinear out = a;
  for (size_t i = 0; i < out.comp.size(); ++i) out.comp[i] += b.comp[i];
  return out;
}

VecBilinear operator-(const VecBilinear& a, const VecBilinear& b) {
  return a + (-1.0 * b);
}

VecBilinear operator*(double s, const VecBilinear& a) {
  VecBilinear out = a;
  for (auto& m : out.comp) m *= s;
  return out;
}

bool SecondJetOfSection::semiholonomous(double tol) const {
  return max_abs_diff(slope2, first.slope) <= tol;
}

bool SecondJetOfSection::curl_symmetric(double tol) const {
  return curl.asymmetry() <= tol;
}

JetGroupoidElement unit_jet(const GroupPtr& group, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  return {x, x, GroupElement::identity(group),
          Eigen::MatrixXd::Identity(n, n), AlgebraLinearMap(group, n)};
}

JetGroupoidElement compose_jets(const JetGroupoidElement& u2,
                                const JetGroupoidElement& u1) {
  require_base_match(u2.x_src, u1.x_tgt, "compose_jets");
  require_same_group(u2.h.group, u1.h.group);
  JetGroupoidElement r;
  r.x_src = u1.x_src;
  r.x_tgt = u2.x_tgt;
  r.h = mul(u2.h, u1.h);
  r.frame = u2.frame * u1.frame;
  r.xi = adjoint(inv(u1.h), u2.xi.precompose(u1.frame)) + u1.xi;
  return r;
}

JetGroupoidElement invert_jet(const JetGroupoidElement& u) {
  JetGroupoidElement r;
  r.x_src = u.x_tgt;
  r.x_tgt = u.x_src;
  r.h = inv(u.h);
  r.frame = checked_inverse(u.frame, "jet frame");
  r.xi = -1.0 * adjoint(u.h, u.xi.precompose(r.frame));
  return r;
}

SecondJetGroupoidElement unit_jet2(const GroupPtr& group, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  SecondJetGroupoidElement r;
  r.first = unit_jet(group, x);
  r.frame2 = VecBilinear(n, n);
  r.xi2 = AlgebraBilinearMap(group, n);
  r.semiholonomous = true;
  r.holonomous = true;
  return r;
}

namespace {

struct BisectionJets {
  MapJet2 psi;
  Eigen::MatrixXd h;
  std::vector<Eigen::MatrixXd> dh;              // ambient first derivatives
  std::vector<std::vector<Eigen::MatrixXd>> d2h;  // ambient second derivatives
};

BisectionJets eval_bisection(const Bisection& b, const Eigen::VectorXd& x,
                             double eps_det) {
  BisectionJets out;
  out.psi = extract_jet2(b.psi, x);
  if (std::abs(out.psi.jac.determinant()) < eps_det)
    throw DegenerateBisection("base map differential below determinant floor");
  TaylorMatrix h = b.hmap(seed_coordinates(x));
  const int n = static_cast<int>(x.size());
  out.h = h.value();
  out.dh.resize(static_cast<size_t>(n));
  out.d2h.assign(static_cast<size_t>(n), std::vector<Eigen::MatrixXd>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i) {
    out.dh[static_cast<size_t>(i)] = h.deriv(i);
    for (int j = 0; j < n; ++j) out.d2h[static_cast<size_t>(i)][static_cast<size_t>(j)] = h.deriv2(i, j);
  }
  return out;
}

}  // namespace

JetGroupoidElement jet_of_bisection(const Bisection& b, const Eigen::VectorXd& x,
                                    double eps_det) {
  BisectionJets ev = eval_bisection(b, x, eps_det);
  const int n = static_cast<int>(x.size());
  JetGroupoidElement r;
  r.x_src = x;
  r.x_tgt = ev.psi.value;
  r.h = GroupElement(b.group, ev.h);
  r.frame = ev.psi.jac;
  r.xi = AlgebraLinearMap(b.group, n);
  Eigen::MatrixXd hinv = ev.h.inverse();
  for (int i = 0; i < n; ++i) r.xi.cols[static_cast<size_t>(i)] = hinv * ev.dh[static_cast<size_t>(i)];
  return r;
}

SecondJetGroupoidElement jet2_of_bisection(const Bisection& b,
                                           const Eigen::VectorXd& x,
                                           double eps_det) {
  BisectionJets ev = eval_bisection(b, x, eps_det);
  const int n = static_cast<int>(x.size());
  SecondJetGroupoidElement r;
  r.first = jet_of_bisection(b, x, eps_det);
  r.frame2 = VecBilinear(n, n);
  for (int a = 0; a < n; ++a)
    r.frame2.comp[static_cast<size_t>(a)] = ev.psi.hess[static_cast<size_t>(a)];
  r.xi2 = AlgebraBilinearMap(b.group, n);
  Eigen::MatrixXd hinv = ev.h.inverse();
  const auto& xi = r.first.xi.cols;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      r.xi2.at(u, v) = hinv * ev.d2h[static_cast<size_t>(u)][static_cast<size_t>(v)] -
                       0.5 * (xi[static_cast<size_t>(u)] * xi[static_cast<size_t>(v)] +
                              xi[static_cast<size_t>(v)] * xi[static_cast<size_t>(u)]);
  r.semiholonomous = true;
  r.holonomous = true;
  return r;
}

JetOfSection jet_of_section(const SmoothMap& phi, const Eigen::VectorXd& x) {
  MapJet2 j = extract_jet2(phi, x);
  return {x, j.value, j.jac};
}

SecondJetOfSection jet2_of_section(const SmoothMap& phi, const Eigen::VectorXd& x) {
  MapJet2 j = extract_jet2(phi, x);
  SecondJetOfSection r;
  r.first = {x, j.value, j.jac};
  r.slope2 = j.jac;
  r.curl = VecBilinear(phi.out_dim, phi.in_dim);
  for (int a = 0; a < phi.out_dim; ++a) r.curl.comp[static_cast<size_t>(a)] = j.hess[static_cast<size_t>(a)];
  r.holonomous = true;
  return r;
}

namespace {

// Evaluates the section x -> Phi_JE(u_g(x), u_e(x)) with order-2 Taylor
// arithmetic in (x, t); the flow parameter t produces the slope-level blocks.
// The result is the 1-jet of that section precomposed with the inverse base
// map, whose differential is frame^{-1} by semiholonomy.
struct ActCoreOut {
  Eigen::VectorXd value;
  Eigen::MatrixXd slope;   // k x n
  Eigen::MatrixXd slope2;  // k x n
  VecBilinear curl;        // k x (n, n)
};

ActCoreOut act_core(const SecondJetGroupoidElement& ug2, const SecondJetOfSection& ue2,
                    const FiberSpace& fiber, bool want_second) {
  const JetGroupoidElement& ug = ug2.first;
  require_base_match(ug.x_src, ue2.first.x, "jet action");
  require_same_group(ug.h.group, fiber.group());
  const int n = static_cast<int>(ug.x_src.size());
  const int k = fiber.chart_dim();
  const int m = ug.h.group->size();
  const int nv = n + 1;  // base displacements + flow parameter

  Eigen::MatrixXd ainv = checked_inverse(ug.frame, "jet frame");

  // displacement seeds d_i (value 0) and flow seed t
  TaylorVector d;
  for (int i = 0; i < n; ++i) d.push_back(TaylorScalar::variable(0.0, i, nv));
  TaylorScalar t = TaylorScalar::variable(0.0, n, nv);

  // group-part value field h~(dx) = h · exp(xi(dx) + 1/2 K(dx,dx))
  TaylorMatrix eta(m, m, nv);
  for (int i = 0; i < n; ++i)
    eta = eta + d[static_cast<size_t>(i)] * TaylorMatrix::constant(ug.xi.cols[static_cast<size_t>(i)], nv);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      eta = eta + (0.5 * (d[static_cast<size_t>(u)] * d[static_cast<size_t>(v)])) *
                      TaylorMatrix::constant(ug2.xi2.at(u, v), nv);
  TaylorMatrix hfield = TaylorMatrix::constant(ug.h.mat, nv) * expm(eta);

  // fiber value field q~(dx) with derivative slope2
  TaylorVector qfield;
  for (int a = 0; a < k; ++a) {
    TaylorScalar s(ue2.first.value(a), nv);
    for (int i = 0; i < n; ++i) s = s + ue2.slope2(a, i) * d[static_cast<size_t>(i)];
    qfield.push_back(s);
  }

  Eigen::VectorXd value(k);
  Eigen::MatrixXd dvalue(k, n);
  Eigen::MatrixXd pre_slope(k, n);                       // N columns
  std::vector<Eigen::MatrixXd> dn(static_cast<size_t>(k));  // per output: (i, j) = d_i N_j
  for (int a = 0; a < k; ++a) dn[static_cast<size_t>(a)] = Eigen::MatrixXd::Zero(n, n);

  for (int j = 0; j < n; ++j) {
    // body-frame slope field evaluated on e_j:
    // xi~(dx)(e_j) = xi(e_j) + K(dx, e_j) - 1/2 [xi(dx), xi(e_j)]
    TaylorMatrix xij = TaylorMatrix::constant(ug.xi.cols[static_cast<size_t>(j)], nv);
    for (int u = 0; u < n; ++u) {
      const Eigen::MatrixXd& xu = ug.xi.cols[static_cast<size_t>(u)];
      const Eigen::MatrixXd& xj = ug.xi.cols[static_cast<size_t>(j)];
      Eigen::MatrixXd lin = ug2.xi2.at(u, j) - 0.5 * (xu * xj - xj * xu);
      xij = xij + d[static_cast<size_t>(u)] * TaylorMatrix::constant(lin, nv);
    }
    TaylorMatrix garg = hfield * expm(t * xij);

    // fiber slope field on e_j: S(e_j) + curl(dx; e_j)
    TaylorVector qarg = qfield;
    for (int a = 0; a < k; ++a) {
      TaylorScalar s(ue2.first.slope(a, j), nv);
      for (int u = 0; u < n; ++u)
        s = s + ue2.curl.comp[static_cast<size_t>(a)](u, j) * d[static_cast<size_t>(u)];
      qarg[static_cast<size_t>(a)] = qarg[static_cast<size_t>(a)] + t * s;
    }

    TaylorVector f = fiber.act(garg, qarg);
    for (int a = 0; a < k; ++a) {
      const TaylorScalar& fa = f[static_cast<size_t>(a)];
      if (j == 0) {
        value(a) = fa.value;
        for (int i = 0; i < n; ++i) dvalue(a, i) = fa.grad(i);
      }
      pre_slope(a, j) = fa.grad(n);
      for (int i = 0; i < n; ++i) dn[static_cast<size_t>(a)](i, j) = fa.hess(i, n);
    }
  }

  ActCoreOut out;
  out.value = value;
  out.slope = pre_slope * ainv;
  if (!want_second) return out;

  out.slope2 = dvalue * ainv;
  out.curl = VecBilinear(k, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd zi = ainv.col(i);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd wj = ainv.col(j);
      // frame correction: -N0( A^{-1} DA(A^{-1}u; A^{-1}v) )
      Eigen::VectorXd corr = pre_slope * (ainv * ug2.frame2.apply(zi, wj));
      for (int a = 0; a < k; ++a)
        out.curl.comp[static_cast<size_t>(a)](i, j) =
            zi.transpose() * dn[static_cast<size_t>(a)] * wj - corr(a);
    }
  }
  return out;
}

SecondJetGroupoidElement lift_first_order(const JetGroupoidElement& ug) {
  SecondJetGroupoidElement r;
  r.first = ug;
  const int n = static_cast<int>(ug.x_src.size());
  r.frame2 = VecBilinear(n, n);
  r.xi2 = AlgebraBilinearMap(ug.h.group, n);
  r.semiholonomous = true;
  r.holonomous = true;
  return r;
}

SecondJetOfSection lift_first_order(const JetOfSection& ue) {
  SecondJetOfSection r;
  r.first = ue;
  r.slope2 = ue.slope;
  r.curl = VecBilinear(static_cast<int>(ue.value.size()), static_cast<int>(ue.x.size()));
  r.holonomous = true;
  return r;
}

}  // namespace

JetOfSection act_jg_on_je(const JetGroupoidElement& ug, const JetOfSection& ue,
                          const FiberSpace& fiber) {
  ActCoreOut out = act_core(lift_first_order(ug), lift_first_order(ue), fiber, false);
  return {ug.x_tgt, out.value, out.slope};
}

SecondJetOfSection act_j2g_on_j2e(const SecondJetGroupoidElement& ug2,
                                  const SecondJetOfSection& ue2,
                                  const FiberSpace& fiber) {
  if (!ug2.semiholonomous)
    throw NotSemiholonomous("second-order groupoid jet is not semiholonomous");
  ActCoreOut out = act_core(ug2, ue2, fiber, true);
  SecondJetOfSection r;
  r.first = {ug2.first.x_tgt, out.value, out.slope};
  r.slope2 = out.slope2;
  r.curl = out.curl;
  r.holonomous = ug2.holonomous && ue2.holonomous;
  return r;
}

double jet_residual(const JetOfSection& a, const JetOfSection& b) {
  double r = (a.x - b.x).cwiseAbs().maxCoeff();
  r = std::max(r, (a.value - b.value).cwiseAbs().maxCoeff());
  r = std::max(r, max_abs_diff(a.slope, b.slope));
  return r;
}

double jet_residual(const SecondJetOfSection& a, const SecondJetOfSection& b) {
  double r = jet_residual(a.first, b.first);
  r = std::max(r, max_abs_diff(a.slope2, b.slope2));
  r = std::max(r, (a.curl - b.curl).norm());
  return r;
}

bool jets_equal(const JetOfSection& a, const JetOfSection& b, double tol) {
  return jet_residual(a, b) <= tol;
}

bool jets_equal(const SecondJetOfSection& a, const SecondJetOfSection& b, double tol) {
  return jet_residual(a, b) <= tol;
}

MapJet2 invert_map_jet2(const MapJet2& j) {
  if (j.in_dim() != j.out_dim()) throw DimensionMismatch("inverse jet of non-square map");
  const int n = j.in_dim();
  MapJet2 r;
  r.value = Eigen::VectorXd::Zero(n);  // caller tracks the base point
  Eigen::MatrixXd jinv = checked_inverse(j.jac, "map jet");
  r.jac = jinv;
  r.hess.resize(static_cast<size_t>(n));
  // D2(psi^{-1})(u,v) = -J^{-1} · D2psi(J^{-1}u, J^{-1}v)
  for (int a = 0; a < n; ++a) r.hess[static_cast<size_t>(a)] = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      Eigen::VectorXd h(n);
      for (int b = 0; b < n; ++b)
        h(b) = jinv.col(u).transpose() * j.hess[static_cast<size_t>(b)] * jinv.col(v);
      Eigen::VectorXd corr = -jinv * h;
      for (int a = 0; a < n; ++a) r.hess[static_cast<size_t>(a)](u, v) = corr(a);
    }
  return r;
}

}  // namespace gjet
