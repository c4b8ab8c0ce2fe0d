#include "gjet/connections.hpp"

namespace gjet {

AlgebraLinearMap ConnectionForm::value(const Eigen::VectorXd& x) const {
  return jet(x).A;
}

ConnectionJet ConnectionForm::jet(const Eigen::VectorXd& x) const {
  std::vector<TaylorVector> c = coords(seed_coordinates(x));
  if (static_cast<int>(c.size()) != n)
    throw DimensionMismatch("connection form column count");
  ConnectionJet out;
  out.x = x;
  out.A = AlgebraLinearMap(group, n);
  out.dA = AlgebraBilinearMap(group, n);
  const int d = group->algebra_dim();
  for (int v = 0; v < n; ++v) {
    if (static_cast<int>(c[static_cast<size_t>(v)].size()) != d)
      throw DimensionMismatch("connection form coordinate count");
    Eigen::VectorXd val(d);
    for (int a = 0; a < d; ++a) val(a) = c[static_cast<size_t>(v)][static_cast<size_t>(a)].value;
    out.A.cols[static_cast<size_t>(v)] = group->algebra_from_coords(val);
    for (int u = 0; u < n; ++u) {
      Eigen::VectorXd der(d);
      for (int a = 0; a < d; ++a) der(a) = c[static_cast<size_t>(v)][static_cast<size_t>(a)].grad(u);
      out.dA.at(u, v) = group->algebra_from_coords(der);
    }
  }
  return out;
}

ConnectionForm ConnectionForm::from_polynomials(
    GroupPtr group, int n, std::vector<std::vector<Polynomial>> per_col_coords) {
  ConnectionForm f;
  f.group = group;
  f.n = n;
  f.coords = [per_col_coords = std::move(per_col_coords)](const TaylorVector& x) {
    std::vector<TaylorVector> out;
    out.reserve(per_col_coords.size());
    for (const auto& col : per_col_coords) {
      TaylorVector c;
      c.reserve(col.size());
      for (const auto& p : col) c.push_back(p.eval(x));
      out.push_back(std::move(c));
    }
    return out;
  };
  return f;
}

ConnectionForm ConnectionForm::zero(GroupPtr group, int n) {
  std::vector<std::vector<Polynomial>> cols(
      static_cast<size_t>(n),
      std::vector<Polynomial>(static_cast<size_t>(group->algebra_dim()),
                              Polynomial::constant(n, 0.0)));
  return from_polynomials(std::move(group), n, std::move(cols));
}

VerticalOneForm difference_first(const JetOfSection& u1, const JetOfSection& u2,
                                 double tol) {
  if (u1.x.size() != u2.x.size() || (u1.x - u2.x).cwiseAbs().maxCoeff() > tol ||
      (u1.value - u2.value).cwiseAbs().maxCoeff() > tol)
    throw BasePointMismatch("difference_first needs jets at a common point");
  return {{u1.x, u1.value}, u1.slope - u2.slope};
}

SecondDifference difference_second(const SecondJetOfSection& v1,
                                   const SecondJetOfSection& v2, double tol) {
  const JetOfSection& a = v1.first;
  const JetOfSection& b = v2.first;
  if ((a.x - b.x).cwiseAbs().maxCoeff() > kBaseMatchTol ||
      (a.value - b.value).cwiseAbs().maxCoeff() > tol ||
      max_abs_diff(a.slope, b.slope) > tol)
    throw FirstJetMismatch("difference_second needs a common underlying jet");
  // both projections to JE must agree; then the slope2 difference block is
  // zero and the difference is the curl difference
  if (max_abs_diff(v1.slope2, v2.slope2) > tol)
    throw FirstJetMismatch("difference_second: slope2 blocks disagree");
  return {{a.x, a.value}, v1.curl - v2.curl};
}

VerticalTwoForm alternator(const SecondJetOfSection& v, double tol) {
  if (!v.semiholonomous(tol))
    throw NotSemiholonomous("alternator input fails the semiholonomy equality");
  return {{v.first.x, v.first.value}, kAlternatorFactor * (v.curl - v.curl.transpose_args())};
}

JetOfSection associated_connection(const AlgebraLinearMap& c, const AssociatedPoint& e,
                                   const FiberSpace& fiber) {
  if (c.n() != e.x.size())
    throw BasePointMismatch("connection value and point have different base dims");
  JetOfSection out;
  out.x = e.x;
  out.value = e.qhat;
  out.slope = fundamental_vf_q_map(fiber, c, e.qhat);
  return out;
}

VerticalOneForm covariant_derivative_value(const AlgebraLinearMap& c,
                                           const JetOfSection& ue,
                                           const FiberSpace& fiber) {
  JetOfSection lift = associated_connection(c, {ue.x, ue.value}, fiber);
  return difference_first(ue, lift);
}

VerticalOneForm minimal_coupling(const ConnectionForm& A, const SmoothMap& phi,
                                 const Eigen::VectorXd& x, const FiberSpace& fiber) {
  return covariant_derivative_value(A.value(x), jet_of_section(phi, x), fiber);
}

AlgebraLinearMap cp_value_of_principal_jet(const GroupPtr& group, const JetOfSection& w) {
  const int m = group->size();
  const int n = static_cast<int>(w.x.size());
  Eigen::MatrixXd g = mat_of_vec(w.value, m, m);
  Eigen::MatrixXd ginv = checked_inverse(g, "principal jet value");
  AlgebraLinearMap c(group, n);
  for (int j = 0; j < n; ++j)
    c.cols[static_cast<size_t>(j)] = -mat_of_vec(w.slope.col(j), m, m) * ginv;
  return c;
}

JetOfSection principal_jet_of_cp_value(const AlgebraLinearMap& c,
                                       const Eigen::VectorXd& x, const GroupElement& g) {
  const int m = g.group->size();
  const int n = static_cast<int>(x.size());
  JetOfSection w;
  w.x = x;
  w.value = vec_of_mat(g.mat);
  w.slope.resize(m * m, n);
  for (int j = 0; j < n; ++j)
    w.slope.col(j) = vec_of_mat(-c.cols[static_cast<size_t>(j)] * g.mat);
  return w;
}

namespace {

// second-order representative of a connection jet at p = (x, e); the base
// flow has ambient slope -A so the 1-jet of the lifted JP-section projects
// back to itself (semiholonomy)
SecondJetOfSection lift_connection_jet(const ConnectionJet& cj) {
  const GroupPtr& group = cj.A.group;
  const int m = group->size();
  const int n = static_cast<int>(cj.x.size());
  SecondJetOfSection out;
  out.first = principal_jet_of_cp_value(cj.A, cj.x, GroupElement::identity(group));
  out.slope2 = out.first.slope;
  out.curl = VecBilinear(m * m, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      Eigen::MatrixXd c = -cj.dA.at(u, v) +
                          cj.A.cols[static_cast<size_t>(v)] * cj.A.cols[static_cast<size_t>(u)];
      Eigen::VectorXd cv = vec_of_mat(c);
      for (int a = 0; a < m * m; ++a) out.curl.comp[static_cast<size_t>(a)](u, v) = cv(a);
    }
  out.holonomous = false;
  return out;
}

ConnectionJet read_connection_jet(const GroupPtr& group, const SecondJetOfSection& v) {
  const int m = group->size();
  const int n = static_cast<int>(v.first.x.size());
  ConnectionJet out;
  out.x = v.first.x;
  out.A = cp_value_of_principal_jet(group, v.first);
  out.dA = AlgebraBilinearMap(group, n);
  Eigen::MatrixXd g = mat_of_vec(v.first.value, m, m);
  Eigen::MatrixXd ginv = checked_inverse(g, "principal jet value");
  for (int u = 0; u < n; ++u)
    for (int v_arg = 0; v_arg < n; ++v_arg) {
      Eigen::VectorXd cv(m * m);
      for (int a = 0; a < m * m; ++a) cv(a) = v.curl.comp[static_cast<size_t>(a)](u, v_arg);
      out.dA.at(u, v_arg) = -mat_of_vec(cv, m, m) * ginv +
                            out.A.cols[static_cast<size_t>(v_arg)] *
                                out.A.cols[static_cast<size_t>(u)];
    }
  return out;
}

}  // namespace

CurvatureValue curvature_from_jet(const ConnectionJet& cj) {
  const GroupPtr& group = cj.A.group;
  const int m = group->size();
  const int n = static_cast<int>(cj.x.size());
  VerticalTwoForm alt = alternator(lift_connection_jet(cj));
  CurvatureValue out;
  out.x = cj.x;
  out.F = AlgebraBilinearMap(group, n);
  // two-form coefficients: antisymmetric part divided by the alternator factor
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      Eigen::VectorXd cv(m * m);
      for (int a = 0; a < m * m; ++a) cv(a) = alt.coeff.comp[static_cast<size_t>(a)](u, v);
      out.F.at(u, v) = (1.0 / kAlternatorFactor) * mat_of_vec(cv, m, m);
    }
  return out;
}

CurvatureValue curvature(const ConnectionForm& A, const Eigen::VectorXd& x) {
  return curvature_from_jet(A.jet(x));
}

AlgebraLinearMap act_jg_on_cp(const JetGroupoidElement& ug, const AlgebraLinearMap& c,
                              const Eigen::VectorXd& x) {
  if ((ug.x_src - x).cwiseAbs().maxCoeff() > kBaseMatchTol)
    throw ComposabilityError("act_jg_on_cp: value not at the jet source");
  FiberSpace fiber = FiberSpace::left_translation(ug.h.group);
  JetOfSection w = principal_jet_of_cp_value(c, x, GroupElement::identity(ug.h.group));
  JetOfSection moved = act_jg_on_je(ug, w, fiber);
  return cp_value_of_principal_jet(ug.h.group, moved);
}

ConnectionJet act_j2g_on_jcp(const SecondJetGroupoidElement& ug2, const ConnectionJet& cj) {
  if ((ug2.first.x_src - cj.x).cwiseAbs().maxCoeff() > kBaseMatchTol)
    throw ComposabilityError("act_j2g_on_jcp: jet not at the source point");
  if (!ug2.semiholonomous)
    throw NotSemiholonomous("act_j2g_on_jcp needs a semiholonomous groupoid jet");
  FiberSpace fiber = FiberSpace::left_translation(ug2.first.h.group);
  SecondJetOfSection lifted = lift_connection_jet(cj);
  SecondJetOfSection moved = act_j2g_on_j2e(ug2, lifted, fiber);
  return read_connection_jet(ug2.first.h.group, moved);
}

VerticalOneForm transport_one_form(const JetGroupoidElement& ug,
                                   const VerticalOneForm& f, const FiberSpace& fiber) {
  Eigen::MatrixXd d = fiber.d_act_fiber(ug.h.mat, f.at.qhat);
  AssociatedPoint at{ug.x_tgt, fiber.act_value(ug.h.mat, f.at.qhat)};
  return {at, d * f.coeff * checked_inverse(ug.frame, "jet frame")};
}

VecBilinear transport_bilinear(const JetGroupoidElement& ug, const VecBilinear& b,
                               const Eigen::VectorXd& q, const FiberSpace& fiber) {
  Eigen::MatrixXd d = fiber.d_act_fiber(ug.h.mat, q);
  Eigen::MatrixXd ainv = checked_inverse(ug.frame, "jet frame");
  VecBilinear out(b.k, b.n);
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j) {
      Eigen::VectorXd val = d * b.apply(ainv.col(i), ainv.col(j));
      for (int a = 0; a < b.k; ++a) out.comp[static_cast<size_t>(a)](i, j) = val(a);
    }
  return out;
}

CurvatureValue transport_curvature(const JetGroupoidElement& ug, const CurvatureValue& f) {
  Eigen::MatrixXd ainv = checked_inverse(ug.frame, "jet frame");
  CurvatureValue out;
  out.x = ug.x_tgt;
  out.F = AlgebraBilinearMap(f.F.group, f.F.n);
  for (int u = 0; u < f.F.n; ++u)
    for (int v = 0; v < f.F.n; ++v)
      out.F.at(u, v) = adjoint(ug.h, f.F.apply(ainv.col(u), ainv.col(v)));
  return out;
}

}  // namespace gjet
