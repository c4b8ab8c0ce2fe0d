#include "gjet/lie.hpp"

#include <cmath>

namespace gjet {

namespace {

double frob(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.array() * b.array()).sum();
}

// first column of a left-quaternion-multiplication matrix is the quaternion
Eigen::MatrixXd quat_left_mult(const Eigen::Vector4d& q) {
  Eigen::MatrixXd m(4, 4);
  const double w = q(0), x = q(1), y = q(2), z = q(3);
  m << w, -x, -y, -z,
       x,  w, -z,  y,
       y,  z,  w, -x,
       z, -y,  x,  w;
  return m;
}

}  // namespace

MatrixGroup::MatrixGroup(GroupKind kind, int m,
                         std::vector<Eigen::MatrixXd> basis, double eps_grp)
    : kind_(kind), m_(m), basis_(std::move(basis)), eps_grp_(eps_grp) {
  const int d = static_cast<int>(basis_.size());
  Eigen::MatrixXd gram(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) gram(a, b) = frob(basis_[a], basis_[b]);
  gram_inv_ = gram.inverse();
}

std::string MatrixGroup::name() const {
  switch (kind_) {
    case GroupKind::GL: return "GL" + std::to_string(m_);
    case GroupKind::SO: return "SO" + std::to_string(m_);
    case GroupKind::U1: return "U1";
    case GroupKind::SU2: return "SU2";
  }
  return "?";
}

double MatrixGroup::membership_residual(const Eigen::MatrixXd& g) const {
  if (g.rows() != m_ || g.cols() != m_) return 1.0;
  switch (kind_) {
    case GroupKind::GL: {
      const double det = g.determinant();
      return std::abs(det) > 1e-12 ? 0.0 : 1.0;
    }
    case GroupKind::SO:
    case GroupKind::U1: {
      double r = (g.transpose() * g - Eigen::MatrixXd::Identity(m_, m_))
                     .cwiseAbs()
                     .maxCoeff();
      if (g.determinant() < 0.0) r = std::max(r, 1.0);
      return r;
    }
    case GroupKind::SU2: {
      Eigen::Vector4d q = g.col(0);
      double r = (g - quat_left_mult(q)).cwiseAbs().maxCoeff();
      r = std::max(r, std::abs(q.norm() - 1.0));
      return r;
    }
  }
  return 1.0;
}

double MatrixGroup::algebra_residual(const Eigen::MatrixXd& x) const {
  return (x - algebra_from_coords(algebra_coords(x))).cwiseAbs().maxCoeff();
}

Eigen::VectorXd MatrixGroup::algebra_coords(const Eigen::MatrixXd& x) const {
  const int d = algebra_dim();
  Eigen::VectorXd rhs(d);
  for (int a = 0; a < d; ++a) rhs(a) = frob(basis_[a], x);
  return gram_inv_ * rhs;
}

Eigen::MatrixXd MatrixGroup::algebra_from_coords(const Eigen::VectorXd& c) const {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m_, m_);
  for (int a = 0; a < algebra_dim(); ++a) x += c(a) * basis_[a];
  return x;
}

TaylorVector MatrixGroup::algebra_coords(const TaylorMatrix& x) const {
  const int d = algebra_dim();
  const int nv = x.nvars();
  TaylorVector rhs(static_cast<size_t>(d), TaylorScalar(0.0, nv));
  for (int a = 0; a < d; ++a) {
    TaylorScalar acc(0.0, nv);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) acc = acc + basis_[a](i, j) * x(i, j);
    rhs[static_cast<size_t>(a)] = acc;
  }
  TaylorVector out(static_cast<size_t>(d), TaylorScalar(0.0, nv));
  for (int a = 0; a < d; ++a) {
    TaylorScalar acc(0.0, nv);
    for (int b = 0; b < d; ++b) acc = acc + gram_inv_(a, b) * rhs[static_cast<size_t>(b)];
    out[static_cast<size_t>(a)] = acc;
  }
  return out;
}

TaylorMatrix MatrixGroup::algebra_from_coords(const TaylorVector& c) const {
  const int nv = c.empty() ? 0 : c[0].nvars();
  TaylorMatrix x(m_, m_, nv);
  for (int a = 0; a < algebra_dim(); ++a)
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j)
        x(i, j) = x(i, j) + basis_[a](i, j) * c[static_cast<size_t>(a)];
  return x;
}

GroupPtr make_gl(int m, double eps_grp) {
  std::vector<Eigen::MatrixXd> basis;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, m);
      e(i, j) = 1.0;
      basis.push_back(e);
    }
  return std::make_shared<MatrixGroup>(GroupKind::GL, m, basis, eps_grp);
}

GroupPtr make_so(int m, double eps_grp) {
  std::vector<Eigen::MatrixXd> basis;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, m);
      e(i, j) = -1.0;
      e(j, i) = 1.0;
      basis.push_back(e);
    }
  return std::make_shared<MatrixGroup>(GroupKind::SO, m, basis, eps_grp);
}

GroupPtr make_u1(double eps_grp) {
  Eigen::MatrixXd e(2, 2);
  e << 0.0, -1.0, 1.0, 0.0;
  return std::make_shared<MatrixGroup>(GroupKind::U1, 2,
                                       std::vector<Eigen::MatrixXd>{e}, eps_grp);
}

GroupPtr make_su2(double eps_grp) {
  std::vector<Eigen::MatrixXd> basis;
  basis.push_back(quat_left_mult(Eigen::Vector4d(0, 1, 0, 0)));
  basis.push_back(quat_left_mult(Eigen::Vector4d(0, 0, 1, 0)));
  basis.push_back(quat_left_mult(Eigen::Vector4d(0, 0, 0, 1)));
  return std::make_shared<MatrixGroup>(GroupKind::SU2, 4, basis, eps_grp);
}

GroupPtr group_by_name(const std::string& name, int gl_size) {
  if (name == "U1") return make_u1();
  if (name == "SO3") return make_so(3);
  if (name == "SO2") return make_so(2);
  if (name == "SU2") return make_su2();
  if (name == "GL") return make_gl(gl_size);
  throw ConfigError("unknown group kind '" + name + "'");
}

GroupElement::GroupElement(GroupPtr g, Eigen::MatrixXd m)
    : group(std::move(g)), mat(std::move(m)) {
  if (mat.rows() != group->size() || mat.cols() != group->size())
    throw DimensionMismatch("group element size");
}

GroupElement GroupElement::identity(const GroupPtr& g) {
  return {g, Eigen::MatrixXd::Identity(g->size(), g->size())};
}

AlgebraElement::AlgebraElement(GroupPtr g, Eigen::MatrixXd m)
    : group(std::move(g)), mat(std::move(m)) {
  if (mat.rows() != group->size() || mat.cols() != group->size())
    throw DimensionMismatch("algebra element size");
}

AlgebraElement AlgebraElement::zero(const GroupPtr& g) {
  return {g, Eigen::MatrixXd::Zero(g->size(), g->size())};
}

AlgebraLinearMap::AlgebraLinearMap(GroupPtr g, int n) : group(std::move(g)) {
  cols.assign(static_cast<size_t>(n),
              Eigen::MatrixXd::Zero(group->size(), group->size()));
}

Eigen::MatrixXd AlgebraLinearMap::apply(const Eigen::VectorXd& v) const {
  if (v.size() != n()) throw DimensionMismatch("algebra map apply");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(group->size(), group->size());
  for (int i = 0; i < n(); ++i) out += v(i) * cols[static_cast<size_t>(i)];
  return out;
}

AlgebraLinearMap AlgebraLinearMap::precompose(const Eigen::MatrixXd& b) const {
  if (b.rows() != n()) throw DimensionMismatch("algebra map precompose");
  AlgebraLinearMap out(group, static_cast<int>(b.cols()));
  for (int j = 0; j < b.cols(); ++j) out.cols[static_cast<size_t>(j)] = apply(b.col(j));
  return out;
}

double AlgebraLinearMap::norm() const {
  double r = 0.0;
  for (const auto& c : cols) r = std::max(r, c.cwiseAbs().maxCoeff());
  return r;
}

AlgebraLinearMap operator+(const AlgebraLinearMap& a, const AlgebraLinearMap& b) {
  require_same_group(a.group, b.group);
  if (a.n() != b.n()) throw DimensionMismatch("algebra map add");
  AlgebraLinearMap out = a;
  for (int i = 0; i < a.n(); ++i) out.cols[static_cast<size_t>(i)] += b.cols[static_cast<size_t>(i)];
  return out;
}

AlgebraLinearMap operator-(const AlgebraLinearMap& a, const AlgebraLinearMap& b) {
  return a + (-b);
}

AlgebraLinearMap operator-(const AlgebraLinearMap& a) { return -1.0 * a; }

AlgebraLinearMap operator*(double s, const AlgebraLinearMap& a) {
  AlgebraLinearMap out = a;
  for (auto& c : out.cols) c *= s;
  return out;
}

AlgebraBilinearMap::AlgebraBilinearMap(GroupPtr g, int nn)
    : group(std::move(g)), n(nn) {
  grid.assign(static_cast<size_t>(n) * n,
              Eigen::MatrixXd::Zero(group->size(), group->size()));
}

Eigen::MatrixXd AlgebraBilinearMap::apply(const Eigen::VectorXd& u,
                                          const Eigen::VectorXd& v) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(group->size(), group->size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out += u(a) * v(b) * at(a, b);
  return out;
}

AlgebraBilinearMap AlgebraBilinearMap::transpose_args() const {
  AlgebraBilinearMap out(group, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out.at(a, b) = at(b, a);
  return out;
}

double AlgebraBilinearMap::norm() const {
  double r = 0.0;
  for (const auto& m : grid) r = std::max(r, m.cwiseAbs().maxCoeff());
  return r;
}

double AlgebraBilinearMap::asymmetry() const {
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      r = std::max(r, (at(a, b) - at(b, a)).cwiseAbs().maxCoeff());
  return r;
}

AlgebraBilinearMap operator+(const AlgebraBilinearMap& a, const AlgebraBilinearMap& b) {
  require_same_group(a.group, b.group);
  if (a.n != b.n) throw DimensionMismatch("algebra bilinear add");
  AlgebraBilinearMap out = a;
  for (size_t i = 0; i < out.grid.size(); ++i) out.grid[i] += b.grid[i];
  return out;
}

AlgebraBilinearMap operator-(const AlgebraBilinearMap& a, const AlgebraBilinearMap& b) {
  return a + (-1.0 * b);
}

AlgebraBilinearMap operator*(double s, const AlgebraBilinearMap& a) {
  AlgebraBilinearMap out = a;
  for (auto& m : out.grid) m *= s;
  return out;
}

void require_same_group(const GroupPtr& a, const GroupPtr& b) {
  if (!a || !b || !a->same_as(*b))
    throw GroupMismatch("operands belong to different groups");
}

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& m, const char* what) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) throw SingularMatrix(what);
  return lu.inverse();
}

GroupElement mul(const GroupElement& g1, const GroupElement& g2) {
  require_same_group(g1.group, g2.group);
  return {g1.group, g1.mat * g2.mat};
}

GroupElement inv(const GroupElement& g) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g.mat);
  if (!lu.isInvertible()) throw SingularMatrix("group element not invertible");
  return {g.group, lu.inverse()};
}

GroupElement group_exp(const AlgebraElement& x) {
  return {x.group, expm(x.mat)};
}

Eigen::MatrixXd adjoint(const GroupElement& g, const Eigen::MatrixXd& x) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g.mat);
  if (!lu.isInvertible()) throw SingularMatrix("Ad of non-invertible element");
  return g.mat * x * lu.inverse();
}

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) {
  require_same_group(g.group, x.group);
  return {x.group, adjoint(g, x.mat)};
}

AlgebraLinearMap adjoint(const GroupElement& g, const AlgebraLinearMap& xi) {
  require_same_group(g.group, xi.group);
  AlgebraLinearMap out = xi;
  for (auto& c : out.cols) c = adjoint(g, c);
  return out;
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_group(x.group, y.group);
  return {x.group, x.mat * y.mat - y.mat * x.mat};
}

AlgebraElement random_algebra(const GroupPtr& g, Rng& rng, double scale) {
  Eigen::VectorXd c(g->algebra_dim());
  for (int a = 0; a < g->algebra_dim(); ++a) c(a) = scale * rng.uniform(-1.0, 1.0);
  return {g, g->algebra_from_coords(c)};
}

GroupElement random_element(const GroupPtr& g, Rng& rng, double scale) {
  return group_exp(random_algebra(g, rng, scale));
}

AlgebraElement random_algebra(const GroupPtr& g, uint64_t seed, double scale) {
  Rng rng(seed);
  return random_algebra(g, rng, scale);
}

GroupElement random_element(const GroupPtr& g, uint64_t seed, double scale) {
  Rng rng(seed);
  return random_element(g, rng, scale);
}

AlgebraLinearMap random_algebra_map(const GroupPtr& g, Rng& rng, int n, double scale) {
  AlgebraLinearMap out(g, n);
  for (int i = 0; i < n; ++i) out.cols[static_cast<size_t>(i)] = random_algebra(g, rng, scale).mat;
  return out;
}

}  // namespace gjet
