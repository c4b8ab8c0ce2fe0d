#include "gjet/taylor.hpp"

#include <cmath>

namespace gjet {

namespace {

void require_same_nvars(const TaylorScalar& a, const TaylorScalar& b) {
  if (a.nvars() != b.nvars())
    throw DimensionMismatch("taylor scalars carry different base dimensions");
}

}  // namespace

TaylorScalar TaylorScalar::variable(double v, int i, int nvars) {
  TaylorScalar t(v, nvars);
  t.grad(i) = 1.0;
  return t;
}

TaylorScalar operator+(const TaylorScalar& a, const TaylorScalar& b) {
  require_same_nvars(a, b);
  TaylorScalar r = a;
  r.value += b.value;
  r.grad += b.grad;
  r.hess += b.hess;
  return r;
}

TaylorScalar operator-(const TaylorScalar& a, const TaylorScalar& b) {
  require_same_nvars(a, b);
  TaylorScalar r = a;
  r.value -= b.value;
  r.grad -= b.grad;
  r.hess -= b.hess;
  return r;
}

TaylorScalar operator-(const TaylorScalar& a) {
  TaylorScalar r = a;
  r.value = -r.value;
  r.grad = -r.grad;
  r.hess = -r.hess;
  return r;
}

TaylorScalar operator*(const TaylorScalar& a, const TaylorScalar& b) {
  require_same_nvars(a, b);
  TaylorScalar r(a.value * b.value, a.nvars());
  r.grad = a.grad * b.value + b.grad * a.value;
  r.hess = a.hess * b.value + b.hess * a.value + a.grad * b.grad.transpose() +
           b.grad * a.grad.transpose();
  return r;
}

TaylorScalar operator/(const TaylorScalar& a, const TaylorScalar& b) {
  return divide(a, b, kEpsDivDefault);
}

TaylorScalar divide(const TaylorScalar& a, const TaylorScalar& b, double eps_div) {
  require_same_nvars(a, b);
  if (std::abs(b.value) <= eps_div)
    throw DivisionNearZero("denominator value " + std::to_string(b.value));
  const double iv = 1.0 / b.value;
  // reciprocal of b by chain rule, then multiply
  TaylorScalar rec = chain(iv, -iv * iv, 2.0 * iv * iv * iv, b);
  return a * rec;
}

TaylorScalar operator+(const TaylorScalar& a, double c) {
  TaylorScalar r = a;
  r.value += c;
  return r;
}
TaylorScalar operator+(double c, const TaylorScalar& a) { return a + c; }
TaylorScalar operator-(const TaylorScalar& a, double c) { return a + (-c); }
TaylorScalar operator-(double c, const TaylorScalar& a) { return (-a) + c; }
TaylorScalar operator*(const TaylorScalar& a, double c) {
  TaylorScalar r = a;
  r.value *= c;
  r.grad *= c;
  r.hess *= c;
  return r;
}
TaylorScalar operator*(double c, const TaylorScalar& a) { return a * c; }
TaylorScalar operator/(const TaylorScalar& a, double c) {
  if (std::abs(c) <= kEpsDivDefault)
    throw DivisionNearZero("constant denominator " + std::to_string(c));
  return a * (1.0 / c);
}

TaylorScalar chain(double f0, double f1, double f2, const TaylorScalar& u) {
  TaylorScalar r(f0, u.nvars());
  r.grad = f1 * u.grad;
  r.hess = f1 * u.hess + f2 * (u.grad * u.grad.transpose());
  return r;
}

TaylorScalar exp(const TaylorScalar& u) {
  const double e = std::exp(u.value);
  return chain(e, e, e, u);
}

TaylorScalar log(const TaylorScalar& u) {
  if (u.value <= kEpsDivDefault)
    throw DivisionNearZero("log argument " + std::to_string(u.value));
  const double iv = 1.0 / u.value;
  return chain(std::log(u.value), iv, -iv * iv, u);
}

TaylorScalar sin(const TaylorScalar& u) {
  return chain(std::sin(u.value), std::cos(u.value), -std::sin(u.value), u);
}

TaylorScalar cos(const TaylorScalar& u) {
  return chain(std::cos(u.value), -std::sin(u.value), -std::cos(u.value), u);
}

TaylorScalar sqrt(const TaylorScalar& u) {
  if (u.value <= kEpsDivDefault)
    throw DivisionNearZero("sqrt argument " + std::to_string(u.value));
  const double s = std::sqrt(u.value);
  return chain(s, 0.5 / s, -0.25 / (s * u.value), u);
}

TaylorVector seed_coordinates(const Eigen::VectorXd& x) {
  return seed_coordinates_extended(x, 0);
}

TaylorVector seed_coordinates_extended(const Eigen::VectorXd& x, int extra) {
  const int n = static_cast<int>(x.size());
  TaylorVector out;
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back(TaylorScalar::variable(x(i), i, n + extra));
  return out;
}

TaylorMatrix::TaylorMatrix(int rows, int cols, int nvars)
    : rows_(rows), cols_(cols), nvars_(nvars),
      a_(static_cast<size_t>(rows) * cols, TaylorScalar(0.0, nvars)) {}

TaylorMatrix TaylorMatrix::identity(int m, int nvars) {
  TaylorMatrix r(m, m, nvars);
  for (int i = 0; i < m; ++i) r(i, i) = TaylorScalar(1.0, nvars);
  return r;
}

TaylorMatrix TaylorMatrix::constant(const Eigen::MatrixXd& m, int nvars) {
  TaylorMatrix r(static_cast<int>(m.rows()), static_cast<int>(m.cols()), nvars);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = TaylorScalar(m(i, j), nvars);
  return r;
}

Eigen::MatrixXd TaylorMatrix::value() const {
  Eigen::MatrixXd v(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) v(i, j) = (*this)(i, j).value;
  return v;
}

Eigen::MatrixXd TaylorMatrix::deriv(int k) const {
  Eigen::MatrixXd v(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) v(i, j) = (*this)(i, j).grad(k);
  return v;
}

Eigen::MatrixXd TaylorMatrix::deriv2(int k, int l) const {
  Eigen::MatrixXd v(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) v(i, j) = (*this)(i, j).hess(k, l);
  return v;
}

TaylorMatrix TaylorMatrix::transpose() const {
  TaylorMatrix r(cols_, rows_, nvars_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

TaylorMatrix operator+(const TaylorMatrix& a, const TaylorMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("taylor matrix add");
  TaylorMatrix r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

TaylorMatrix operator-(const TaylorMatrix& a, const TaylorMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("taylor matrix sub");
  TaylorMatrix r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

TaylorMatrix operator*(const TaylorMatrix& a, const TaylorMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("taylor matrix mul");
  TaylorMatrix r(a.rows(), b.cols(), a.nvars());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      TaylorScalar acc(0.0, a.nvars());
      for (int k = 0; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
      r(i, j) = acc;
    }
  return r;
}

TaylorMatrix operator*(const TaylorScalar& s, const TaylorMatrix& a) {
  TaylorMatrix r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

TaylorMatrix operator*(double s, const TaylorMatrix& a) {
  TaylorMatrix r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

TaylorVector operator*(const TaylorMatrix& a, const TaylorVector& v) {
  if (a.cols() != static_cast<int>(v.size()))
    throw DimensionMismatch("taylor matrix-vector mul");
  TaylorVector r;
  r.reserve(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    TaylorScalar acc(0.0, a.nvars());
    for (int k = 0; k < a.cols(); ++k) acc = acc + a(i, k) * v[k];
    r.push_back(acc);
  }
  return r;
}

TaylorMatrix inverse(const TaylorMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square");
  const int s = m.rows();
  Eigen::MatrixXd v = m.value();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(v);
  if (!lu.isInvertible())
    throw SingularMatrix("taylor matrix value part not invertible");
  Eigen::MatrixXd w = lu.inverse();
  // M = V + D with D value-free; M^{-1} = (I - WD + (WD)^2) W exactly at order 2
  TaylorMatrix W = TaylorMatrix::constant(w, m.nvars());
  TaylorMatrix D = m - TaylorMatrix::constant(v, m.nvars());
  TaylorMatrix WD = W * D;
  TaylorMatrix I = TaylorMatrix::identity(s, m.nvars());
  return (I - WD + WD * WD) * W;
}

namespace {

double coeff_mass(const TaylorMatrix& m) {
  double total = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const TaylorScalar& e = m(i, j);
      total += std::abs(e.value) + e.grad.cwiseAbs().sum() + e.hess.cwiseAbs().sum();
    }
  return total;
}

}  // namespace

TaylorMatrix expm(const TaylorMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("expm of non-square");
  const int s = m.rows();
  const double nv = m.value().cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (nv * scale > 0.25 && squarings < 40) {
    scale *= 0.5;
    ++squarings;
  }
  TaylorMatrix x = scale * m;
  TaylorMatrix term = TaylorMatrix::identity(s, m.nvars());
  TaylorMatrix sum = term;
  for (int k = 1; k <= 16; ++k) {
    term = term * x;
    term = (1.0 / k) * term;
    // nilpotent arguments (zero value part) terminate after three terms
    if (coeff_mass(term) == 0.0) break;
    sum = sum + term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& m) {
  return expm(TaylorMatrix::constant(m, 0)).value();
}

Eigen::VectorXd SmoothMap::value_at(const Eigen::VectorXd& x) const {
  TaylorVector out = eval(seed_coordinates(x));
  Eigen::VectorXd v(out.size());
  for (size_t i = 0; i < out.size(); ++i) v(static_cast<int>(i)) = out[i].value;
  return v;
}

MapJet2 extract_jet2(const SmoothMap& f, const Eigen::VectorXd& x) {
  if (f.in_dim != x.size()) throw DimensionMismatch("extract_jet2 seed size");
  TaylorVector out = f.eval(seed_coordinates(x));
  if (static_cast<int>(out.size()) != f.out_dim)
    throw DimensionMismatch("extract_jet2 output size");
  MapJet2 j;
  j.value.resize(f.out_dim);
  j.jac.resize(f.out_dim, f.in_dim);
  j.hess.resize(f.out_dim);
  for (int b = 0; b < f.out_dim; ++b) {
    j.value(b) = out[b].value;
    j.jac.row(b) = out[b].grad.transpose();
    j.hess[b] = out[b].hess;
  }
  return j;
}

MapJet2 compose_jet2(const MapJet2& outer, const MapJet2& inner) {
  if (outer.in_dim() != inner.out_dim())
    throw DimensionMismatch("compose_jet2: inner output vs outer input");
  MapJet2 j;
  j.value = outer.value;
  j.jac = outer.jac * inner.jac;
  j.hess.resize(outer.out_dim());
  for (int b = 0; b < outer.out_dim(); ++b) {
    Eigen::MatrixXd h =
        Eigen::MatrixXd::Zero(inner.in_dim(), inner.in_dim());
    for (int l = 0; l < outer.in_dim(); ++l) h += outer.jac(b, l) * inner.hess[l];
    h += inner.jac.transpose() * outer.hess[b] * inner.jac;
    j.hess[b] = h;
  }
  return j;
}

FiniteDifferenceReport finite_difference_check(const SmoothMap& f,
                                               const Eigen::VectorXd& x,
                                               double h) {
  if (h <= 0.0) throw ConfigError("finite difference step must be positive");
  MapJet2 jet = extract_jet2(f, x);
  const int n = f.in_dim;
  FiniteDifferenceReport rep;
  auto value = [&](const Eigen::VectorXd& p) { return f.value_at(p); };
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    Eigen::VectorXd d = (value(xp) - value(xm)) / (2.0 * h);
    rep.grad_residual =
        std::max(rep.grad_residual, (d - jet.jac.col(i)).cwiseAbs().maxCoeff());
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
      xpp(i) += h; xpp(j) += h;
      xpm(i) += h; xpm(j) -= h;
      xmp(i) -= h; xmp(j) += h;
      xmm(i) -= h; xmm(j) -= h;
      Eigen::VectorXd d =
          (value(xpp) - value(xpm) - value(xmp) + value(xmm)) / (4.0 * h * h);
      for (int b = 0; b < f.out_dim; ++b)
        rep.hess_residual =
            std::max(rep.hess_residual, std::abs(d(b) - jet.hess[b](i, j)));
    }
  rep.max_residual = std::max(rep.grad_residual, rep.hess_residual);
  return rep;
}

Eigen::VectorXd vec_of_mat(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(m.rows() * m.cols());
  int k = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v(k++) = m(i, j);
  return v;
}

Eigen::MatrixXd mat_of_vec(const Eigen::VectorXd& v, int rows, int cols) {
  if (v.size() != rows * cols) throw DimensionMismatch("mat_of_vec size");
  Eigen::MatrixXd m(rows, cols);
  int k = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v(k++);
  return m;
}

TaylorVector tvec_of_tmat(const TaylorMatrix& m) {
  TaylorVector v;
  v.reserve(static_cast<size_t>(m.rows()) * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

TaylorMatrix tmat_of_tvec(const TaylorVector& v, int rows, int cols) {
  if (static_cast<int>(v.size()) != rows * cols)
    throw DimensionMismatch("tmat_of_tvec size");
  TaylorMatrix m(rows, cols, v.empty() ? 0 : v[0].nvars());
  int k = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v[static_cast<size_t>(k++)];
  return m;
}

}  // namespace gjet
