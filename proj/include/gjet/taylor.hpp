// Order-2 truncated Taylor arithmetic in n base variables.
//
// Every smooth map in the system is a program over this arithmetic; first
// and second jets are extracted by evaluating the program on seeded
// coordinates and reading off value / gradient / hessian blocks.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "gjet/errors.hpp"

namespace gjet {

inline constexpr double kEpsDivDefault = 1e-12;

// Scalar jet: value, gradient and (symmetric) hessian w.r.t. the n seeded
// base variables. All operations propagate exact order-2 coefficients.
struct TaylorScalar {
  double value = 0.0;
  Eigen::VectorXd grad;   // n
  Eigen::MatrixXd hess;   // n x n, symmetric

  TaylorScalar() = default;
  TaylorScalar(double v, int nvars)
      : value(v), grad(Eigen::VectorXd::Zero(nvars)),
        hess(Eigen::MatrixXd::Zero(nvars, nvars)) {}

  int nvars() const { return static_cast<int>(grad.size()); }
  static TaylorScalar constant(double v, int nvars) { return {v, nvars}; }
  // coordinate seed: value v, gradient e_i, zero hessian
  static TaylorScalar variable(double v, int i, int nvars);
};

using TaylorVector = std::vector<TaylorScalar>;

TaylorScalar operator+(const TaylorScalar& a, const TaylorScalar& b);
TaylorScalar operator-(const TaylorScalar& a, const TaylorScalar& b);
TaylorScalar operator-(const TaylorScalar& a);
TaylorScalar operator*(const TaylorScalar& a, const TaylorScalar& b);
TaylorScalar operator/(const TaylorScalar& a, const TaylorScalar& b);
// division with an explicit near-zero guard
TaylorScalar divide(const TaylorScalar& a, const TaylorScalar& b, double eps_div);
TaylorScalar operator+(const TaylorScalar& a, double c);
TaylorScalar operator+(double c, const TaylorScalar& a);
TaylorScalar operator-(const TaylorScalar& a, double c);
TaylorScalar operator-(double c, const TaylorScalar& a);
TaylorScalar operator*(const TaylorScalar& a, double c);
TaylorScalar operator*(double c, const TaylorScalar& a);
TaylorScalar operator/(const TaylorScalar& a, double c);

// univariate chain rule: f(u) given f(u0), f'(u0), f''(u0)
TaylorScalar chain(double f0, double f1, double f2, const TaylorScalar& u);
TaylorScalar exp(const TaylorScalar& u);
TaylorScalar log(const TaylorScalar& u);
TaylorScalar sin(const TaylorScalar& u);
TaylorScalar cos(const TaylorScalar& u);
TaylorScalar sqrt(const TaylorScalar& u);

// seeds the n chart coordinates at x
TaylorVector seed_coordinates(const Eigen::VectorXd& x);
// seeds x in the first n slots of an (n+extra)-variable computation;
// remaining slots are free for auxiliary flow parameters
TaylorVector seed_coordinates_extended(const Eigen::VectorXd& x, int extra);

// Dense matrix with TaylorScalar entries. Sizes stay tiny (m <= 4, n <= 3),
// so plain loops are fine.
class TaylorMatrix {
 public:
  TaylorMatrix() = default;
  TaylorMatrix(int rows, int cols, int nvars);
  static TaylorMatrix identity(int m, int nvars);
  static TaylorMatrix constant(const Eigen::MatrixXd& m, int nvars);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nvars() const { return nvars_; }
  TaylorScalar& operator()(int i, int j) { return a_[i * cols_ + j]; }
  const TaylorScalar& operator()(int i, int j) const { return a_[i * cols_ + j]; }

  Eigen::MatrixXd value() const;
  // directional first derivative of every entry: d/dx_k
  Eigen::MatrixXd deriv(int k) const;
  // mixed second derivative of every entry: d2/dx_k dx_l
  Eigen::MatrixXd deriv2(int k, int l) const;

  TaylorMatrix transpose() const;

 private:
  int rows_ = 0, cols_ = 0, nvars_ = 0;
  std::vector<TaylorScalar> a_;
};

TaylorMatrix operator+(const TaylorMatrix& a, const TaylorMatrix& b);
TaylorMatrix operator-(const TaylorMatrix& a, const TaylorMatrix& b);
TaylorMatrix operator*(const TaylorMatrix& a, const TaylorMatrix& b);
TaylorMatrix operator*(const TaylorScalar& s, const TaylorMatrix& a);
TaylorMatrix operator*(double s, const TaylorMatrix& a);
TaylorVector operator*(const TaylorMatrix& a, const TaylorVector& v);

// inverse; exact in the truncated algebra (value part inverted numerically,
// the rest by the nilpotent Neumann tail)
TaylorMatrix inverse(const TaylorMatrix& m);
// matrix exponential by scaling-and-squaring; exact chain rule through the
// series (terminates after three terms when the value part vanishes)
TaylorMatrix expm(const TaylorMatrix& m);
Eigen::MatrixXd expm(const Eigen::MatrixXd& m);

// A deterministic smooth program R^in -> R^out over Taylor arithmetic.
struct SmoothMap {
  int in_dim = 0;
  int out_dim = 0;
  std::function<TaylorVector(const TaylorVector&)> eval;

  TaylorVector operator()(const TaylorVector& x) const { return eval(x); }
  Eigen::VectorXd value_at(const Eigen::VectorXd& x) const;
};

// order-2 jet of a map R^a -> R^b at a point
struct MapJet2 {
  Eigen::VectorXd value;               // b
  Eigen::MatrixXd jac;                 // b x a
  std::vector<Eigen::MatrixXd> hess;   // b entries, each a x a

  int in_dim() const { return static_cast<int>(jac.cols()); }
  int out_dim() const { return static_cast<int>(jac.rows()); }
};

MapJet2 extract_jet2(const SmoothMap& f, const Eigen::VectorXd& x);
// chain rule to second order: jet of g∘f from the jets of g at f(x) and f at x
MapJet2 compose_jet2(const MapJet2& outer, const MapJet2& inner);

struct FiniteDifferenceReport {
  double grad_residual = 0.0;
  double hess_residual = 0.0;
  double max_residual = 0.0;
};

// central finite differences with step h against Taylor-extracted blocks
FiniteDifferenceReport finite_difference_check(const SmoothMap& f,
                                               const Eigen::VectorXd& x,
                                               double h);

// flatten / unflatten row-major, used for matrix-valued fiber charts
Eigen::VectorXd vec_of_mat(const Eigen::MatrixXd& m);
Eigen::MatrixXd mat_of_vec(const Eigen::VectorXd& v, int rows, int cols);
TaylorVector tvec_of_tmat(const TaylorMatrix& m);
TaylorMatrix tmat_of_tvec(const TaylorVector& v, int rows, int cols);

}  // namespace gjet
