// Matrix Lie groups and algebras: the structure group and its algebra,
// with exp, Ad, brackets and seeded random sampling. Complex groups are
// embedded as real matrices so every computation stays over the reals.
#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "gjet/errors.hpp"
#include "gjet/poly.hpp"
#include "gjet/taylor.hpp"

namespace gjet {

enum class GroupKind { GL, SO, U1, SU2 };

class MatrixGroup {
 public:
  MatrixGroup(GroupKind kind, int m, std::vector<Eigen::MatrixXd> basis,
              double eps_grp);

  GroupKind kind() const { return kind_; }
  int size() const { return m_; }
  int algebra_dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Eigen::MatrixXd>& basis() const { return basis_; }
  double eps_grp() const { return eps_grp_; }
  std::string name() const;

  // deviation from the membership predicate (0 for exact members)
  double membership_residual(const Eigen::MatrixXd& g) const;
  // distance of X from span of the algebra basis
  double algebra_residual(const Eigen::MatrixXd& x) const;
  // coordinates of an algebra element in the basis (least squares)
  Eigen::VectorXd algebra_coords(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd algebra_from_coords(const Eigen::VectorXd& c) const;
  // same projection applied entrywise to Taylor data (it is linear)
  TaylorVector algebra_coords(const TaylorMatrix& x) const;
  TaylorMatrix algebra_from_coords(const TaylorVector& c) const;

  bool same_as(const MatrixGroup& other) const {
    return kind_ == other.kind_ && m_ == other.m_;
  }

 private:
  GroupKind kind_;
  int m_;
  std::vector<Eigen::MatrixXd> basis_;
  Eigen::MatrixXd gram_inv_;  // inverse Gram of the basis, for projections
  double eps_grp_;
};

using GroupPtr = std::shared_ptr<const MatrixGroup>;

GroupPtr make_gl(int m, double eps_grp = 1e-9);
GroupPtr make_so(int m, double eps_grp = 1e-9);
GroupPtr make_u1(double eps_grp = 1e-9);  // U(1) as SO(2)
GroupPtr make_su2(double eps_grp = 1e-9); // SU(2) as real 4x4 (left quaternion mult.)
GroupPtr group_by_name(const std::string& name, int gl_size = 2);

struct GroupElement {
  GroupPtr group;
  Eigen::MatrixXd mat;

  GroupElement() = default;
  GroupElement(GroupPtr g, Eigen::MatrixXd m);
  static GroupElement identity(const GroupPtr& g);
};

struct AlgebraElement {
  GroupPtr group;
  Eigen::MatrixXd mat;

  AlgebraElement() = default;
  AlgebraElement(GroupPtr g, Eigen::MatrixXd m);
  static AlgebraElement zero(const GroupPtr& g);
};

// linear map R^n -> g0, stored columnwise
struct AlgebraLinearMap {
  GroupPtr group;
  std::vector<Eigen::MatrixXd> cols;  // n entries, each m x m

  AlgebraLinearMap() = default;
  AlgebraLinearMap(GroupPtr g, int n);

  int n() const { return static_cast<int>(cols.size()); }
  Eigen::MatrixXd apply(const Eigen::VectorXd& v) const;
  // precompose with a linear map of the base: (xi ∘ B)(v) = xi(B v)
  AlgebraLinearMap precompose(const Eigen::MatrixXd& b) const;
  double norm() const;
};

AlgebraLinearMap operator+(const AlgebraLinearMap& a, const AlgebraLinearMap& b);
AlgebraLinearMap operator-(const AlgebraLinearMap& a, const AlgebraLinearMap& b);
AlgebraLinearMap operator-(const AlgebraLinearMap& a);
AlgebraLinearMap operator*(double s, const AlgebraLinearMap& a);

// bilinear map R^n x R^n -> g0
struct AlgebraBilinearMap {
  GroupPtr group;
  int n = 0;
  std::vector<Eigen::MatrixXd> grid;  // n*n entries, (u,v) slot at u*n+v

  AlgebraBilinearMap() = default;
  AlgebraBilinearMap(GroupPtr g, int n);

  Eigen::MatrixXd& at(int u, int v) { return grid[static_cast<size_t>(u * n + v)]; }
  const Eigen::MatrixXd& at(int u, int v) const {
    return grid[static_cast<size_t>(u * n + v)];
  }
  Eigen::MatrixXd apply(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  AlgebraBilinearMap transpose_args() const;
  double norm() const;
  double asymmetry() const;  // max |at(u,v) - at(v,u)|
};

AlgebraBilinearMap operator+(const AlgebraBilinearMap& a, const AlgebraBilinearMap& b);
AlgebraBilinearMap operator-(const AlgebraBilinearMap& a, const AlgebraBilinearMap& b);
AlgebraBilinearMap operator*(double s, const AlgebraBilinearMap& a);

void require_same_group(const GroupPtr& a, const GroupPtr& b);
// inverse with an invertibility check; throws SingularMatrix
Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& m, const char* what);

GroupElement mul(const GroupElement& g1, const GroupElement& g2);
GroupElement inv(const GroupElement& g);
GroupElement group_exp(const AlgebraElement& x);
AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x);
AlgebraLinearMap adjoint(const GroupElement& g, const AlgebraLinearMap& xi);
Eigen::MatrixXd adjoint(const GroupElement& g, const Eigen::MatrixXd& x);
AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);

AlgebraElement random_algebra(const GroupPtr& g, uint64_t seed, double scale);
GroupElement random_element(const GroupPtr& g, uint64_t seed, double scale);
AlgebraElement random_algebra(const GroupPtr& g, Rng& rng, double scale);
GroupElement random_element(const GroupPtr& g, Rng& rng, double scale);
AlgebraLinearMap random_algebra_map(const GroupPtr& g, Rng& rng, int n, double scale);

}  // namespace gjet
