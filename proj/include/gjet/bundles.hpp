// Chart-local principal bundle P = U x G0, associated bundles, vertical
// identifications and fundamental vector fields.
//
// Associated points are always stored as the canonical representative
// [(x,e), qhat]; fiber values live in a linear chart R^k (matrix-valued
// fibers use the ambient matrix entries, which keeps every action program
// polynomial in the inputs).
#pragma once

#include <Eigen/Dense>
#include <functional>

#include "gjet/lie.hpp"
#include "gjet/taylor.hpp"

namespace gjet {

struct BaseChart {
  Eigen::VectorXd lo, hi;

  BaseChart() = default;
  BaseChart(Eigen::VectorXd l, Eigen::VectorXd h);
  static BaseChart centered_box(int n, double half_width);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Eigen::VectorXd& x) const;
};

struct PrincipalPoint {
  Eigen::VectorXd x;
  GroupElement g;
};

enum class FiberKind { Linear, Adjoint, Conjugation, Callback, LeftTranslation };

// A manifold Q with a left G0-action, presented through a chart R^k and the
// action as a Taylor program. Derivatives of the action are always obtained
// by seeded evaluation, never by hand-written formulas.
class FiberSpace {
 public:
  using ActProgram =
      std::function<TaylorVector(const TaylorMatrix&, const TaylorVector&)>;

  static FiberSpace linear_rep(GroupPtr group);
  static FiberSpace adjoint_rep(GroupPtr group);
  static FiberSpace conjugation(GroupPtr group);
  static FiberSpace left_translation(GroupPtr group);  // fiber for E = P
  static FiberSpace callback(GroupPtr group, int chart_dim, ActProgram program);
  static FiberSpace by_name(const std::string& name, GroupPtr group);

  FiberKind kind() const { return kind_; }
  const GroupPtr& group() const { return group_; }
  int chart_dim() const { return k_; }

  TaylorVector act(const TaylorMatrix& g, const TaylorVector& q) const;
  Eigen::VectorXd act_value(const Eigen::MatrixXd& g, const Eigen::VectorXd& q) const;
  // fiber-direction differential of the action at (g, q): k x k
  Eigen::MatrixXd d_act_fiber(const Eigen::MatrixXd& g, const Eigen::VectorXd& q) const;

 private:
  FiberSpace(FiberKind kind, GroupPtr group, int k, ActProgram program);

  FiberKind kind_;
  GroupPtr group_;
  int k_;
  ActProgram program_;
};

struct AssociatedPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd qhat;  // canonical fiber value, chart coordinates
};

// Vertical tangent vector, principal or associated flavor.
struct VerticalVector {
  bool principal = true;
  PrincipalPoint at_p;          // principal flavor: base point
  Eigen::MatrixXd body;         // principal flavor: body-frame g0 coordinate
  AssociatedPoint at_e;         // associated flavor: base point
  Eigen::VectorXd fiber_tangent;  // associated flavor: chart tangent

  static VerticalVector at_principal(PrincipalPoint p, Eigen::MatrixXd body_coord);
  static VerticalVector at_associated(AssociatedPoint e, Eigen::VectorXd tangent);
};

// canonical representative of [p, q]: normalizes to [(x,e), g·q]
AssociatedPoint rho_q(const FiberSpace& fiber, const PrincipalPoint& p,
                      const Eigen::VectorXd& q);
PrincipalPoint right_action(const PrincipalPoint& p, const GroupElement& g0);
// unique g0 with p·g0 = p2 (same base point required)
GroupElement delta_p(const PrincipalPoint& p, const PrincipalPoint& p2,
                     double tol = 1e-12);
// fundamental field of the right action on P at p, in body frame
VerticalVector fundamental_vf_p(const AlgebraElement& x0, const PrincipalPoint& p);
// fundamental field of the left action on Q at q: d/dt act(exp(-tX0), q)|0
Eigen::VectorXd fundamental_vf_q(const FiberSpace& fiber, const AlgebraElement& x0,
                                 const Eigen::VectorXd& q);
// columnwise extension of the above to a linear map R^n -> T_qQ
Eigen::MatrixXd fundamental_vf_q_map(const FiberSpace& fiber,
                                     const AlgebraLinearMap& xi,
                                     const Eigen::VectorXd& q);

}  // namespace gjet
