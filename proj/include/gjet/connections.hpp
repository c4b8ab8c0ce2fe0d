// Difference maps, alternator, connection-bundle values and their jet-
// groupoid actions, minimal coupling and the curvature map.
//
// A connection-bundle value at x is stored in canonical coordinates
// A ∈ L(R^n, g0); its representative jet at p = (x, e) has ambient group
// slope -A(v), so the stored A is the classical gauge potential (minimal
// coupling comes out D = ∂ + A, see the convention ledger shipped by the
// harness for the empirically pinned signs).
#pragma once

#include <Eigen/Dense>
#include <functional>

#include "gjet/groupoids.hpp"

namespace gjet {

inline constexpr double kAlternatorFactor = 0.5;

// local principal connection data as a Taylor program x -> L(R^n, g0),
// returned as per-column algebra-basis coordinates
struct ConnectionForm {
  GroupPtr group;
  int n = 0;
  std::function<std::vector<TaylorVector>(const TaylorVector&)> coords;

  AlgebraLinearMap value(const Eigen::VectorXd& x) const;
  struct ConnectionJet jet(const Eigen::VectorXd& x) const;

  static ConnectionForm from_polynomials(
      GroupPtr group, int n, std::vector<std::vector<Polynomial>> per_col_coords);
  static ConnectionForm zero(GroupPtr group, int n);
};

// element of J(CP): value and first derivative of a CP section, identified
// with a semiholonomous second-order jet of P (dA need not be symmetric)
struct ConnectionJet {
  Eigen::VectorXd x;
  AlgebraLinearMap A;
  AlgebraBilinearMap dA;  // slot order (deriv, arg)
};

struct VerticalOneForm {
  AssociatedPoint at;
  Eigen::MatrixXd coeff;  // k x n
};

struct VerticalTwoForm {
  AssociatedPoint at;
  VecBilinear coeff;  // antisymmetric in the base slots
};

struct SecondDifference {
  AssociatedPoint at;
  VecBilinear bilinear;

  VecBilinear sym() const { return bilinear.sym(); }
  VecBilinear antisym() const { return bilinear.antisym(); }
};

struct CurvatureValue {
  Eigen::VectorXd x;
  AlgebraBilinearMap F;  // antisymmetric, g0-valued
};

VerticalOneForm difference_first(const JetOfSection& u1, const JetOfSection& u2,
                                 double tol = kBaseMatchTol);
SecondDifference difference_second(const SecondJetOfSection& v1,
                                   const SecondJetOfSection& v2,
                                   double tol = kBaseMatchTol);
VerticalTwoForm alternator(const SecondJetOfSection& v, double tol = kFlagTol);

// horizontal-lift jet of the connection value c at the associated point e
JetOfSection associated_connection(const AlgebraLinearMap& c, const AssociatedPoint& e,
                                   const FiberSpace& fiber);
// pointwise minimal coupling: D(c, u_e) = u_e - Γ^E(π(u_e))
VerticalOneForm covariant_derivative_value(const AlgebraLinearMap& c,
                                           const JetOfSection& ue,
                                           const FiberSpace& fiber);
// D(phi)(x) for a section program, through the two maps above
VerticalOneForm minimal_coupling(const ConnectionForm& A, const SmoothMap& phi,
                                 const Eigen::VectorXd& x, const FiberSpace& fiber);

CurvatureValue curvature_from_jet(const ConnectionJet& cj);
CurvatureValue curvature(const ConnectionForm& A, const Eigen::VectorXd& x);

// canonical CP coordinates of a jet of a section of P (ambient chart)
AlgebraLinearMap cp_value_of_principal_jet(const GroupPtr& group, const JetOfSection& w);
// representative jet at p = (x, g) of the CP value c
JetOfSection principal_jet_of_cp_value(const AlgebraLinearMap& c,
                                       const Eigen::VectorXd& x, const GroupElement& g);

AlgebraLinearMap act_jg_on_cp(const JetGroupoidElement& ug, const AlgebraLinearMap& c,
                              const Eigen::VectorXd& x);
ConnectionJet act_j2g_on_jcp(const SecondJetGroupoidElement& ug2, const ConnectionJet& cj);

// (GL(TM) x G)-transports of the derived objects, used on the lower rows of
// the equivariance diagrams
VerticalOneForm transport_one_form(const JetGroupoidElement& ug,
                                   const VerticalOneForm& f, const FiberSpace& fiber);
VecBilinear transport_bilinear(const JetGroupoidElement& ug, const VecBilinear& b,
                               const Eigen::VectorXd& q, const FiberSpace& fiber);
CurvatureValue transport_curvature(const JetGroupoidElement& ug, const CurvatureValue& f);

}  // namespace gjet
