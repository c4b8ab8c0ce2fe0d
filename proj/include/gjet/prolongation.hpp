// Jet group G0^(1) = (GL(n) x G0) ⋉ L(R^n, g0), the jet prolongation of P,
// its fiber actions, the quotient isomorphisms onto derived bundles of E,
// and the identification of the jet groupoid of the gauge groupoid with the
// gauge groupoid of the prolongation.
#pragma once

#include <Eigen/Dense>

#include "gjet/connections.hpp"
#include "gjet/groupoids.hpp"

namespace gjet {

struct JetGroupElement {
  Eigen::MatrixXd a0;   // invertible n x n
  GroupElement g0;
  AlgebraLinearMap xi0;
};

JetGroupElement jetgroup_identity(const GroupPtr& group, int n);
JetGroupElement jetgroup_mul(const JetGroupElement& u, const JetGroupElement& v);
JetGroupElement jetgroup_inv(const JetGroupElement& u);

// point of the jet prolongation: a frame over x plus a jet of a section of P
// there (group part stored in body frame)
struct ProlongedPoint {
  Eigen::VectorXd x;
  Eigen::MatrixXd frame;  // invertible n x n
  GroupElement g;
  AlgebraLinearMap xi;    // body-frame group slope of the underlying jet
};

ProlongedPoint flat_prolonged_point(const GroupPtr& group, const Eigen::VectorXd& x);
ProlongedPoint right_action_p1(const ProlongedPoint& pp, const JetGroupElement& u);

// canonical representative of a class in (P1 x P1)/G0^(1): the source
// prolonged point is normalized to (frame I, group e, zero slope)
struct ProlongedGaugeGroupoidElement {
  ProlongedPoint target;
  Eigen::VectorXd x_src;
};

ProlongedGaugeGroupoidElement canonicalize_pair(const ProlongedPoint& pp2,
                                                const ProlongedPoint& pp1);
ProlongedGaugeGroupoidElement compose_prolonged(const ProlongedGaugeGroupoidElement& c2,
                                                const ProlongedGaugeGroupoidElement& c1);
double prolonged_residual(const ProlongedGaugeGroupoidElement& a,
                          const ProlongedGaugeGroupoidElement& b);

// fiber values for the actions of G0^(1)
struct TangentFiberValue {
  Eigen::VectorXd v;    // R^n part
  Eigen::VectorXd q;    // point of Q in the chart
  Eigen::VectorXd vq;   // tangent at q
};
struct JetFiberValue {
  Eigen::VectorXd q;
  Eigen::MatrixXd u;    // k x n, linear map R^n -> T_qQ
};

TangentFiberValue act_tangent_fiber(const JetGroupElement& u, const TangentFiberValue& w,
                                    const FiberSpace& fiber);
JetFiberValue act_jet_fiber(const JetGroupElement& u, const JetFiberValue& w,
                            const FiberSpace& fiber);
JetFiberValue act_linjet_fiber(const JetGroupElement& u, const JetFiberValue& w,
                               const FiberSpace& fiber);
AlgebraLinearMap act_cp_fiber(const JetGroupElement& u, const AlgebraLinearMap& a0);

// tangent vector of the associated bundle in the canonical chart
struct AssociatedTangent {
  AssociatedPoint at;
  Eigen::VectorXd dx;
  Eigen::VectorXd dq;
};

AssociatedTangent iso_tangent(const ProlongedPoint& pp, const TangentFiberValue& w,
                              const FiberSpace& fiber);
JetOfSection iso_jet(const ProlongedPoint& pp, const JetFiberValue& w,
                     const FiberSpace& fiber);
VerticalOneForm iso_linjet(const ProlongedPoint& pp, const JetFiberValue& w,
                           const FiberSpace& fiber);
AlgebraLinearMap iso_cp(const ProlongedPoint& pp, const AlgebraLinearMap& a0);

// the induced element of JG from a pair of prolonged points
JetGroupoidElement jggg_map(const ProlongedPoint& pp2, const ProlongedPoint& pp1);
// constructive section of jggg_map: canonical class with normalized source
ProlongedGaugeGroupoidElement jggg_inverse(const JetGroupoidElement& ug);
JetGroupoidElement jggg_map(const ProlongedGaugeGroupoidElement& c);

}  // namespace gjet
