// The gauge groupoid of P in canonical representatives, first and second
// order jet groupoids, jets of sections, and the induced actions on jet
// bundles. Second-order elements store the genuinely free blocks of a 1-jet
// of a section of JG (resp. JE); the two projections to JG (resp. JE)
// coincide by construction, which is exactly the semiholonomy condition.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gjet/bundles.hpp"
#include "gjet/lie.hpp"
#include "gjet/taylor.hpp"

namespace gjet {

inline constexpr double kBaseMatchTol = 1e-12;
inline constexpr double kJetEqTol = 1e-10;
inline constexpr double kEpsDetDefault = 1e-8;
inline constexpr double kFlagTol = 1e-12;

// canonical representative of [p2, p1]: p1 normalized to (x_src, e)
struct GaugeGroupoidElement {
  Eigen::VectorXd x_tgt;
  GroupElement h;
  Eigen::VectorXd x_src;
};

GaugeGroupoidElement unit_element(const GroupPtr& group, const Eigen::VectorXd& x);
GaugeGroupoidElement compose(const GaugeGroupoidElement& g2,
                             const GaugeGroupoidElement& g1);
GaugeGroupoidElement invert(const GaugeGroupoidElement& g);

PrincipalPoint act_on_principal(const GaugeGroupoidElement& g, const PrincipalPoint& p);
AssociatedPoint act_on_associated(const GaugeGroupoidElement& g,
                                  const AssociatedPoint& e, const FiberSpace& fiber);
GaugeGroupoidElement isotropy_embed(const PrincipalPoint& p, const GroupElement& g0);
// transport of vertical vectors along the left translation by g
VerticalVector act_on_vertical(const GaugeGroupoidElement& g, const VerticalVector& v,
                               const FiberSpace* fiber = nullptr);

// base diffeomorphism + group part of a bisection, as Taylor programs
struct Bisection {
  GroupPtr group;
  SmoothMap psi;  // n -> n, tau_G ∘ beta
  std::function<TaylorMatrix(const TaylorVector&)> hmap;  // n -> G0
};

// 1-jet of a bisection at x_src, group part in body frame:
// Dh(x)v = h(x)·xi(v)
struct JetGroupoidElement {
  Eigen::VectorXd x_src, x_tgt;
  GroupElement h;
  Eigen::MatrixXd frame;  // invertible n x n
  AlgebraLinearMap xi;
};

// vector-valued bilinear map R^n x R^n -> R^k; slot order (deriv, arg)
struct VecBilinear {
  int k = 0, n = 0;
  std::vector<Eigen::MatrixXd> comp;  // k entries, each n x n

  VecBilinear() = default;
  VecBilinear(int kk, int nn)
      : k(kk), n(nn), comp(static_cast<size_t>(kk), Eigen::MatrixXd::Zero(nn, nn)) {}

  Eigen::VectorXd apply(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  VecBilinear transpose_args() const;
  VecBilinear sym() const;
  VecBilinear antisym() const;  // (B - B^T)/2
  double norm() const;
  double asymmetry() const;
};

VecBilinear operator+(const VecBilinear& a, const VecBilinear& b);
VecBilinear operator-(const VecBilinear& a, const VecBilinear& b);
VecBilinear operator*(double s, const VecBilinear& a);

// second-order jet-groupoid element; the stored blocks are the second-order
// frame derivative and the exp-chart second group block (symmetric exactly
// for jets of genuine bisections)
struct SecondJetGroupoidElement {
  JetGroupoidElement first;
  VecBilinear frame2;       // DA: (u;v) -> R^n
  AlgebraBilinearMap xi2;   // K
  bool semiholonomous = true;
  bool holonomous = false;
};

// jet of a section of an associated bundle in the trivialized fiber chart
struct JetOfSection {
  Eigen::VectorXd x;
  Eigen::VectorXd value;   // k
  Eigen::MatrixXd slope;   // k x n
};

// 1-jet of a section of JE: value/slope plus the independent second-level
// blocks. semiholonomous <=> slope2 == first.slope.
struct SecondJetOfSection {
  JetOfSection first;
  Eigen::MatrixXd slope2;  // k x n
  VecBilinear curl;        // k x (n x n), slots (deriv, arg)
  bool holonomous = false;

  bool semiholonomous(double tol = kFlagTol) const;
  bool curl_symmetric(double tol = kFlagTol) const;
};

JetGroupoidElement unit_jet(const GroupPtr& group, const Eigen::VectorXd& x);
JetGroupoidElement compose_jets(const JetGroupoidElement& u2,
                                const JetGroupoidElement& u1);
JetGroupoidElement invert_jet(const JetGroupoidElement& u);
SecondJetGroupoidElement unit_jet2(const GroupPtr& group, const Eigen::VectorXd& x);

JetGroupoidElement jet_of_bisection(const Bisection& b, const Eigen::VectorXd& x,
                                    double eps_det = kEpsDetDefault);
SecondJetGroupoidElement jet2_of_bisection(const Bisection& b,
                                           const Eigen::VectorXd& x,
                                           double eps_det = kEpsDetDefault);

JetOfSection jet_of_section(const SmoothMap& phi, const Eigen::VectorXd& x);
SecondJetOfSection jet2_of_section(const SmoothMap& phi, const Eigen::VectorXd& x);

// induced action of JG on JE
JetOfSection act_jg_on_je(const JetGroupoidElement& ug, const JetOfSection& ue,
                          const FiberSpace& fiber);
// induced action of the second-order jet groupoid on second-order jets
SecondJetOfSection act_j2g_on_j2e(const SecondJetGroupoidElement& ug2,
                                  const SecondJetOfSection& ue2,
                                  const FiberSpace& fiber);

// order-2 jet of the inverse map from the order-2 jet of a diffeomorphism
MapJet2 invert_map_jet2(const MapJet2& j);

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// componentwise distance between jets at a common base point
double jet_residual(const JetOfSection& a, const JetOfSection& b);
double jet_residual(const SecondJetOfSection& a, const SecondJetOfSection& b);
bool jets_equal(const JetOfSection& a, const JetOfSection& b, double tol = kJetEqTol);
bool jets_equal(const SecondJetOfSection& a, const SecondJetOfSection& b,
                double tol = kJetEqTol);

}  // namespace gjet
