// Degree-bounded polynomials in up to 3 chart variables, used as the smooth
// programs fed to the jet machinery, plus an exact symbolic-derivative
// oracle for tests.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "gjet/taylor.hpp"

namespace gjet {

struct Monomial {
  std::array<int, 3> exps{0, 0, 0};  // exponents, unused vars stay 0
  double coeff = 0.0;
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  int nvars() const { return nvars_; }
  void add_term(const std::array<int, 3>& exps, double coeff);
  const std::vector<Monomial>& terms() const { return terms_; }

  TaylorScalar eval(const TaylorVector& x) const;
  double eval_value(const Eigen::VectorXd& x) const;

  // exact d/dx_k
  Polynomial derivative(int k) const;

  static Polynomial constant(int nvars, double c);

 private:
  int nvars_ = 0;
  std::vector<Monomial> terms_;
};

// all exponent multi-indices with total degree <= deg in nvars variables
std::vector<std::array<int, 3>> monomials_up_to(int nvars, int deg);

// deterministic xorshift-style generator; identical streams across platforms
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);
  double normal();                        // Box-Muller, no cached spare
  Eigen::VectorXd uniform_vec(int n, double lo, double hi);
};

uint64_t splitmix64(uint64_t x);

Polynomial random_polynomial(Rng& rng, int nvars, int deg, double scale);

}  // namespace gjet
