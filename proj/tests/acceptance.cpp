// End-to-end acceptance run. Each criterion prints one pass/fail line with
// its measured residual and pinned tolerance; the process exits nonzero if
// any criterion fails.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "gjet/harness.hpp"

using namespace gjet;

namespace {

int failures = 0;

void report(int idx, const std::string& what, bool pass, double value, double tol,
            double seconds) {
  std::printf("[%s] criterion %d: %s (max %.3e, tol %.0e, %.1f s)\n",
              pass ? "PASS" : "FAIL", idx, what.c_str(), value, tol, seconds);
  if (!pass) ++failures;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

Scenario scenario(const std::string& group, const std::string& fiber, int n,
                  int trials, uint64_t seed) {
  Scenario s;
  s.group_kind = group;
  s.fiber_kind = fiber;
  s.n = n;
  s.trials = trials;
  s.seed = seed;
  s.conventions_path = "acceptance_conventions.json";
  return s;
}

double run_pass(const std::string& suite, const Scenario& scn,
                std::optional<Conventions>& conv, bool& ok, double tol) {
  SuiteResult r = run_suite(suite, scn, conv);
  ok = ok && r.pass && r.tolerance <= tol;
  return r.max_residual;
}

}  // namespace

int main() {
  std::optional<Conventions> conv;

  // criterion 1: algebraic axioms across groups and base dimensions
  {
    Timer t;
    bool ok = true;
    double worst = 0.0;
    for (const std::string& group : {std::string("U1"), std::string("SO3")})
      for (int n : {1, 2}) {
        Scenario s = scenario(group, "linear", n, 500, 101 + n);
        worst = std::max(worst, run_pass("axioms", s, conv, ok, 1e-12));
      }
    double secs = t.seconds();
    ok = ok && worst <= 1e-12 && secs <= 30.0;
    report(1, "algebraic axioms (gauge groupoid, jet composition, jet group, fiber actions)",
           ok, worst, 1e-12, secs);
  }

  // criterion 2: first-order difference-map equivariance
  {
    Timer t;
    bool ok = true;
    double worst = 0.0;
    for (const std::string& group : {std::string("U1"), std::string("SO3")}) {
      Scenario s = scenario(group, "linear", 2, 300, 211);
      worst = std::max(worst, run_pass("prop21", s, conv, ok, 1e-10));
    }
    ok = ok && worst <= 1e-10;
    report(2, "first-order difference map equivariance (600 trials)", ok, worst, 1e-10,
           t.seconds());
  }

  // criterion 3: second-order difference maps, alternator, preservation flags
  {
    Timer t;
    bool ok = true;
    double worst = 0.0;
    for (const std::string& group : {std::string("U1"), std::string("SO3")}) {
      Scenario s = scenario(group, "linear", 2, 200, 307);
      worst = std::max(worst, run_pass("prop22", s, conv, ok, 1e-9));
    }
    ok = ok && worst <= 1e-9;
    report(3, "second-order difference/alternator equivariance + flags (400 trials)",
           ok, worst, 1e-9, t.seconds());
  }

  // ledger must exist before the sign-sensitive suites
  {
    Scenario s = scenario("SO3", "linear", 2, 8, 401);
    pin_conventions(s);
    conv = Conventions::load(s.conventions_path);
    if (!conv || !conv->pinned()) {
      std::printf("[FAIL] convention pinning did not produce a usable ledger\n");
      return 1;
    }
  }

  // criterion 4: minimal coupling and curvature equivariance
  {
    Timer t;
    bool ok = true;
    double worst = 0.0;
    const std::vector<std::pair<std::string, std::string>> configs{
        {"U1", "linear"}, {"U1", "adjoint"}, {"SO3", "linear"}, {"SO3", "adjoint"}};
    for (const auto& [group, fiber] : configs) {
      Scenario s = scenario(group, fiber, 2, 130, 419);
      worst = std::max(worst, run_pass("thm41", s, conv, ok, 1e-9));
      worst = std::max(worst, run_pass("thm42", s, conv, ok, 1e-9));
    }
    ok = ok && worst <= 1e-9;
    report(4, "minimal-coupling and curvature equivariance (520 scenarios each)", ok,
           worst, 1e-9, t.seconds());
  }

  // criterion 5: curvature oracle equivalence with one pinned sign
  {
    Timer t;
    bool ok = conv->curvature_sign == -1 || conv->curvature_sign == +1;
    double worst = 0.0;
    const double s = static_cast<double>(conv->curvature_sign);

    // (a) exact pure-bracket case for a constant non-abelian potential
    {
      GroupPtr so3 = make_so(3);
      Rng rng(503ull);
      for (int rep = 0; rep < 50; ++rep) {
        AlgebraLinearMap c = random_algebra_map(so3, rng, 2, 0.9);
        ConnectionJet cj{Eigen::Vector2d(0.1, -0.2), c, AlgebraBilinearMap(so3, 2)};
        Eigen::MatrixXd br = c.cols[0] * c.cols[1] - c.cols[1] * c.cols[0];
        worst = std::max(worst,
                         (curvature_from_jet(cj).F.at(0, 1) - s * br).cwiseAbs().maxCoeff());
      }
    }
    // (b) unit coefficient for the single-generator potential
    {
      GroupPtr u1 = make_u1();
      ConnectionJet cj{Eigen::Vector2d::Zero(), AlgebraLinearMap(u1, 2),
                       AlgebraBilinearMap(u1, 2)};
      cj.dA.at(0, 1) = u1->basis()[0];
      CurvatureValue f = curvature_from_jet(cj);
      worst = std::max(worst, (f.F.at(0, 1) - s * u1->basis()[0]).cwiseAbs().maxCoeff());
      worst = std::max(worst, std::abs(f.F.at(0, 1).cwiseAbs().maxCoeff() -
                                       u1->basis()[0].cwiseAbs().maxCoeff()));
    }
    // (c) flat pure-gauge potentials, plus the randomized oracle suites
    for (const std::string& group : {std::string("U1"), std::string("SO3")}) {
      Scenario sc = scenario(group, "linear", 2, 200, 521);
      worst = std::max(worst, run_pass("curvature_oracle", sc, conv, ok, 1e-9));
    }
    ok = ok && worst <= 1e-9;
    report(5, "curvature oracle: bracket case, unit coefficient, pure gauge", ok, worst,
           1e-9, t.seconds());
  }

  // criterion 6: the identification with the prolonged gauge groupoid
  {
    Timer t;
    bool ok = true;
    double worst = 0.0;
    for (const std::string& group : {std::string("U1"), std::string("SO3")}) {
      Scenario s = scenario(group, "linear", 2, 500, 601);
      worst = std::max(worst, run_pass("appendix", s, conv, ok, 1e-10));
    }
    ok = ok && worst <= 1e-10;
    report(6, "prolonged gauge groupoid identification (invariance, inverse, morphisms)",
           ok, worst, 1e-10, t.seconds());
  }

  // criterion 7: forward-jet arithmetic against finite differences and the
  // symbolic polynomial oracle
  {
    Timer t;
    double fd_worst = 0.0, sym_worst = 0.0;
    Rng rng(701ull);
    for (int n = 1; n <= 3; ++n)
      for (int rep = 0; rep < 25; ++rep) {
        Polynomial p = random_polynomial(rng, n, 4, 0.8);
        SmoothMap f{n, 1, [p](const TaylorVector& x) { return TaylorVector{p.eval(x)}; }};
        Eigen::VectorXd x = rng.uniform_vec(n, -0.8, 0.8);
        fd_worst = std::max(fd_worst, finite_difference_check(f, x, 1e-4).max_residual);
        MapJet2 jet = extract_jet2(f, x);
        for (int i = 0; i < n; ++i) {
          Polynomial di = p.derivative(i);
          sym_worst = std::max(sym_worst, std::abs(jet.jac(0, i) - di.eval_value(x)));
          for (int j = 0; j < n; ++j)
            sym_worst = std::max(sym_worst, std::abs(jet.hess[0](i, j) -
                                                     di.derivative(j).eval_value(x)));
        }
      }
    bool ok = fd_worst <= 1e-6 && sym_worst <= 1e-12;
    report(7, "taylor jets vs finite differences and the symbolic oracle", ok,
           std::max(fd_worst, sym_worst * 1e6 / 1e12), 1e-6, t.seconds());
  }

  // criterion 8: byte-identical reports for identical config and seed
  {
    Timer t;
    Scenario s = scenario("U1", "linear", 2, 20, 801);
    s.suites = {"all"};
    Report a = run_scenario(s);
    Report b = run_scenario(s);
    bool ok = emit_json(a) == emit_json(b) && a.all_pass;
    report(8, "deterministic byte-identical reports", ok, ok ? 0.0 : 1.0, 1.0,
           t.seconds());
  }

  if (failures == 0) std::printf("acceptance: all 8 criteria passed\n");
  else std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
