// Scenario configuration, randomized verification suites for the groupoid
// equivariance statements, the convention-pinning procedure and report
// serialization.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gjet/connections.hpp"
#include "gjet/prolongation.hpp"

namespace gjet {

struct Scenario {
  int n = 1;
  std::string group_kind = "U1";
  int gl_size = 2;
  std::string fiber_kind = "linear";
  int deg_beta = 2;
  int deg_phi = 2;
  int deg_A = 2;
  int trials = 100;
  uint64_t seed = 1;
  double tol_axioms = 1e-12;
  double tol_diagram_first = 1e-10;
  double tol_diagram_second = 1e-9;
  double tol_rel = 1e-9;
  std::vector<std::string> suites{"all"};
  std::string conventions_path = "conventions.json";

  void validate() const;
  static Scenario from_json_text(const std::string& text);
  static Scenario from_json_file(const std::string& path);
  std::string to_json_text() const;

  GroupPtr make_group() const;
  FiberSpace make_fiber(const GroupPtr& g) const;
};

// empirically pinned sign/factor choices; written by pin_conventions and
// consumed by the sign-sensitive suites
struct Conventions {
  double alternator_factor = kAlternatorFactor;
  int curvature_sign = 0;            // 0 = unpinned
  int covariant_derivative_sign = 0;

  bool pinned() const { return curvature_sign != 0 && covariant_derivative_sign != 0; }
  std::string to_json_text() const;
  static Conventions from_json_text(const std::string& text);
  void save(const std::string& path) const;
  static std::optional<Conventions> load(const std::string& path);
};

struct SuiteResult {
  std::string name;
  int trials = 0;
  double tolerance = 0.0;
  std::vector<double> residuals;  // one per trial
  double max_residual = 0.0;
  double mean_residual = 0.0;
  bool pass = false;
};

struct Report {
  Scenario config;
  std::optional<Conventions> conventions;
  std::vector<SuiteResult> suites;
  bool all_pass = true;
  double wall_ms = 0.0;  // console only, never serialized
};

const std::vector<std::string>& known_suites();

// runs one suite; pin_conventions also writes the ledger file
SuiteResult run_suite(const std::string& name, const Scenario& scn,
                      std::optional<Conventions>& conventions);
// runs the scenario's suite list ("all" expands in ledger-first order)
Report run_scenario(const Scenario& scn);

// determines curvature/covariant-derivative signs against closed-form
// oracles; throws if no single assignment passes everything
Conventions pin_conventions(const Scenario& scn, SuiteResult* result = nullptr);

std::string emit_json(const Report& report);
std::string emit_csv(const Report& report);
Report parse_report(const std::string& json_text);
bool report_equal(const Report& a, const Report& b);

double rel_residual(double diff, double scale_a, double scale_b);

}  // namespace gjet
