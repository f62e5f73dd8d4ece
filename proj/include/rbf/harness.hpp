#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rbf/bkm.hpp"
#include "rbf/bpm.hpp"
#include "rbf/fkm.hpp"
#include "rbf/interp.hpp"
#include "rbf/mkm.hpp"
#include "rbf/problem.hpp"

namespace rbf {

// ---------------------------------------------------------------------------
// Plain Kansa baseline
// ---------------------------------------------------------------------------

struct KansaSolution {
  OperatorSpec op = OperatorSpec::laplace();
  Kernel kernel = Kernel::tps(3);
  NodeSet nodes;
  Vector gamma;  // L+N value-source coefficients
  double symmetry_defect = 0.0;
  double condition = 0.0;
  double residual = 0.0;
};

/// Unsymmetric collocation: boundary conditions at the boundary nodes, the
/// governing equation at the interior nodes.
KansaSolution kansa_solve(const ProblemSpec& problem, const NodeSet& nodes,
                          const Kernel& kernel);
double kansa_evaluate(const KansaSolution& sol, Point2 x);

// ---------------------------------------------------------------------------
// Metrics and manufactured cases
// ---------------------------------------------------------------------------

struct ErrorMetrics {
  double rmse = 0.0;
  double max_error = 0.0;
  double relative_l2 = 0.0;
};

ErrorMetrics error_metrics(const std::function<double(Point2)>& numeric,
                           const std::function<double(Point2)>& exact,
                           const std::vector<Point2>& points);

/// Fixed interior evaluation set (Halton) used by all error reports.
std::vector<Point2> test_points(const Domain& domain, int count = 100);

/// Manufactured solution families: the exact solution plus analytically
/// applied source and iterates.
enum class SolutionFamily { cos_ax, exp_x, quadratic };

ProblemSpec make_manufactured(const OperatorSpec& op, const Domain& domain,
                              SolutionFamily family, double parameter = 1.0);

/// FD sanity check of the supplied operator iterates at 20 seeded points.
/// Throws ValidationError on inconsistency beyond 1e-3 relative.
void validate_source_iterates(const ProblemSpec& problem,
                              unsigned seed = 20240817);

struct CaseEntry {
  std::string id;
  std::string description;
  ProblemSpec problem;
};

const std::vector<CaseEntry>& case_catalog();
const CaseEntry& find_case(const std::string& id);

// ---------------------------------------------------------------------------
// Run configuration and reports
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string case_id;  // empty when custom
  std::optional<ProblemSpec> custom;
  std::string method = "bkm";  // bkm | bpm | mkm | kansa | fkm
  std::string variant;         // per-method variant name
  std::string kernel_kind;     // tps | laplace-fundamental (default per method)
  int kernel_order = 3;
  int boundary_nodes = 16;
  int interior_nodes = 25;
  double bc_split = 1.0;
  std::string interior_strategy = "uniform";  // uniform | halton
  int truncation = 2;      // bpm M
  double rho = 2.5;        // bpm1 inflation
  bool mixed_tail = false;
  int partition_x = 1, partition_y = 1;  // fkm
  std::string continuity = "c0";
  int fkm_per_edge = 3, fkm_interior_x = 2, fkm_interior_y = 2;
  std::string output;  // CSV path; empty = stdout only
  std::vector<std::string> checks;
  std::string source_text;  // original config text, echoed into reports
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

struct ConsistencyCheck {
  std::string name;
  double max_difference = 0.0;
  bool pass = false;
};

struct RunReport {
  std::string method;
  std::string case_id;
  int boundary_count = 0;
  int interior_count = 0;
  int dirichlet_count = 0;
  int dimension = 0;
  ErrorMetrics errors;
  bool has_exact = false;
  double nodal_residual = 0.0;
  double symmetry_defect = 0.0;
  double condition = 0.0;
  double elapsed_seconds = 0.0;
  std::vector<ConsistencyCheck> checks;
};

RunReport run_case(const RunConfig& config);

/// One diagnostics row: dimensions, symmetry defect, condition estimate and
/// centrosymmetry defect of the assembled system matrix.
struct MatrixReport {
  std::string method;
  int dimension = 0;
  double symmetry_defect = 0.0;
  double centrosymmetry_defect = 0.0;
  double condition = 0.0;
};

MatrixReport matrix_report(const RunConfig& config);

// CSV emission (RFC 4180, one header row, deterministic formatting).
std::string report_csv(const RunReport& report);
std::string sweep_csv(const RunConfig& config, const std::vector<int>& counts);
std::string matrix_report_csv(const RunConfig& config);
std::string field_csv(const RunConfig& config);

/// Scattered-data interpolation driver: whitespace-separated columns
/// x y u [nx ny q]; 6-column lines are boundary rows. Returns the CSV.
std::string interp_file_csv(const std::string& data_text, const Kernel& kernel);

std::string format_double(double v);

}  // namespace rbf
