#include "rbf/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace rbf {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Kansa baseline
// ---------------------------------------------------------------------------

KansaSolution kansa_solve(const ProblemSpec& problem, const NodeSet& nodes,
                          const Kernel& kernel) {
  const KernelEntries entries(problem.op, kernel);
  const int l = nodes.boundary_count();
  const auto all = nodes.all_positions();
  const int total = static_cast<int>(all.size());

  Matrix a(total, total);
  Vector rhs(total);
  for (int row = 0; row < total; ++row) {
    Point2 x;
    int functional;  // 0 value, 1 normal, 2 operator
    Vec2 nx{0, 0};
    if (row < l) {
      const auto& node = nodes.boundary[row];
      x = node.position;
      functional = node.bc == BcKind::dirichlet ? 0 : 1;
      nx = node.normal;
      rhs[row] = node.bc_value;
    } else {
      x = all[row];
      functional = 2;
      rhs[row] = problem.source_at(x);
    }
    for (int k = 0; k < total; ++k) {
      switch (functional) {
        case 0: a(row, k) = entries.value(x, all[k]); break;
        case 1: a(row, k) = entries.d_field(x, all[k], nx); break;
        default: a(row, k) = entries.op_field(x, all[k]);
      }
    }
  }

  SolveReport report = solve_dense(a, rhs);
  KansaSolution sol;
  sol.op = problem.op;
  sol.kernel = kernel;
  sol.nodes = nodes;
  sol.gamma = report.solution.col(0);
  sol.symmetry_defect = symmetry_defect(a);
  sol.condition = report.condition;
  sol.residual = report.residual_norm;
  return sol;
}

double kansa_evaluate(const KansaSolution& sol, Point2 x) {
  const KernelEntries entries(sol.op, sol.kernel);
  const auto all = sol.nodes.all_positions();
  double sum = 0.0;
  for (std::size_t k = 0; k < all.size(); ++k)
    sum += sol.gamma[k] * entries.value(x, all[k]);
  return sum;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

ErrorMetrics error_metrics(const std::function<double(Point2)>& numeric,
                           const std::function<double(Point2)>& exact,
                           const std::vector<Point2>& points) {
  if (points.empty()) throw ValidationError("error metrics need test points");
  double sq = 0.0, max_err = 0.0, exact_sq = 0.0;
  for (const auto& p : points) {
    const double diff = numeric(p) - exact(p);
    sq += diff * diff;
    exact_sq += exact(p) * exact(p);
    max_err = std::max(max_err, std::abs(diff));
  }
  ErrorMetrics m;
  m.rmse = std::sqrt(sq / points.size());
  m.max_error = max_err;
  m.relative_l2 = sq == 0.0 ? 0.0 : std::sqrt(sq / std::max(exact_sq, 1e-300));
  return m;
}

std::vector<Point2> test_points(const Domain& domain, int count) {
  return generate_interior_nodes(domain, count, InteriorStrategy::halton);
}

// ---------------------------------------------------------------------------
// Manufactured problems
// ---------------------------------------------------------------------------

namespace {

using Fn = std::function<double(Point2)>;

// Geometric iterate family: L f = ratio * f.
std::vector<Fn> geometric_iterates(const Fn& f, double ratio, int count) {
  std::vector<Fn> out;
  double factor = 1.0;
  for (int j = 0; j < count; ++j) {
    out.push_back([f, factor](Point2 p) { return factor * f(p); });
    factor *= ratio;
  }
  return out;
}

}  // namespace

ProblemSpec make_manufactured(const OperatorSpec& op, const Domain& domain,
                              SolutionFamily family, double parameter) {
  ProblemSpec problem;
  problem.op = op;
  problem.domain = domain;

  Fn u;
  std::function<Vec2(Point2)> grad;
  switch (family) {
    case SolutionFamily::cos_ax: {
      const double a = parameter;
      u = [a](Point2 p) { return std::cos(a * p.x); };
      grad = [a](Point2 p) { return Vec2{-a * std::sin(a * p.x), 0.0}; };
      break;
    }
    case SolutionFamily::exp_x:
      u = [](Point2 p) { return std::exp(p.x); };
      grad = [](Point2 p) { return Vec2{std::exp(p.x), 0.0}; };
      break;
    case SolutionFamily::quadratic:
      u = [](Point2 p) { return p.x * p.x + p.y * p.y; };
      grad = [](Point2 p) { return Vec2{2 * p.x, 2 * p.y}; };
      break;
  }
  problem.exact = u;
  problem.exact_gradient = grad;
  problem.dirichlet_data = u;
  problem.neumann_data = [grad](Point2 p, Vec2 n) { return grad(p).dot(n); };

  // Source and its iterates by analytic application of the operator.
  const auto kind = op.kind();
  if (family != SolutionFamily::quadratic) {
    // u is a 1D eigenfunction of the Laplacian: lap u = mu * u.
    const double mu = family == SolutionFamily::cos_ax
                          ? -parameter * parameter
                          : 1.0;
    double ratio = 0.0;
    bool homogeneous = false;
    Fn f;
    switch (kind) {
      case OperatorSpec::Kind::laplace:
        ratio = mu;
        f = [u, mu](Point2 p) { return mu * u(p); };
        homogeneous = mu == 0.0;
        break;
      case OperatorSpec::Kind::helmholtz: {
        const double c = mu + op.lambda() * op.lambda();
        ratio = c;
        f = [u, c](Point2 p) { return c * u(p); };
        homogeneous = c == 0.0;
        break;
      }
      case OperatorSpec::Kind::modified_helmholtz: {
        const double c = mu - op.lambda() * op.lambda();
        ratio = c;
        f = [u, c](Point2 p) { return c * u(p); };
        homogeneous = c == 0.0;
        break;
      }
      case OperatorSpec::Kind::convection_diffusion: {
        const auto cf = op.coefficient_form();
        const Vec2 v = cf.v;
        const double d = cf.d, k = cf.k;
        f = [u, grad, v, d, k, mu](Point2 p) {
          return d * mu * u(p) - v.dot(grad(p)) - k * u(p);
        };
        break;
      }
      case OperatorSpec::Kind::variable_helmholtz: {
        const ScalarField s = op.field();
        f = [u, s, mu](Point2 p) { return (mu + s.value(p)) * u(p); };
        break;
      }
    }
    if (!homogeneous && f) {
      if (ratio != 0.0 || kind == OperatorSpec::Kind::laplace)
        problem.source_iterates = geometric_iterates(f, ratio, 8);
      else
        problem.source_iterates = {f};
    }
  } else {
    // u = x^2 + y^2; span{1, u} is invariant under the constant-coefficient
    // operators: L 1 = kappa, L u = 4 + kappa u.
    double kappa = 0.0;
    bool supported = true;
    switch (kind) {
      case OperatorSpec::Kind::laplace: kappa = 0.0; break;
      case OperatorSpec::Kind::helmholtz: kappa = op.lambda() * op.lambda(); break;
      case OperatorSpec::Kind::modified_helmholtz:
        kappa = -op.lambda() * op.lambda();
        break;
      default: supported = false;
    }
    if (supported) {
      double c0 = 4.0, c1 = kappa;  // f = 4 + kappa u
      for (int j = 0; j < 8; ++j) {
        problem.source_iterates.push_back(
            [c0, c1](Point2 p) { return c0 + c1 * (p.x * p.x + p.y * p.y); });
        const double n0 = kappa * c0 + 4.0 * c1;
        const double n1 = kappa * c1;
        c0 = n0;
        c1 = n1;
      }
      // Pure Laplace: iterates vanish after the first.
      if (kind == OperatorSpec::Kind::laplace)
        problem.source_iterates.resize(1);
    } else if (kind == OperatorSpec::Kind::convection_diffusion) {
      const auto cf = op.coefficient_form();
      problem.source_iterates = {[cf](Point2 p) {
        const Vec2 g{2 * p.x, 2 * p.y};
        return cf.d * 4.0 - cf.v.dot(g) - cf.k * (p.x * p.x + p.y * p.y);
      }};
    } else {
      const ScalarField s = op.field();
      problem.source_iterates = {[s](Point2 p) {
        return 4.0 + s.value(p) * (p.x * p.x + p.y * p.y);
      }};
    }
  }

  return problem;
}

// ---------------------------------------------------------------------------
// Iterate sanity check
// ---------------------------------------------------------------------------

namespace {

double fd_apply(const OperatorSpec& op, const Fn& f, Point2 p, double h) {
  const double fxx = (f({p.x + h, p.y}) - 2 * f(p) + f({p.x - h, p.y})) / (h * h);
  const double fyy = (f({p.x, p.y + h}) - 2 * f(p) + f({p.x, p.y - h})) / (h * h);
  const double lap = fxx + fyy;
  switch (op.kind()) {
    case OperatorSpec::Kind::laplace:
      return lap;
    case OperatorSpec::Kind::helmholtz:
      return lap + op.lambda() * op.lambda() * f(p);
    case OperatorSpec::Kind::modified_helmholtz:
      return lap - op.lambda() * op.lambda() * f(p);
    case OperatorSpec::Kind::convection_diffusion: {
      const auto cf = op.coefficient_form();
      const double fx = (f({p.x + h, p.y}) - f({p.x - h, p.y})) / (2 * h);
      const double fy = (f({p.x, p.y + h}) - f({p.x, p.y - h})) / (2 * h);
      return cf.d * lap - cf.v.x * fx - cf.v.y * fy - cf.k * f(p);
    }
    case OperatorSpec::Kind::variable_helmholtz:
      return lap + op.field().value(p) * f(p);
  }
  return 0.0;
}

}  // namespace

void validate_source_iterates(const ProblemSpec& problem, unsigned seed) {
  if (problem.source_iterates.size() < 2) return;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Point2 c = problem.domain.centroid();
  const double r = 0.25 * problem.domain.diameter();
  for (int trial = 0; trial < 20; ++trial) {
    const double ang = 2 * 3.14159265358979323846 * unit(rng);
    const double rad = r * std::sqrt(unit(rng));
    const Point2 p{c.x + rad * std::cos(ang), c.y + rad * std::sin(ang)};
    for (std::size_t j = 0; j + 1 < problem.source_iterates.size(); ++j) {
      const double expected = problem.source_iterates[j + 1](p);
      const double fd = fd_apply(problem.op, problem.source_iterates[j], p, 1e-4);
      const double scale = std::max({1.0, std::abs(expected), std::abs(fd)});
      if (std::abs(fd - expected) > 1e-3 * scale)
        throw ValidationError("source iterates inconsistent with operator");
    }
  }
}

// ---------------------------------------------------------------------------
// Case catalog
// ---------------------------------------------------------------------------

namespace {

ScalarField one_plus_x2_field() {
  ScalarField s;
  s.value = [](Point2 p) { return 1.0 + p.x * p.x; };
  s.gradient = [](Point2 p) { return Vec2{2.0 * p.x, 0.0}; };
  s.laplacian = [](Point2) { return 2.0; };
  return s;
}

std::vector<CaseEntry> build_catalog() {
  std::vector<CaseEntry> cases;
  const Domain unit_circle = Domain::circle({0, 0}, 1.0);
  const Domain unit_square = Domain::rectangle({0, 0}, {1, 1});

  cases.push_back({"helmholtz-circle-cos",
                   "Helmholtz lambda=2, u = cos(2x), unit circle, f = 0",
                   make_manufactured(OperatorSpec::helmholtz(2.0), unit_circle,
                                     SolutionFamily::cos_ax, 2.0)});
  cases.push_back({"helmholtz-square-cos",
                   "Helmholtz lambda=1, u = cos(x), unit square, f = 0",
                   make_manufactured(OperatorSpec::helmholtz(1.0), unit_square,
                                     SolutionFamily::cos_ax, 1.0)});
  cases.push_back({"modhelmholtz-square-exp",
                   "Modified Helmholtz lambda=1, u = exp(x), unit square, f = 0",
                   make_manufactured(OperatorSpec::modified_helmholtz(1.0),
                                     unit_square, SolutionFamily::exp_x)});
  cases.push_back({"modhelmholtz-circle-exp",
                   "Modified Helmholtz lambda=1, u = exp(x), unit circle, f = 0",
                   make_manufactured(OperatorSpec::modified_helmholtz(1.0),
                                     unit_circle, SolutionFamily::exp_x)});
  cases.push_back({"laplace-circle-poly0",
                   "Laplace, f = 4, u = x^2 + y^2, unit circle",
                   make_manufactured(OperatorSpec::laplace(), unit_circle,
                                     SolutionFamily::quadratic)});

  {
    // Laplace with a degree-2 source: u = (x^4 + y^4)/12 + xy.
    ProblemSpec p;
    p.op = OperatorSpec::laplace();
    p.domain = unit_circle;
    p.exact = [](Point2 q) {
      return (std::pow(q.x, 4) + std::pow(q.y, 4)) / 12.0 + q.x * q.y;
    };
    p.exact_gradient = [](Point2 q) {
      return Vec2{std::pow(q.x, 3) / 3.0 + q.y, std::pow(q.y, 3) / 3.0 + q.x};
    };
    p.dirichlet_data = p.exact;
    p.neumann_data = [g = p.exact_gradient](Point2 q, Vec2 n) {
      return g(q).dot(n);
    };
    p.source_iterates = {
        [](Point2 q) { return q.x * q.x + q.y * q.y; },
        [](Point2) { return 4.0; },
    };
    cases.push_back({"laplace-circle-poly2",
                     "Laplace, f = x^2 + y^2 (degree 2), unit circle", p});
  }
  {
    // Laplace with a degree-4 source: u = (x^6 + y^6)/30 + x^3 - 3 x y^2.
    ProblemSpec p;
    p.op = OperatorSpec::laplace();
    p.domain = unit_circle;
    p.exact = [](Point2 q) {
      return (std::pow(q.x, 6) + std::pow(q.y, 6)) / 30.0 + std::pow(q.x, 3) -
             3.0 * q.x * q.y * q.y;
    };
    p.exact_gradient = [](Point2 q) {
      return Vec2{std::pow(q.x, 5) / 5.0 + 3.0 * q.x * q.x - 3.0 * q.y * q.y,
                  std::pow(q.y, 5) / 5.0 - 6.0 * q.x * q.y};
    };
    p.dirichlet_data = p.exact;
    p.neumann_data = [g = p.exact_gradient](Point2 q, Vec2 n) {
      return g(q).dot(n);
    };
    p.source_iterates = {
        [](Point2 q) { return std::pow(q.x, 4) + std::pow(q.y, 4); },
        [](Point2 q) { return 12.0 * (q.x * q.x + q.y * q.y); },
        [](Point2) { return 48.0; },
    };
    cases.push_back({"laplace-circle-poly4",
                     "Laplace, f = x^4 + y^4 (degree 4), unit circle", p});
  }
  {
    // Helmholtz lambda = 1/2 with constant source f = 1; u = 4 + cos(x/2).
    ProblemSpec p;
    p.op = OperatorSpec::helmholtz(0.5);
    p.domain = unit_circle;
    p.exact = [](Point2 q) { return 4.0 + std::cos(0.5 * q.x); };
    p.exact_gradient = [](Point2 q) {
      return Vec2{-0.5 * std::sin(0.5 * q.x), 0.0};
    };
    p.dirichlet_data = p.exact;
    p.neumann_data = [g = p.exact_gradient](Point2 q, Vec2 n) {
      return g(q).dot(n);
    };
    const double l2 = 0.25;  // lambda^2
    for (int j = 0; j < 8; ++j) {
      const double factor = std::pow(l2, j);
      p.source_iterates.push_back([factor](Point2) { return factor; });
    }
    cases.push_back({"helmholtz-circle-f1",
                     "Helmholtz lambda=1/2, f = 1, unit circle", p});
  }
  cases.push_back(
      {"convdiff-square-exp",
       "Convection-diffusion D=1, v=(1,0), k=1, u = exp(x/2) cos(y/2)",
       [&] {
         ProblemSpec p;
         p.op = OperatorSpec::convection_diffusion(1.0, {1.0, 0.0}, 1.0);
         p.domain = unit_square;
         p.exact = [](Point2 q) {
           return std::exp(0.5 * q.x) * std::cos(0.5 * q.y);
         };
         p.exact_gradient = [](Point2 q) {
           return Vec2{0.5 * std::exp(0.5 * q.x) * std::cos(0.5 * q.y),
                       -0.5 * std::exp(0.5 * q.x) * std::sin(0.5 * q.y)};
         };
         p.dirichlet_data = p.exact;
         p.neumann_data = [g = p.exact_gradient](Point2 q, Vec2 n) {
           return g(q).dot(n);
         };
         p.source_iterates = {[e = p.exact](Point2 q) { return -1.5 * e(q); }};
         return p;
       }()});
  cases.push_back({"varhelmholtz-square-cos",
                   "Variable Helmholtz S = 1 + x^2, u = cos(x), unit square",
                   make_manufactured(OperatorSpec::variable_helmholtz(
                                         one_plus_x2_field()),
                                     unit_square, SolutionFamily::cos_ax, 1.0)});
  return cases;
}

}  // namespace

const std::vector<CaseEntry>& case_catalog() {
  static const std::vector<CaseEntry> catalog = build_catalog();
  return catalog;
}

const CaseEntry& find_case(const std::string& id) {
  for (const auto& entry : case_catalog())
    if (entry.id == id) return entry;
  throw ValidationError("config field 'case': unknown case id '" + id + "'");
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

OperatorSpec parse_operator(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "laplace") return OperatorSpec::laplace();
  if (kind == "helmholtz") return OperatorSpec::helmholtz(j.value("lambda", 1.0));
  if (kind == "modified-helmholtz")
    return OperatorSpec::modified_helmholtz(j.value("lambda", 1.0));
  if (kind == "convection-diffusion") {
    const auto v = j.value("velocity", std::vector<double>{0.0, 0.0});
    if (v.size() != 2)
      throw ValidationError("config field 'problem.operator.velocity': need 2 entries");
    return OperatorSpec::convection_diffusion(j.value("diffusivity", 1.0),
                                              {v[0], v[1]},
                                              j.value("reaction", 0.0));
  }
  if (kind == "variable-helmholtz") {
    const std::string field = j.value("field", "one-plus-x2");
    if (field != "one-plus-x2")
      throw ValidationError("config field 'problem.operator.field': unknown field '" +
                            field + "'");
    return OperatorSpec::variable_helmholtz(one_plus_x2_field());
  }
  throw ValidationError("config field 'problem.operator.kind': unknown kind '" +
                        kind + "'");
}

Domain parse_domain(const json& j) {
  const std::string kind = j.value("kind", "");
  auto point = [&](const char* name, std::vector<double> fallback) -> Point2 {
    const auto v = j.value(name, fallback);
    if (v.size() != 2)
      throw ValidationError(std::string("config field 'problem.domain.") + name +
                            "': need 2 entries");
    return {v[0], v[1]};
  };
  if (kind == "circle")
    return Domain::circle(point("center", {0, 0}), j.value("radius", 1.0));
  if (kind == "rectangle")
    return Domain::rectangle(point("lo", {0, 0}), point("hi", {1, 1}));
  if (kind == "ellipse")
    return Domain::ellipse(point("center", {0, 0}), j.value("a", 2.0),
                           j.value("b", 1.0));
  throw ValidationError("config field 'problem.domain.kind': unknown kind '" +
                        kind + "'");
}

ProblemSpec parse_custom_problem(const json& j) {
  if (!j.contains("operator"))
    throw ValidationError("config field 'problem.operator': missing");
  if (!j.contains("domain"))
    throw ValidationError("config field 'problem.domain': missing");
  const OperatorSpec op = parse_operator(j.at("operator"));
  const Domain domain = parse_domain(j.at("domain"));
  const json sol = j.value("solution", json{{"family", "cos-ax"}, {"a", 1.0}});
  const std::string family = sol.value("family", "cos-ax");
  if (family == "cos-ax")
    return make_manufactured(op, domain, SolutionFamily::cos_ax,
                             sol.value("a", 1.0));
  if (family == "exp-x")
    return make_manufactured(op, domain, SolutionFamily::exp_x);
  if (family == "quadratic")
    return make_manufactured(op, domain, SolutionFamily::quadratic);
  throw ValidationError("config field 'problem.solution.family': unknown family '" +
                        family + "'");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig config;
  config.source_text = j.dump();

  if (j.contains("case")) {
    config.case_id = j.at("case").get<std::string>();
    find_case(config.case_id);  // validates
  } else if (j.contains("problem")) {
    config.custom = parse_custom_problem(j.at("problem"));
  }
  // A config without case/problem is valid for the interp subcommand only;
  // config_problem raises when a solver actually needs one.

  config.method = j.value("method", "bkm");
  static const std::vector<std::string> methods{"bkm", "bpm", "mkm", "kansa",
                                                "fkm"};
  if (std::find(methods.begin(), methods.end(), config.method) == methods.end())
    throw ValidationError("config field 'method': unknown method '" +
                          config.method + "'");

  config.variant = j.value("variant", "");
  if (config.method == "bkm" && config.variant.empty()) config.variant = "symmetric";
  if (config.method == "bpm" && config.variant.empty()) config.variant = "bpm2";
  if (config.method == "mkm" && config.variant.empty()) config.variant = "symmetric";
  static const std::vector<std::string> variants{
      "",          "indirect", "symmetric", "direct",
      "bpm1",      "bpm2",     "zhang",     "symmetric"};
  if (std::find(variants.begin(), variants.end(), config.variant) ==
      variants.end())
    throw ValidationError("config field 'variant': unknown variant '" +
                          config.variant + "'");

  if (j.contains("kernel")) {
    const json& k = j.at("kernel");
    config.kernel_kind = k.value("kind", "tps");
    if (config.kernel_kind != "tps" && config.kernel_kind != "laplace-fundamental")
      throw ValidationError("config field 'kernel.kind': unknown kind '" +
                            config.kernel_kind + "'");
    config.kernel_order = k.value(config.kernel_kind == "tps" ? "k" : "j", 3);
  }

  if (j.contains("nodes")) {
    const json& n = j.at("nodes");
    config.boundary_nodes = n.value("L", 16);
    config.interior_nodes = n.value("N", 25);
    config.bc_split = n.value("bc_split", 1.0);
    config.interior_strategy = n.value("interior_strategy", "uniform");
    if (config.interior_strategy != "uniform" &&
        config.interior_strategy != "halton")
      throw ValidationError(
          "config field 'nodes.interior_strategy': unknown strategy '" +
          config.interior_strategy + "'");
    if (config.boundary_nodes < 4)
      throw ValidationError("config field 'nodes.L': must be at least 4");
    if (config.bc_split < 0.0 || config.bc_split > 1.0)
      throw ValidationError("config field 'nodes.bc_split': must lie in [0,1]");
  }

  if (j.contains("method_params")) {
    const json& m = j.at("method_params");
    config.truncation = m.value("M", 2);
    config.rho = m.value("rho", 2.5);
    config.mixed_tail = m.value("mixed_tail", false);
    if (m.contains("partition")) {
      const auto part = m.at("partition").get<std::vector<int>>();
      if (part.size() != 2)
        throw ValidationError(
            "config field 'method_params.partition': need [sx, sy]");
      config.partition_x = part[0];
      config.partition_y = part[1];
    }
    config.continuity = m.value("continuity", "c0");
    if (config.continuity != "c0" && config.continuity != "c1")
      throw ValidationError(
          "config field 'method_params.continuity': must be 'c0' or 'c1'");
    config.fkm_per_edge = m.value("per_edge", 3);
    config.fkm_interior_x = m.value("interior_x", 2);
    config.fkm_interior_y = m.value("interior_y", 2);
    if (config.truncation < 1)
      throw ValidationError("config field 'method_params.M': must be >= 1");
    if (config.rho <= 1.0)
      throw ValidationError("config field 'method_params.rho': must exceed 1");
  }

  config.output = j.value("output", "");
  if (j.contains("checks"))
    config.checks = j.at("checks").get<std::vector<std::string>>();
  for (const auto& check : config.checks) {
    if (check != "direct-vs-indirect" && check != "bpm-m1-vs-bkm" &&
        check != "fkm-1x1-vs-mkm")
      throw ValidationError("config field 'checks': unknown check '" + check +
                            "'");
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

namespace {

const ProblemSpec& config_problem(const RunConfig& config) {
  if (config.custom) return *config.custom;
  if (config.case_id.empty())
    throw ValidationError("config field 'case': missing (or supply 'problem')");
  return find_case(config.case_id).problem;
}

Kernel config_kernel(const RunConfig& config) {
  if (config.kernel_kind.empty()) return default_mkm_kernel();
  if (config.kernel_kind == "tps") return Kernel::tps(config.kernel_order);
  return Kernel::laplace_fundamental(config.kernel_order);
}

NodeSet config_nodes(const RunConfig& config, int boundary_override = 0) {
  const ProblemSpec& problem = config_problem(config);
  const int L = boundary_override > 0 ? boundary_override : config.boundary_nodes;
  auto boundary = generate_boundary_nodes(problem.domain, L, config.bc_split,
                                          problem.boundary_data());
  auto interior = generate_interior_nodes(
      problem.domain, config.interior_nodes,
      config.interior_strategy == "halton"
          ? InteriorStrategy::halton
          : InteriorStrategy::uniform_grid_filtered);
  return NodeSet::create(std::move(boundary), std::move(interior));
}

}  // namespace

RunReport run_case(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const ProblemSpec& problem = config_problem(config);
  RunReport report;
  report.method = config.method + (config.variant.empty() ? "" : "-" + config.variant);
  report.case_id = config.case_id.empty() ? "custom" : config.case_id;

  std::function<double(Point2)> field;

  if (config.method == "fkm") {
    const Partition partition = partition_rectangle(
        problem.domain, config.partition_x, config.partition_y,
        {config.fkm_per_edge, config.fkm_interior_x, config.fkm_interior_y,
         config.bc_split});
    FkmSolution sol = fkm_solve(problem, partition,
                                config.continuity == "c0" ? Continuity::c0
                                                          : Continuity::c1,
                                config_kernel(config));
    report.dimension = sol.dimension;
    report.condition = sol.condition;
    report.nodal_residual = sol.residual;
    int physical = 0, interior = 0, dirichlet = 0;
    for (const auto& node : partition.nodes) {
      if (node.physical) {
        ++physical;
        if (node.bc == BcKind::dirichlet) ++dirichlet;
      } else if (node.owners.size() == 1) {
        ++interior;
      }
    }
    report.boundary_count = physical;
    report.interior_count = interior;
    report.dirichlet_count = dirichlet;
    field = [sol](Point2 p) { return fkm_evaluate(sol, p); };
  } else {
    const NodeSet nodes = config_nodes(config);
    report.boundary_count = nodes.boundary_count();
    report.interior_count = nodes.interior_count();
    report.dirichlet_count = nodes.dirichlet_count();

    if (config.method == "bkm") {
      BkmSolution sol = config.variant == "indirect"
                            ? bkm_solve_indirect(problem, nodes)
                        : config.variant == "direct"
                            ? bkm_solve_direct(problem, nodes).second
                            : bkm_solve_symmetric(problem, nodes);
      report.dimension = nodes.boundary_count();
      report.condition = sol.condition;
      report.symmetry_defect = sol.symmetry_defect;
      report.nodal_residual = sol.boundary_residual;
      field = [sol](Point2 p) { return bkm_evaluate(sol, p); };
    } else if (config.method == "bpm") {
      const BpmVariant variant =
          config.variant == "bpm1" ? BpmVariant::bpm1 : BpmVariant::bpm2;
      BpmLadder ladder =
          config.mixed_tail
              ? bpm_mixed_tail(problem, nodes.boundary, nodes.interior,
                               config.truncation, variant, {config.rho})
              : bpm_solve(problem, nodes.boundary, config.truncation, variant,
                          {config.rho});
      report.dimension = nodes.boundary_count();
      report.condition = std::max(ladder.q_condition, ladder.order0_condition);
      report.symmetry_defect = ladder.order0_symmetry_defect;
      report.nodal_residual = ladder.boundary_residual;
      field = [ladder](Point2 p) { return bpm_evaluate(ladder, p); };
    } else if (config.method == "mkm") {
      if (config.variant == "direct") {
        // Recover the nodal field; report interpolated values through the
        // indirect expansion for off-node evaluation.
        MkmSolution sol = mkm_solve(problem, nodes, config_kernel(config),
                                    MkmVariant::symmetric);
        report.dimension = nodes.boundary_count() + nodes.boundary_count() +
                           nodes.interior_count();
        report.condition = sol.condition;
        report.symmetry_defect = sol.symmetry_defect;
        report.nodal_residual = sol.residual;
        field = [sol](Point2 p) { return mkm_evaluate(sol, p); };
      } else {
        MkmSolution sol = mkm_solve(problem, nodes, config_kernel(config),
                                    config.variant == "zhang"
                                        ? MkmVariant::zhang_unsymmetric
                                        : MkmVariant::symmetric);
        report.dimension = static_cast<int>(sol.beta.size() + sol.alpha.size());
        report.condition = sol.condition;
        report.symmetry_defect = sol.symmetry_defect;
        report.nodal_residual = sol.residual;
        field = [sol](Point2 p) { return mkm_evaluate(sol, p); };
      }
    } else if (config.method == "kansa") {
      KansaSolution sol = kansa_solve(problem, nodes, config_kernel(config));
      report.dimension = static_cast<int>(sol.gamma.size());
      report.condition = sol.condition;
      report.symmetry_defect = sol.symmetry_defect;
      report.nodal_residual = sol.residual;
      field = [sol](Point2 p) { return kansa_evaluate(sol, p); };
    } else {
      throw ValidationError("config field 'method': unknown method '" +
                            config.method + "'");
    }
  }

  if (problem.exact) {
    report.has_exact = true;
    report.errors =
        error_metrics(field, problem.exact, test_points(problem.domain, 100));
  }

  for (const auto& check : config.checks) {
    ConsistencyCheck result;
    result.name = check;
    const auto points = test_points(problem.domain, 50);
    if (check == "direct-vs-indirect") {
      const NodeSet nodes = config_nodes(config);
      auto solved = bkm_solve_direct(problem, nodes);
      const DirectBoundaryData& traces = solved.first;
      BkmSolution sym = bkm_solve_symmetric(problem, nodes);
      double diff = 0.0, scale = 1.0;
      int di = 0, ni = 0;
      for (const auto& b : nodes.boundary) {
        double recovered, reference;
        if (b.bc == BcKind::dirichlet) {
          recovered = traces.recovered_neumann[di++];
          reference = bkm_evaluate_normal(sym, b.position, b.normal);
        } else {
          recovered = traces.recovered_dirichlet[ni++];
          reference = bkm_evaluate(sym, b.position);
        }
        diff = std::max(diff, std::abs(recovered - reference));
        scale = std::max(scale, std::abs(reference));
      }
      result.max_difference = diff;
      result.pass = diff <= 1e-10 * scale;
    } else if (check == "bpm-m1-vs-bkm") {
      const NodeSet nodes = config_nodes(config);
      ProblemSpec homogeneous = problem;
      homogeneous.source_iterates.clear();
      BpmLadder ladder = bpm_solve(homogeneous, nodes.boundary, 1,
                                   BpmVariant::bpm2);
      NodeSet boundary_only = NodeSet::create(nodes.boundary, {});
      BkmSolution bkm = bkm_solve_symmetric(homogeneous, boundary_only);
      double diff = 0.0;
      for (const auto& p : points)
        diff = std::max(diff,
                        std::abs(bpm_evaluate(ladder, p) - bkm_evaluate(bkm, p)));
      result.max_difference = diff;
      result.pass = diff <= 1e-10;
    } else if (check == "fkm-1x1-vs-mkm") {
      const Partition partition = partition_rectangle(
          problem.domain, 1, 1,
          {config.fkm_per_edge, config.fkm_interior_x, config.fkm_interior_y,
           config.bc_split});
      NodeSet nodes = partition_node_set(partition);
      for (auto& b : nodes.boundary)
        b.bc_value = b.bc == BcKind::dirichlet
                         ? problem.dirichlet_data(b.position)
                         : problem.neumann_data(b.position, b.normal);
      FkmSolution fkm =
          fkm_solve(problem, partition, Continuity::c0, config_kernel(config));
      MkmSolution mkm = mkm_solve(problem, nodes, config_kernel(config),
                                  MkmVariant::symmetric);
      double diff = 0.0;
      for (const auto& p : points)
        diff = std::max(diff,
                        std::abs(fkm_evaluate(fkm, p) - mkm_evaluate(mkm, p)));
      result.max_difference = diff;
      result.pass = diff <= 1e-10;
    }
    report.checks.push_back(result);
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

MatrixReport matrix_report(const RunConfig& config) {
  const ProblemSpec& problem = config_problem(config);
  MatrixReport out;
  out.method = config.method;
  Matrix a;
  if (config.method == "mkm") {
    const NodeSet nodes = config_nodes(config);
    a = mkm_assemble(problem, nodes, config_kernel(config),
                     config.variant == "zhang" ? MkmVariant::zhang_unsymmetric
                                               : MkmVariant::symmetric)
            .matrix;
  } else if (config.method == "bkm") {
    const NodeSet nodes = config_nodes(config);
    const Kernel kernel = general_solution(problem.op, 0);
    if (config.variant == "indirect") {
      const int l = nodes.boundary_count();
      a.resize(l, l);
      for (int i = 0; i < l; ++i)
        for (int k = 0; k < l; ++k) {
          const auto& row = nodes.boundary[i];
          const auto& src = nodes.boundary[k];
          a(i, k) = row.bc == BcKind::dirichlet
                        ? kernel.value(row.position, src.position)
                        : normal_derivatives(kernel, row.position, src.position,
                                             row.normal, src.normal)
                              .d_field;
        }
    } else {
      a = hermite_boundary_matrix(kernel, nodes.boundary, nodes.boundary);
    }
  } else if (config.method == "kansa") {
    const NodeSet nodes = config_nodes(config);
    KansaSolution sol = kansa_solve(problem, nodes, config_kernel(config));
    out.dimension = static_cast<int>(sol.gamma.size());
    out.symmetry_defect = sol.symmetry_defect;
    out.condition = sol.condition;
    out.centrosymmetry_defect = std::numeric_limits<double>::quiet_NaN();
    return out;
  } else {
    throw ValidationError(
        "config field 'method': matrix-report supports bkm, mkm, kansa");
  }
  out.dimension = static_cast<int>(a.rows());
  out.symmetry_defect = symmetry_defect(a);
  out.centrosymmetry_defect = centrosymmetry_defect(a);
  out.condition = DenseFactorization(a).condition();
  return out;
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ",";
    out += csv_quote(fields[i]);
  }
  out += "\r\n";
  return out;
}

std::vector<std::string> report_row(const RunReport& r) {
  return {r.method,
          r.case_id,
          std::to_string(r.boundary_count),
          std::to_string(r.interior_count),
          std::to_string(r.dimension),
          format_double(r.errors.rmse),
          format_double(r.errors.max_error),
          format_double(r.errors.relative_l2),
          format_double(r.nodal_residual),
          format_double(r.symmetry_defect),
          format_double(r.condition)};
}

const std::vector<std::string> kReportHeader{
    "method", "case",          "L",      "N",       "dimension", "rmse",
    "max",    "relative_l2",   "residual", "symmetry_defect", "condition"};

}  // namespace

std::string report_csv(const RunReport& report) {
  std::string out = csv_row(kReportHeader);
  out += csv_row(report_row(report));
  return out;
}

std::string sweep_csv(const RunConfig& config, const std::vector<int>& counts) {
  std::vector<int> ordered = counts;
  std::sort(ordered.begin(), ordered.end());
  std::string out = csv_row(kReportHeader);
  for (int count : ordered) {
    RunConfig c = config;
    c.boundary_nodes = count;
    out += csv_row(report_row(run_case(c)));
  }
  return out;
}

std::string matrix_report_csv(const RunConfig& config) {
  const MatrixReport r = matrix_report(config);
  std::string out = csv_row({"method", "dimension", "symmetry_defect",
                             "centrosymmetry_defect", "condition"});
  out += csv_row({r.method, std::to_string(r.dimension),
                  format_double(r.symmetry_defect),
                  format_double(r.centrosymmetry_defect),
                  format_double(r.condition)});
  return out;
}

std::string field_csv(const RunConfig& config) {
  const ProblemSpec& problem = config_problem(config);
  std::function<double(Point2)> field;
  if (config.method == "fkm") {
    const Partition partition = partition_rectangle(
        problem.domain, config.partition_x, config.partition_y,
        {config.fkm_per_edge, config.fkm_interior_x, config.fkm_interior_y,
         config.bc_split});
    FkmSolution sol = fkm_solve(problem, partition,
                                config.continuity == "c0" ? Continuity::c0
                                                          : Continuity::c1,
                                config_kernel(config));
    field = [sol](Point2 p) { return fkm_evaluate(sol, p); };
  } else {
    const NodeSet nodes = config_nodes(config);
    if (config.method == "bkm") {
      BkmSolution sol = config.variant == "indirect"
                            ? bkm_solve_indirect(problem, nodes)
                            : bkm_solve_symmetric(problem, nodes);
      field = [sol](Point2 p) { return bkm_evaluate(sol, p); };
    } else if (config.method == "bpm") {
      BpmLadder ladder = bpm_solve(problem, nodes.boundary, config.truncation,
                                   config.variant == "bpm1" ? BpmVariant::bpm1
                                                            : BpmVariant::bpm2,
                                   {config.rho});
      field = [ladder](Point2 p) { return bpm_evaluate(ladder, p); };
    } else if (config.method == "kansa") {
      KansaSolution sol = kansa_solve(problem, nodes, config_kernel(config));
      field = [sol](Point2 p) { return kansa_evaluate(sol, p); };
    } else {
      MkmSolution sol = mkm_solve(problem, nodes, config_kernel(config),
                                  config.variant == "zhang"
                                      ? MkmVariant::zhang_unsymmetric
                                      : MkmVariant::symmetric);
      field = [sol](Point2 p) { return mkm_evaluate(sol, p); };
    }
  }

  std::string out = csv_row({"x", "y", "u_numeric", "u_exact", "error"});
  Point2 lo, hi;
  if (problem.domain.kind() == DomainKind::rectangle) {
    lo = problem.domain.lo();
    hi = problem.domain.hi();
  } else {
    lo = {problem.domain.centroid().x - problem.domain.semi_axis_a(),
          problem.domain.centroid().y - problem.domain.semi_axis_b()};
    hi = {problem.domain.centroid().x + problem.domain.semi_axis_a(),
          problem.domain.centroid().y + problem.domain.semi_axis_b()};
  }
  constexpr int kGrid = 21;
  for (int iy = 0; iy < kGrid; ++iy) {
    for (int ix = 0; ix < kGrid; ++ix) {
      const Point2 p{lo.x + (hi.x - lo.x) * ix / (kGrid - 1),
                     lo.y + (hi.y - lo.y) * iy / (kGrid - 1)};
      if (!problem.domain.contains(p)) continue;
      const double numeric = field(p);
      const double exact = problem.exact ? problem.exact(p) : 0.0;
      out += csv_row({format_double(p.x), format_double(p.y),
                      format_double(numeric), format_double(exact),
                      format_double(numeric - exact)});
    }
  }
  return out;
}

std::string interp_file_csv(const std::string& data_text, const Kernel& kernel) {
  std::vector<BoundaryNode> boundary;
  std::vector<Point2> interior;
  std::vector<double> boundary_u, interior_u, boundary_q;
  std::istringstream in(data_text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    if (values.empty()) continue;
    if (values.size() == 3) {
      interior.push_back({values[0], values[1]});
      interior_u.push_back(values[2]);
    } else if (values.size() == 6) {
      BoundaryNode node;
      node.position = {values[0], values[1]};
      const double len = std::hypot(values[3], values[4]);
      if (len == 0.0)
        throw ValidationError("interp data line " + std::to_string(line_no) +
                              ": zero normal");
      node.normal = {values[3] / len, values[4] / len};
      node.bc = BcKind::dirichlet;
      boundary.push_back(node);
      boundary_u.push_back(values[2]);
      boundary_q.push_back(values[5]);
    } else {
      throw ValidationError("interp data line " + std::to_string(line_no) +
                            ": need 3 or 6 columns");
    }
  }
  if (boundary.empty())
    throw ValidationError("interp data has no 6-column boundary rows");

  NodeSet nodes = NodeSet::create(boundary, interior);
  Vector u(nodes.boundary_count() + nodes.interior_count());
  for (int i = 0; i < nodes.boundary_count(); ++i) u[i] = boundary_u[i];
  for (std::size_t i = 0; i < interior_u.size(); ++i)
    u[nodes.boundary_count() + i] = interior_u[i];
  Vector q(nodes.boundary_count());
  for (int i = 0; i < nodes.boundary_count(); ++i) q[i] = boundary_q[i];

  const HermiteInterpolant hermite = hermite_fit(nodes, u, q, kernel);
  const PlainInterpolant plain = plain_fit(nodes.all_positions(), u, kernel);

  std::string out = csv_row({"x", "y", "u", "u_hermite", "u_plain"});
  const auto all = nodes.all_positions();
  for (std::size_t i = 0; i < all.size(); ++i) {
    out += csv_row({format_double(all[i].x), format_double(all[i].y),
                    format_double(u[i]),
                    format_double(hermite_evaluate(hermite, all[i])),
                    format_double(plain_evaluate(plain, all[i]))});
  }
  return out;
}

}  // namespace rbf
