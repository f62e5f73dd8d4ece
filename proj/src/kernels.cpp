#include "rbf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rbf/bessel.hpp"

namespace rbf {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ---------------------------------------------------------------------------
// RadialProfile
// ---------------------------------------------------------------------------

RadialProfile RadialProfile::log_poly(std::vector<LogPolyTerm> terms) {
  RadialProfile p;
  p.is_log_ = true;
  p.log_terms_ = std::move(terms);
  p.merge();
  return p;
}

RadialProfile RadialProfile::bessel(BesselKind kind, double lambda,
                                    std::vector<BesselTerm> terms) {
  RadialProfile p;
  p.is_log_ = false;
  p.bessel_kind_ = kind;
  p.lambda_ = lambda;
  p.bessel_terms_ = std::move(terms);
  p.merge();
  return p;
}

void RadialProfile::merge() {
  if (is_log_) {
    std::map<int, LogPolyTerm> merged;
    for (const auto& t : log_terms_) {
      auto& m = merged[t.n];
      m.n = t.n;
      m.a += t.a;
      m.b += t.b;
    }
    log_terms_.clear();
    for (const auto& [n, t] : merged)
      if (t.a != 0.0 || t.b != 0.0) log_terms_.push_back(t);
  } else {
    std::map<std::pair<int, int>, double> merged;
    for (const auto& t : bessel_terms_) merged[{t.p, t.q}] += t.c;
    bessel_terms_.clear();
    for (const auto& [pq, c] : merged)
      if (c != 0.0) bessel_terms_.push_back({pq.first, pq.second, c});
  }
}

RadialProfile RadialProfile::derivative() const {
  RadialProfile out = *this;
  if (is_log_) {
    std::vector<LogPolyTerm> terms;
    for (const auto& t : log_terms_)
      terms.push_back({t.n - 1, t.n * t.a, t.n * t.b + t.a});
    out.log_terms_ = std::move(terms);
  } else {
    const double sign = bessel_kind_ == BesselKind::first_j ? -1.0 : 1.0;
    std::vector<BesselTerm> terms;
    for (const auto& t : bessel_terms_) {
      terms.push_back({t.p - 1, t.q, double(t.p + t.q) * t.c});
      terms.push_back({t.p, t.q + 1, sign * lambda_ * t.c});
    }
    out.bessel_terms_ = std::move(terms);
  }
  out.merge();
  return out;
}

RadialProfile RadialProfile::divided_by_r() const {
  RadialProfile out = *this;
  if (is_log_) {
    for (auto& t : out.log_terms_) t.n -= 1;
  } else {
    for (auto& t : out.bessel_terms_) t.p -= 1;
  }
  return out;
}

RadialProfile RadialProfile::radial_laplacian() const {
  const RadialProfile d1 = derivative();
  return d1.derivative().plus(d1.divided_by_r());
}

RadialProfile RadialProfile::scaled(double factor) const {
  RadialProfile out = *this;
  if (is_log_) {
    for (auto& t : out.log_terms_) {
      t.a *= factor;
      t.b *= factor;
    }
  } else {
    for (auto& t : out.bessel_terms_) t.c *= factor;
  }
  out.merge();
  return out;
}

RadialProfile RadialProfile::plus(const RadialProfile& other) const {
  if (is_log_ != other.is_log_)
    throw ValidationError("cannot add radial profiles of different families");
  RadialProfile out = *this;
  if (is_log_) {
    out.log_terms_.insert(out.log_terms_.end(), other.log_terms_.begin(),
                          other.log_terms_.end());
  } else {
    if (bessel_kind_ != other.bessel_kind_ || lambda_ != other.lambda_)
      throw ValidationError("cannot add radial profiles of different families");
    out.bessel_terms_.insert(out.bessel_terms_.end(),
                             other.bessel_terms_.begin(),
                             other.bessel_terms_.end());
  }
  out.merge();
  return out;
}

double RadialProfile::eval(double r) const {
  double sum = 0.0;
  if (is_log_) {
    const double lr = std::log(r);
    for (const auto& t : log_terms_)
      sum += std::pow(r, double(t.n)) * (t.a * lr + t.b);
  } else {
    for (const auto& t : bessel_terms_) {
      const double z = bessel_kind_ == BesselKind::first_j
                           ? bessel_j(t.q, lambda_ * r)
                           : bessel_i(t.q, lambda_ * r);
      sum += t.c * std::pow(r, double(t.p)) * z;
    }
  }
  return sum;
}

bool RadialProfile::finite_at_zero() const {
  if (is_log_) {
    for (const auto& t : log_terms_) {
      if (t.n < 0) return false;
      if (t.n == 0 && t.a != 0.0) return false;
    }
  } else {
    for (const auto& t : bessel_terms_)
      if (t.p + t.q < 0) return false;
  }
  return true;
}

double RadialProfile::limit_at_zero() const {
  if (!finite_at_zero()) throw NumericalError("singular kernel at r=0");
  double sum = 0.0;
  if (is_log_) {
    for (const auto& t : log_terms_)
      if (t.n == 0) sum += t.b;
  } else {
    for (const auto& t : bessel_terms_) {
      if (t.p + t.q != 0) continue;
      // r^{-q} B_q(lambda r) -> lambda^q / (2^q q!) for both families.
      double lead = 1.0;
      for (int k = 1; k <= t.q; ++k) lead *= lambda_ / (2.0 * k);
      sum += t.c * lead;
    }
  }
  return sum;
}

// ---------------------------------------------------------------------------
// OperatorSpec
// ---------------------------------------------------------------------------

OperatorSpec OperatorSpec::laplace() { return OperatorSpec{}; }

OperatorSpec OperatorSpec::helmholtz(double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("helmholtz wavenumber must be positive");
  OperatorSpec op;
  op.kind_ = Kind::helmholtz;
  op.lambda_ = lambda;
  return op;
}

OperatorSpec OperatorSpec::modified_helmholtz(double lambda) {
  if (!(lambda > 0.0))
    throw ValidationError("modified helmholtz parameter must be positive");
  OperatorSpec op;
  op.kind_ = Kind::modified_helmholtz;
  op.lambda_ = lambda;
  return op;
}

OperatorSpec OperatorSpec::convection_diffusion(double diffusivity,
                                                Vec2 velocity, double reaction) {
  if (!(diffusivity > 0.0)) throw ValidationError("diffusivity must be positive");
  if (reaction < 0.0) throw ValidationError("reaction must be nonnegative");
  OperatorSpec op;
  op.kind_ = Kind::convection_diffusion;
  op.diffusivity_ = diffusivity;
  op.velocity_ = velocity;
  op.reaction_ = reaction;
  return op;
}

OperatorSpec OperatorSpec::variable_helmholtz(ScalarField s) {
  if (!s.value || !s.gradient || !s.laplacian)
    throw ValidationError("variable helmholtz needs value/gradient/laplacian");
  OperatorSpec op;
  op.kind_ = Kind::variable_helmholtz;
  op.field_ = std::move(s);
  return op;
}

bool OperatorSpec::self_adjoint() const {
  if (kind_ == Kind::convection_diffusion)
    return velocity_.x == 0.0 && velocity_.y == 0.0;
  return true;
}

OperatorSpec::CoefficientForm OperatorSpec::coefficient_form() const {
  switch (kind_) {
    case Kind::laplace:
      return {1.0, {0.0, 0.0}, 0.0};
    case Kind::helmholtz:
      return {1.0, {0.0, 0.0}, -lambda_ * lambda_};
    case Kind::modified_helmholtz:
      return {1.0, {0.0, 0.0}, lambda_ * lambda_};
    case Kind::convection_diffusion:
      return {diffusivity_, velocity_, reaction_};
    case Kind::variable_helmholtz:
      break;
  }
  throw ValidationError("operator has no constant-coefficient form");
}

OperatorSpec adjoint(const OperatorSpec& op) {
  if (op.kind() == OperatorSpec::Kind::convection_diffusion)
    return OperatorSpec::convection_diffusion(op.diffusivity(), -op.velocity(),
                                              op.reaction());
  return op;
}

// ---------------------------------------------------------------------------
// Kernel
// ---------------------------------------------------------------------------

std::pair<double, double> laplace_fundamental_coeffs(int j) {
  if (j < 0) throw ValidationError("order must be nonnegative");
  double a = 1.0, b = 0.0;
  for (int i = 0; i < j; ++i) {
    const double denom = 4.0 * (i + 1.0) * (i + 1.0);
    b = (b + a / (i + 1.0)) / denom;
    a = a / denom;
  }
  return {a, b};
}

void Kernel::set_profile(RadialProfile profile) {
  rad_[0] = std::move(profile);
  for (int i = 1; i <= 4; ++i) rad_[i] = rad_[i - 1].derivative();
}

Kernel Kernel::tps(int k) {
  if (k < 1) throw ValidationError("tps power must be at least 1");
  Kernel kernel;
  kernel.kind_ = Kind::tps;
  kernel.set_profile(RadialProfile::log_poly({{2 * k, 1.0, 0.0}}));
  return kernel;
}

Kernel Kernel::laplace_fundamental(int j) {
  auto [a, b] = laplace_fundamental_coeffs(j);
  Kernel kernel;
  kernel.kind_ = Kind::laplace_fundamental;
  kernel.set_profile(
      RadialProfile::log_poly({{2 * j, a / (2 * kPi), -b / (2 * kPi)}}));
  return kernel;
}

namespace {
double ladder_norm(int m, double lambda) {
  double c = 1.0;
  for (int k = 1; k <= m; ++k) c /= 2.0 * k * lambda;
  return c;
}
}  // namespace

Kernel Kernel::helmholtz_general(int m, double lambda) {
  if (m < 0) throw ValidationError("order must be nonnegative");
  Kernel kernel;
  kernel.kind_ = Kind::helmholtz_general;
  kernel.set_profile(RadialProfile::bessel(BesselKind::first_j, lambda,
                                           {{m, m, ladder_norm(m, lambda)}}));
  return kernel;
}

Kernel Kernel::modified_helmholtz_general(int m, double lambda) {
  if (m < 0) throw ValidationError("order must be nonnegative");
  Kernel kernel;
  kernel.kind_ = Kind::modified_helmholtz_general;
  kernel.set_profile(RadialProfile::bessel(BesselKind::modified_i, lambda,
                                           {{m, m, ladder_norm(m, lambda)}}));
  return kernel;
}

Kernel Kernel::convection_diffusion_general(double diffusivity, Vec2 velocity,
                                            double reaction) {
  if (!(diffusivity > 0.0)) throw ValidationError("diffusivity must be positive");
  Kernel kernel;
  kernel.kind_ = Kind::convection_diffusion_general;
  kernel.cd_d_ = diffusivity;
  kernel.cd_v_ = velocity;
  kernel.cd_k_ = reaction;
  const double half = velocity.norm() / (2.0 * diffusivity);
  kernel.cd_mu_ = std::sqrt(half * half + reaction / diffusivity);
  kernel.set_profile(RadialProfile::bessel(BesselKind::modified_i,
                                           kernel.cd_mu_, {{0, 0, 1.0}}));
  return kernel;
}

Kernel Kernel::from_profile(RadialProfile profile) {
  Kernel kernel;
  kernel.kind_ = Kind::derived;
  kernel.set_profile(std::move(profile));
  return kernel;
}

double Kernel::radial(double r, int order) const {
  if (!is_radial()) throw ValidationError("kernel is not radial");
  if (order < 0 || order > 4) throw ValidationError("derivative order out of range");
  if (r < 0.0) throw ValidationError("radius must be nonnegative");
  return rad_[order](r);
}

bool Kernel::radial_finite_at_zero(int order) const {
  return rad_[order].finite_at_zero();
}

double Kernel::value(Point2 x, Point2 s) const {
  const double r = (x - s).norm();
  if (is_radial()) return rad_[0](r);
  const double envelope = std::exp(cd_v_.dot(x - s) / (2.0 * cd_d_));
  return envelope * rad_[0](r);
}

Vec2 Kernel::gradient_field(Point2 x, Point2 s) const {
  const Point2 d = x - s;
  const double r = d.norm();
  if (is_radial()) {
    if (r == 0.0) {
      rad_[1].limit_at_zero();  // raise on singular kernels
      return {0.0, 0.0};
    }
    const double d1 = rad_[1].eval(r);
    return (d1 / r) * d;
  }
  const double envelope = std::exp(cd_v_.dot(d) / (2.0 * cd_d_));
  const double h = rad_[0](r);
  Vec2 grad = (h / (2.0 * cd_d_)) * cd_v_;
  if (r > 0.0) grad = grad + (rad_[1].eval(r) / r) * d;
  return envelope * grad;
}

Kernel general_solution(const OperatorSpec& op, int m) {
  switch (op.kind()) {
    case OperatorSpec::Kind::helmholtz:
      return Kernel::helmholtz_general(m, op.lambda());
    case OperatorSpec::Kind::modified_helmholtz:
      return Kernel::modified_helmholtz_general(m, op.lambda());
    case OperatorSpec::Kind::convection_diffusion:
      if (m != 0) throw ValidationError("unsupported order");
      return Kernel::convection_diffusion_general(op.diffusivity(),
                                                  op.velocity(), op.reaction());
    case OperatorSpec::Kind::laplace:
    case OperatorSpec::Kind::variable_helmholtz:
      break;
  }
  throw ValidationError("no nonsingular general solution");
}

Kernel apply_radial_operator(const OperatorSpec& op, const Kernel& kernel) {
  if (!kernel.is_radial()) throw ValidationError("kernel is not radial");
  const RadialProfile& phi = kernel.profile(0);
  RadialProfile lap = phi.radial_laplacian();
  switch (op.kind()) {
    case OperatorSpec::Kind::laplace:
      return Kernel::from_profile(lap);
    case OperatorSpec::Kind::helmholtz:
      return Kernel::from_profile(lap.plus(phi.scaled(op.lambda() * op.lambda())));
    case OperatorSpec::Kind::modified_helmholtz:
      return Kernel::from_profile(
          lap.plus(phi.scaled(-op.lambda() * op.lambda())));
    case OperatorSpec::Kind::convection_diffusion:
    case OperatorSpec::Kind::variable_helmholtz:
      break;
  }
  throw ValidationError("operator application is not radial");
}

// ---------------------------------------------------------------------------
// Pointwise chains
// ---------------------------------------------------------------------------

namespace {

// Radial derivative chain at one point pair, with r = 0 resolved by the
// analytic limits (all odd quantities vanish, phi'/r -> phi''(0)).
struct Chain {
  double r = 0.0;
  Vec2 e{0.0, 0.0};  // zero vector at r = 0 so odd terms drop out
  bool at_zero = false;
  double phi = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0;
  double lap = 0.0, g3 = 0.0, biharm = 0.0;
  double h_rr = 0.0, h_t = 0.0;  // Hessian = h_rr e e^T + h_t (I - e e^T)

  Vec2 hess_vec(Vec2 v) const {
    if (at_zero) return h_t * v;
    const double along = e.dot(v);
    return h_rr * along * e + h_t * (v - along * e);
  }
};

Chain make_chain(const Kernel& kernel, Point2 x, Point2 s, int max_order) {
  Chain c;
  const Point2 d = x - s;
  c.r = d.norm();
  c.at_zero = c.r == 0.0;
  if (!c.at_zero) c.e = (1.0 / c.r) * d;
  c.phi = kernel.radial(c.r, 0);
  if (max_order >= 1) c.d1 = kernel.radial(c.r, 1);
  if (max_order >= 2) c.d2 = kernel.radial(c.r, 2);
  if (max_order >= 3) c.d3 = kernel.radial(c.r, 3);
  if (max_order >= 4) c.d4 = kernel.radial(c.r, 4);
  if (c.at_zero) {
    c.h_rr = c.d2;
    c.h_t = c.d2;
    c.lap = 2.0 * c.d2;
    c.g3 = 0.0;
    c.biharm = (8.0 / 3.0) * c.d4;
  } else {
    c.h_rr = c.d2;
    c.h_t = c.d1 / c.r;
    c.lap = c.d2 + c.d1 / c.r;
    if (max_order >= 3) c.g3 = c.d3 + c.d2 / c.r - c.d1 / (c.r * c.r);
    if (max_order >= 4)
      c.biharm = c.d4 + 2.0 * c.d3 / c.r - c.d2 / (c.r * c.r) +
                 c.d1 / (c.r * c.r * c.r);
  }
  return c;
}

}  // namespace

struct KernelAccess {
  static double cd_d(const Kernel& k) { return k.cd_d_; }
  static Vec2 cd_v(const Kernel& k) { return k.cd_v_; }
};

namespace {

// Bundle for the translation-invariant convection-diffusion kernel
// u# = E h, E = exp(v.d / 2D), h = I0(mu r), d = x - s.
NormalDerivativeBundle cd_normal_derivatives(const Kernel& kernel, Point2 x,
                                             Point2 s, Vec2 n_x, Vec2 n_s) {
  const Point2 d = x - s;
  const double r = d.norm();
  const Vec2 half_v = (0.5 / KernelAccess::cd_d(kernel)) * KernelAccess::cd_v(kernel);
  const double envelope = std::exp(KernelAccess::cd_v(kernel).dot(d) /
                                   (2.0 * KernelAccess::cd_d(kernel)));
  const double h = kernel.profile(0)(r);
  const double h1 = kernel.profile(1)(r);
  const double h2 = kernel.profile(2)(r);
  Vec2 e{0.0, 0.0};
  double h1_over_r = h2;  // limit of h'/r at r = 0
  if (r > 0.0) {
    e = (1.0 / r) * d;
    h1_over_r = h1 / r;
  }

  const Vec2 grad = envelope * (h * half_v + h1 * e);
  NormalDerivativeBundle out;
  out.d_field = n_x.dot(grad);
  out.d_source = -n_s.dot(grad);

  const double en_x = e.dot(n_x), en_s = e.dot(n_s);
  const double hess = envelope * (half_v.dot(n_x) * half_v.dot(n_s) * h +
                                  half_v.dot(n_x) * h1 * en_s +
                                  h1 * en_x * half_v.dot(n_s) +
                                  h2 * en_x * en_s +
                                  h1_over_r * (n_x.dot(n_s) - en_x * en_s));
  out.d_mixed = -hess;
  return out;
}

}  // namespace

NormalDerivativeBundle normal_derivatives(const Kernel& kernel, Point2 x,
                                          Point2 s, Vec2 n_x, Vec2 n_s) {
  if (!kernel.is_radial()) return cd_normal_derivatives(kernel, x, s, n_x, n_s);
  const Chain c = make_chain(kernel, x, s, 2);
  NormalDerivativeBundle out;
  const double en_x = c.e.dot(n_x);
  const double en_s = c.e.dot(n_s);
  out.d_field = c.d1 * en_x;
  out.d_source = -c.d1 * en_s;
  out.d_mixed = -(c.h_rr - c.h_t) * en_x * en_s - c.h_t * n_x.dot(n_s);
  return out;
}

double apply_operator(const OperatorSpec& op, const Kernel& kernel, Point2 x,
                      Point2 s, OperatorSide side) {
  if (op.kind() == OperatorSpec::Kind::variable_helmholtz) {
    const Chain c = make_chain(kernel, x, s, 2);
    const Point2 at = side == OperatorSide::field ? x : s;
    return c.lap + op.field().value(at) * c.phi;
  }
  const auto cf = op.coefficient_form();
  const Chain c = make_chain(kernel, x, s, 2);
  const double drift = cf.v.dot(c.e) * c.d1;
  const double sign = side == OperatorSide::field ? -1.0 : 1.0;
  return cf.d * c.lap + sign * drift - cf.k * c.phi;
}

double apply_llstar(const OperatorSpec& op, const Kernel& kernel, Point2 x,
                    Point2 s) {
  if (op.kind() == OperatorSpec::Kind::variable_helmholtz) {
    const Chain c = make_chain(kernel, x, s, 4);
    const double sx = op.field().value(x), ss = op.field().value(s);
    return c.biharm + (sx + ss) * c.lap + sx * ss * c.phi;
  }
  const auto cf = op.coefficient_form();
  const Chain c = make_chain(kernel, x, s, 4);
  const double ve = cf.v.dot(c.e);
  const double vv = cf.v.dot(cf.v);
  const double directional = ve * ve * c.h_rr + (vv - ve * ve) * c.h_t;
  return cf.d * cf.d * c.biharm - 2.0 * cf.d * cf.k * c.lap +
         cf.k * cf.k * c.phi - directional;
}

// ---------------------------------------------------------------------------
// ScaledKernel
// ---------------------------------------------------------------------------

ScaledKernel::ScaledKernel(ScalarField s, Kernel base)
    : field_(std::move(s)), base_(std::move(base)) {
  if (!field_.value) throw ValidationError("invalid scaling field");
  if (!base_.is_radial())
    throw ValidationError("scaled kernel requires a radial base");
}

namespace {
double sqrt_field(const ScalarField& f, Point2 p) {
  const double s = f.value(p);
  if (!(s > 0.0)) throw NumericalError("invalid scaling field");
  return std::sqrt(s);
}
}  // namespace

double ScaledKernel::value(Point2 x, Point2 s) const {
  return sqrt_field(field_, x) * sqrt_field(field_, s) *
         base_.radial((x - s).norm(), 0);
}

ScaledKernel scaled_kernel(ScalarField s, Kernel base) {
  return ScaledKernel(std::move(s), std::move(base));
}

// ---------------------------------------------------------------------------
// KernelEntries
// ---------------------------------------------------------------------------

KernelEntries::KernelEntries(OperatorSpec op, Kernel kernel)
    : op_(std::move(op)), kernel_(std::move(kernel)) {
  if (!kernel_.is_radial())
    throw ValidationError("collocation entries require a radial kernel");
  scaled_ = op_.kind() == OperatorSpec::Kind::variable_helmholtz;
}

namespace {

// Scaling-field helper bundle: w = sqrt(S), grad w, lap w.
struct FieldPoint {
  double w;
  Vec2 gw;
  double lw;
};

FieldPoint field_point(const ScalarField& f, Point2 p) {
  const double s = f.value(p);
  if (!(s > 0.0)) throw NumericalError("invalid scaling field");
  FieldPoint fp;
  fp.w = std::sqrt(s);
  const Vec2 gs = f.gradient(p);
  fp.gw = (0.5 / fp.w) * gs;
  fp.lw = f.laplacian(p) / (2.0 * fp.w) -
          gs.dot(gs) / (4.0 * fp.w * fp.w * fp.w);
  return fp;
}

}  // namespace

double KernelEntries::value(Point2 x, Point2 s) const {
  const Chain c = make_chain(kernel_, x, s, 0);
  if (!scaled_) return c.phi;
  return sqrt_field(op_.field(), x) * sqrt_field(op_.field(), s) * c.phi;
}

Vec2 KernelEntries::grad_value(Point2 x, Point2 s) const {
  const Chain c = make_chain(kernel_, x, s, 1);
  if (!scaled_) return c.d1 * c.e;
  const FieldPoint fx = field_point(op_.field(), x);
  const double ws = sqrt_field(op_.field(), s);
  return ws * (c.phi * fx.gw + (fx.w * c.d1) * c.e);
}

double KernelEntries::d_field(Point2 x, Point2 s, Vec2 nx) const {
  return grad_value(x, s).dot(nx);
}

double KernelEntries::d_source(Point2 x, Point2 s, Vec2 ns) const {
  const Chain c = make_chain(kernel_, x, s, 1);
  if (!scaled_) return -c.d1 * c.e.dot(ns);
  const FieldPoint fs = field_point(op_.field(), s);
  const double wx = sqrt_field(op_.field(), x);
  return wx * (c.phi * fs.gw.dot(ns) - fs.w * c.d1 * c.e.dot(ns));
}

double KernelEntries::d_mixed(Point2 x, Point2 s, Vec2 nx, Vec2 ns) const {
  const Chain c = make_chain(kernel_, x, s, 2);
  const double en_x = c.e.dot(nx), en_s = c.e.dot(ns);
  const double plain = -(c.h_rr - c.h_t) * en_x * en_s - c.h_t * nx.dot(ns);
  if (!scaled_) return plain;
  const FieldPoint fx = field_point(op_.field(), x);
  const FieldPoint fs = field_point(op_.field(), s);
  return fx.gw.dot(nx) * fs.gw.dot(ns) * c.phi -
         fx.gw.dot(nx) * fs.w * c.d1 * en_s +
         fx.w * c.d1 * en_x * fs.gw.dot(ns) + fx.w * fs.w * plain;
}

double KernelEntries::op_field(Point2 x, Point2 s) const {
  if (!scaled_) return apply_operator(op_, kernel_, x, s, OperatorSide::field);
  const Chain c = make_chain(kernel_, x, s, 2);
  const FieldPoint fx = field_point(op_.field(), x);
  const double ws = sqrt_field(op_.field(), s);
  const double sx = op_.field().value(x);
  return ws * (fx.lw * c.phi + 2.0 * c.d1 * fx.gw.dot(c.e) + fx.w * c.lap +
               sx * fx.w * c.phi);
}

double KernelEntries::op_source(Point2 x, Point2 s) const {
  if (!scaled_)
    return apply_operator(op_, kernel_, x, s, OperatorSide::source_adjoint);
  const Chain c = make_chain(kernel_, x, s, 2);
  const FieldPoint fs = field_point(op_.field(), s);
  const double wx = sqrt_field(op_.field(), x);
  const double ss = op_.field().value(s);
  return wx * (fs.lw * c.phi - 2.0 * c.d1 * fs.gw.dot(c.e) + fs.w * c.lap +
               ss * fs.w * c.phi);
}

Vec2 KernelEntries::grad_op_source(Point2 x, Point2 s) const {
  const Chain c = make_chain(kernel_, x, s, 3);
  if (!scaled_) {
    const auto cf = op_.coefficient_form();
    return (cf.d * c.g3 - cf.k * c.d1) * c.e + c.hess_vec(cf.v);
  }
  const FieldPoint fx = field_point(op_.field(), x);
  const FieldPoint fs = field_point(op_.field(), s);
  const double c2 = fs.lw + op_.field().value(s) * fs.w;
  const double t = c2 * c.phi + fs.w * c.lap - 2.0 * c.d1 * fs.gw.dot(c.e);
  const Vec2 grad_t =
      (c2 * c.d1 + fs.w * c.g3) * c.e - 2.0 * c.hess_vec(fs.gw);
  return t * fx.gw + fx.w * grad_t;
}

Vec2 KernelEntries::grad_d_source(Point2 x, Point2 s, Vec2 ns) const {
  const Chain c = make_chain(kernel_, x, s, 2);
  if (!scaled_) return -c.hess_vec(ns);
  const FieldPoint fx = field_point(op_.field(), x);
  const FieldPoint fs = field_point(op_.field(), s);
  const double u = fs.gw.dot(ns) * c.phi - fs.w * c.d1 * c.e.dot(ns);
  const Vec2 grad_u = fs.gw.dot(ns) * c.d1 * c.e - fs.w * c.hess_vec(ns);
  return u * fx.gw + fx.w * grad_u;
}

double KernelEntries::dn_op_source(Point2 x, Point2 s, Vec2 nx) const {
  return grad_op_source(x, s).dot(nx);
}

double KernelEntries::op_of_d_source(Point2 x, Point2 s, Vec2 ns) const {
  const Chain c = make_chain(kernel_, x, s, 3);
  if (!scaled_) {
    const auto cf = op_.coefficient_form();
    const double en_s = c.e.dot(ns);
    return -cf.d * en_s * c.g3 + cf.v.dot(c.hess_vec(ns)) + cf.k * c.d1 * en_s;
  }
  const FieldPoint fx = field_point(op_.field(), x);
  const FieldPoint fs = field_point(op_.field(), s);
  const double en_s = c.e.dot(ns);
  const double gn = fs.gw.dot(ns);
  const double u = gn * c.phi - fs.w * c.d1 * en_s;
  const Vec2 grad_u = gn * c.d1 * c.e - fs.w * c.hess_vec(ns);
  const double lap_u = gn * c.lap - fs.w * en_s * c.g3;
  const double lap_g = fx.lw * u + 2.0 * fx.gw.dot(grad_u) + fx.w * lap_u;
  return lap_g + op_.field().value(x) * fx.w * u;
}

double KernelEntries::op_op(Point2 x, Point2 s) const {
  if (!scaled_) return apply_llstar(op_, kernel_, x, s);
  const Chain c = make_chain(kernel_, x, s, 4);
  const FieldPoint fx = field_point(op_.field(), x);
  const FieldPoint fs = field_point(op_.field(), s);
  const double c2 = fs.lw + op_.field().value(s) * fs.w;
  const double t = c2 * c.phi + fs.w * c.lap - 2.0 * c.d1 * fs.gw.dot(c.e);
  const Vec2 grad_t =
      (c2 * c.d1 + fs.w * c.g3) * c.e - 2.0 * c.hess_vec(fs.gw);
  const double lap_t = c2 * c.lap + fs.w * c.biharm - 2.0 * fs.gw.dot(c.e) * c.g3;
  const double lap_full = fx.lw * t + 2.0 * fx.gw.dot(grad_t) + fx.w * lap_t;
  return lap_full + op_.field().value(x) * fx.w * t;
}

}  // namespace rbf
