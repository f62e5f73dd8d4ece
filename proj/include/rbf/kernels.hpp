#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "rbf/errors.hpp"
#include "rbf/geometry.hpp"

namespace rbf {

// ---------------------------------------------------------------------------
// Symbolic radial profiles
// ---------------------------------------------------------------------------

/// One term r^n (a ln r + b).
struct LogPolyTerm {
  int n = 0;
  double a = 0.0;
  double b = 0.0;
};

/// One term c r^p B_q(lambda r), with B the Bessel J or I family.
struct BesselTerm {
  int p = 0;
  int q = 0;
  double c = 0.0;
};

enum class BesselKind { first_j, modified_i };

/// Radial function represented as a finite term list. Both families are
/// closed under d/dr and division by r, so radial derivative chains and
/// iterated radial operators are exact rather than numerical.
class RadialProfile {
 public:
  static RadialProfile log_poly(std::vector<LogPolyTerm> terms);
  static RadialProfile bessel(BesselKind kind, double lambda,
                              std::vector<BesselTerm> terms);

  RadialProfile derivative() const;
  RadialProfile divided_by_r() const;
  /// phi'' + phi'/r (the 2D radial Laplacian).
  RadialProfile radial_laplacian() const;
  RadialProfile scaled(double factor) const;
  RadialProfile plus(const RadialProfile& other) const;

  double eval(double r) const;  // r > 0
  bool finite_at_zero() const;
  double limit_at_zero() const;  // throws NumericalError when singular

  double operator()(double r) const {
    return r == 0.0 ? limit_at_zero() : eval(r);
  }

 private:
  RadialProfile() = default;
  void merge();
  bool is_log_ = true;
  BesselKind bessel_kind_ = BesselKind::first_j;
  double lambda_ = 0.0;
  std::vector<LogPolyTerm> log_terms_;
  std::vector<BesselTerm> bessel_terms_;
};

// ---------------------------------------------------------------------------
// Differential operators
// ---------------------------------------------------------------------------

/// Positive scalar coefficient field with the derivatives the scaled-kernel
/// assembly needs.
struct ScalarField {
  std::function<double(Point2)> value;
  std::function<Vec2(Point2)> gradient;
  std::function<double(Point2)> laplacian;
};

class OperatorSpec {
 public:
  enum class Kind {
    laplace,
    helmholtz,
    modified_helmholtz,
    convection_diffusion,
    variable_helmholtz,
  };

  static OperatorSpec laplace();
  static OperatorSpec helmholtz(double lambda);
  static OperatorSpec modified_helmholtz(double lambda);
  /// L{u} = D lap u - v . grad u - k u.
  static OperatorSpec convection_diffusion(double diffusivity, Vec2 velocity,
                                           double reaction);
  static OperatorSpec variable_helmholtz(ScalarField s);

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double diffusivity() const { return diffusivity_; }
  Vec2 velocity() const { return velocity_; }
  double reaction() const { return reaction_; }
  const ScalarField& field() const { return field_; }

  bool self_adjoint() const;
  bool constant_coefficient() const { return kind_ != Kind::variable_helmholtz; }

  /// Canonical (D, v, k) with L = D lap - v.grad - k for the
  /// constant-coefficient kinds.
  struct CoefficientForm {
    double d;
    Vec2 v;
    double k;
  };
  CoefficientForm coefficient_form() const;

 private:
  Kind kind_ = Kind::laplace;
  double lambda_ = 0.0;
  double diffusivity_ = 1.0;
  Vec2 velocity_{0.0, 0.0};
  double reaction_ = 0.0;
  ScalarField field_;
};

/// Formal adjoint: flips the sign of the odd-order (convection) term;
/// self-adjoint operators map to themselves.
OperatorSpec adjoint(const OperatorSpec& op);

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

/// (A_j, B_j) coefficients of the higher-order 2D Laplace fundamental
/// solutions u*_j(r) = (1/2 pi) r^{2j} (A_j ln r - B_j).
std::pair<double, double> laplace_fundamental_coeffs(int j);

/// Radial (or, for convection-diffusion, translation-invariant bivariate)
/// basis function with exact derivative chains up to order 4.
class Kernel {
 public:
  enum class Kind {
    tps,
    laplace_fundamental,
    helmholtz_general,
    modified_helmholtz_general,
    convection_diffusion_general,
    derived,
  };

  /// Thin plate spline r^{2k} ln r, k >= 1.
  static Kernel tps(int k);
  /// u*_j of the 2D Laplace fundamental-solution ladder, j >= 0.
  static Kernel laplace_fundamental(int j);
  /// r^m J_m(lambda r) / (2^m m! lambda^m); order-m nonsingular general
  /// solution of the Helmholtz ladder.
  static Kernel helmholtz_general(int m, double lambda);
  /// Same with I_m for the modified Helmholtz operator.
  static Kernel modified_helmholtz_general(int m, double lambda);
  /// exp(v.(x-s)/2D) I0(mu r); annihilated by D lap - v.grad - k at the
  /// field point.
  static Kernel convection_diffusion_general(double diffusivity, Vec2 velocity,
                                             double reaction);
  static Kernel from_profile(RadialProfile profile);

  Kind kind() const { return kind_; }
  bool is_radial() const { return kind_ != Kind::convection_diffusion_general; }

  /// d^order phi / dr^order, order 0..4; r = 0 resolved by the analytic
  /// limit, error when singular.
  double radial(double r, int order) const;
  bool radial_finite_at_zero(int order) const;
  const RadialProfile& profile(int order) const { return rad_[order]; }

  /// Bivariate value (covers the convection-diffusion kernel).
  double value(Point2 x, Point2 s) const;
  Vec2 gradient_field(Point2 x, Point2 s) const;  // grad w.r.t. x

 private:
  Kernel() = default;
  void set_profile(RadialProfile profile);
  friend struct KernelAccess;
  Kind kind_ = Kind::derived;
  std::array<RadialProfile, 5> rad_{RadialProfile::log_poly({}),
                                    RadialProfile::log_poly({}),
                                    RadialProfile::log_poly({}),
                                    RadialProfile::log_poly({}),
                                    RadialProfile::log_poly({})};
  // convection-diffusion data
  double cd_d_ = 0.0, cd_k_ = 0.0, cd_mu_ = 0.0;
  Vec2 cd_v_{0.0, 0.0};
};

/// Nonsingular general solution of order m for the given operator; errors
/// for operators without one (Laplace) and unsupported orders.
Kernel general_solution(const OperatorSpec& op, int m);

/// Exact application of a radial constant-coefficient operator to a radial
/// kernel, as a new kernel (used by the multiple-reciprocity tails and the
/// particular-solution fit).
Kernel apply_radial_operator(const OperatorSpec& op, const Kernel& kernel);

// ---------------------------------------------------------------------------
// Pointwise derivative and operator entries
// ---------------------------------------------------------------------------

struct NormalDerivativeBundle {
  double d_field = 0.0;   // d phi / d n_x
  double d_source = 0.0;  // d phi / d n_s
  double d_mixed = 0.0;   // d^2 phi / d n_x d n_s
};

NormalDerivativeBundle normal_derivatives(const Kernel& kernel, Point2 x,
                                          Point2 s, Vec2 n_x, Vec2 n_s);

enum class OperatorSide { field, source_adjoint };

/// side = field: L acting at x on phi(x - s).
/// side = source_adjoint: the formal adjoint acting at the source point,
/// i.e. (L* phi)(x - s) for translation-invariant kernels.
double apply_operator(const OperatorSpec& op, const Kernel& kernel, Point2 x,
                      Point2 s, OperatorSide side);

/// L_x L*_s entry; for constant coefficients (D lap - k)^2 - (v.grad)^2
/// through the radial chains.
double apply_llstar(const OperatorSpec& op, const Kernel& kernel, Point2 x,
                    Point2 s);

/// Symmetric bivariate scaling phi~(x, s) = sqrt(S(x) S(s)) phi(r).
class ScaledKernel {
 public:
  ScaledKernel(ScalarField s, Kernel base);
  double value(Point2 x, Point2 s) const;
  const Kernel& base() const { return base_; }
  const ScalarField& field() const { return field_; }

 private:
  ScalarField field_;
  Kernel base_;
};

ScaledKernel scaled_kernel(ScalarField s, Kernel base);

/// Uniform entry set for Hermite collocation assembly: value and normal-
/// derivative rows against value, normal-source and adjoint-source columns.
/// For the variable-coefficient Helmholtz operator every block consistently
/// uses the scaled kernel.
class KernelEntries {
 public:
  KernelEntries(OperatorSpec op, Kernel kernel);

  double value(Point2 x, Point2 s) const;
  double d_field(Point2 x, Point2 s, Vec2 nx) const;
  double d_source(Point2 x, Point2 s, Vec2 ns) const;
  double d_mixed(Point2 x, Point2 s, Vec2 nx, Vec2 ns) const;
  /// L applied at the field point to the value column.
  double op_field(Point2 x, Point2 s) const;
  /// The adjoint-source column basis (L* phi)(x - s).
  double op_source(Point2 x, Point2 s) const;
  /// Normal derivative (at x) of the adjoint-source column.
  double dn_op_source(Point2 x, Point2 s, Vec2 nx) const;
  /// L applied at the field point to the d_source column.
  double op_of_d_source(Point2 x, Point2 s, Vec2 ns) const;
  /// L_x L*_s entry.
  double op_op(Point2 x, Point2 s) const;
  /// Gradient (at x) of the three column bases; used by the C1 spline rows.
  Vec2 grad_value(Point2 x, Point2 s) const;
  Vec2 grad_d_source(Point2 x, Point2 s, Vec2 ns) const;
  Vec2 grad_op_source(Point2 x, Point2 s) const;

  const Kernel& kernel() const { return kernel_; }
  const OperatorSpec& op() const { return op_; }

 private:
  OperatorSpec op_;
  Kernel kernel_;
  bool scaled_ = false;
};

}  // namespace rbf
