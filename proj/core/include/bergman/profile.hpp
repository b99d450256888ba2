#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bergman {

/// Value of f together with its exact logarithm. The log form stays usable
/// when the value underflows double precision (deep infinite-type cores).
struct FValue {
  double value;
  double log_value;  // -inf when value == 0
};

enum class ProfileFamily { Monomial, ExpInverse, DoubleExp, Custom };

/// Radial boundary profile f of the model domain {Im w > f(|z|)}.
///
/// Built-in families are evaluated by closed form on the core (0, x_c) and
/// continued past x_c by a C^1 quadratic-growth extension
///   f(x_c) + f'(x_c)(x - x_c) + kappa (x - x_c)^2,
/// which keeps f strictly increasing and subharmonic and makes every
/// weighted moment finite. Profiles are immutable; all evaluation is pure.
class RadialProfile {
 public:
  using CustomCore = std::function<FValue(double)>;

  static RadialProfile exp_inverse(double p, double cutoff = 0.5, double kappa = 1.0);
  static RadialProfile double_exp(double cutoff = 0.5, double kappa = 1.0);
  static RadialProfile monomial(int M, double cutoff = 0.5, double kappa = 1.0);
  /// f(x) = x^{2M} on the whole axis, no extension. Oracle profile.
  static RadialProfile monomial_pure(int M);
  static RadialProfile custom(CustomCore core, double cutoff, double kappa,
                              std::string name);

  FValue eval(double x) const;

  struct Derivs {
    double f1;
    double f2;
  };
  /// f'(x), f''(x); closed form for built-ins, central differences for Custom.
  Derivs derivs(double x) const;

  /// Inverse of f. Closed form where available, bisection otherwise.
  /// Requires 0 < t < f(x_max()).
  double f_inverse(double t) const;

  /// Lambda gauge -1/log f(x) (0 at x=0). Requires 0 <= x < f_inv_one().
  double lambda(double x) const;

  /// Inverse of the lambda gauge. Requires 0 <= t <= lambda(lambda_validity()).
  double g_inverse(double t) const;

  /// Upper end of the interval on which the lambda gauge is used.
  double lambda_validity() const { return lambda_validity_; }
  double f_inv_one() const { return f_inv_one_; }

  ProfileFamily family() const { return family_; }
  const std::string& name() const { return name_; }
  double cutoff() const { return cutoff_; }
  double kappa() const { return kappa_; }
  bool pure() const { return pure_; }
  double param_p() const { return p_; }
  int param_m() const { return m_; }
  /// Top of the validation grid.
  double x_max() const { return x_max_; }

 private:
  RadialProfile() = default;

  FValue core_eval(double x) const;
  Derivs core_derivs(double x) const;
  void finalize();

  ProfileFamily family_ = ProfileFamily::Custom;
  std::string name_;
  double p_ = 0.0;  // ExpInverse exponent
  int m_ = 0;       // Monomial half-degree
  CustomCore custom_;
  bool pure_ = false;
  double cutoff_ = 0.5;
  double kappa_ = 1.0;
  double x_max_ = 10.0;
  // extension data at the cutoff
  double ext_value_ = 0.0;
  double ext_slope_ = 0.0;
  double f_inv_one_ = 0.0;
  double lambda_validity_ = 0.0;
};

struct ValidationIssue {
  std::string check;
  double x;
  double detail;
};

struct ValidationReport {
  bool f0_zero = false;
  bool strictly_increasing = false;
  bool subharmonic = false;
  bool grows_to_infinity = false;
  bool infinite_order_vanishing = false;
  std::vector<ValidationIssue> witnesses;
  bool all_pass() const {
    return f0_zero && strictly_increasing && subharmonic && grows_to_infinity &&
           infinite_order_vanishing;
  }
};

/// Grid checks of the growth-estimate hypotheses (strict growth,
/// subharmonicity, growth to infinity, infinite-order vanishing). Failures
/// carry witnesses.
ValidationReport validate(const RadialProfile& profile, int grid_points = 10000);

/// Lambda-gauge view used by the doubling machinery.
struct LambdaView {
  const RadialProfile* profile;
  double validity;  // < f_inv_one
};

LambdaView make_lambda_view(const RadialProfile& profile);
LambdaView make_lambda_view(const RadialProfile& profile, double validity);

/// forward: Lambda(x); inverse: G(t); f_inverse: f^{-1}(t). Bounds checked.
enum class LambdaDirection { Forward, Inverse, FInverse };
double lambda_and_inverse(const LambdaView& view, double arg, LambdaDirection dir);

}  // namespace bergman
