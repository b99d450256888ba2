#pragma once

#include <complex>

#include "bergman/certificates.hpp"
#include "bergman/kernel.hpp"

namespace bergman {

/// Hermitian metric form at a base point (|z|, v); g12 vanishes at z = 0 by
/// rotational symmetry.
struct MetricForm {
  double g11 = 0.0;
  double g22 = 0.0;
  std::complex<double> g12{0.0, 0.0};
  double z_abs = 0.0;
  double v = 0.0;

  double eval(std::complex<double> xi1, std::complex<double> xi2) const;
  bool positive_definite() const;
};

enum class MetricMode {
  Auto,              // analytic slices at z = 0, finite differences otherwise
  Analytic,          // z = 0 only
  FiniteDifference,  // log-kernel Hessian with Richardson refinement
};

/// Complex Hessian of log K on the diagonal.
MetricForm metric_reference(const RadialProfile& profile, double z_abs, double v,
                            const SlicingConfig& cfg = {},
                            MetricMode mode = MetricMode::Auto);

double metric_eval(const MetricForm& form, std::complex<double> xi1,
                   std::complex<double> xi2);

/// Metric of D(0,rho1) x D(0,rho2) at the center: (2/rho1^2)|xi1|^2 + (2/rho2^2)|xi2|^2.
double bidisc_metric_center(double rho1, double rho2, std::complex<double> xi1,
                            std::complex<double> xi2);

struct MetricLowerBound {
  double value = 0.0;
  double error = 0.0;
  int j_case = 0;
  NormDomain j_domain = NormDomain::FullDomain;
};

/// 1/(k_upper * J-upper-bound): a certified lower bound for the metric at
/// (z, it; xi). k_upper must dominate the diagonal kernel there (use the
/// inscribed-bidisc center value).
MetricLowerBound metric_lower_certificate(const RadialProfile& profile,
                                          std::complex<double> z, double t,
                                          std::complex<double> xi1,
                                          std::complex<double> xi2, double k_upper,
                                          NormDomain j_domain = NormDomain::FullDomain,
                                          const QuadratureSpec& spec = {});

}  // namespace bergman
