#pragma once

#include <functional>
#include <vector>

namespace bergman {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Upper bound on |∫_L^∞ fn| as a function of L. Used to truncate
/// semi-infinite integrals with a provable tail.
using TailBound = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) on [a,b]. An infinite upper limit is mapped
/// to (0,1] via tau = a + (1-u)/u; prefer integrate_decaying when an analytic
/// tail bound is available.
IntegralResult integrate(const Integrand& fn, double a, double b,
                         const QuadratureSpec& spec = {});

/// Same engine, seeded with the given initial panel boundaries
/// (breaks must be strictly increasing, finite, size >= 2).
IntegralResult integrate_panels(const Integrand& fn, const std::vector<double>& breaks,
                                const QuadratureSpec& spec = {});

/// ∫_a^∞ fn with a caller-supplied decay certificate: tail(L) bounds
/// |∫_L^∞ fn|. The cutoff grows until the tail bound is negligible; the
/// residual bound is added to the error estimate.
IntegralResult integrate_decaying(const Integrand& fn, double a, const TailBound& tail,
                                  const QuadratureSpec& spec = {});

/// Sums term(0) + term(1) + ... until tail_bound(k) <= max(rel*partial, abs).
/// evaluations records the number of terms consumed.
IntegralResult sum_series(const std::function<double(long)>& term,
                          const std::function<double(long)>& tail_bound,
                          const QuadratureSpec& spec = {}, long max_terms = 100000);

namespace detail {
/// Single Gauss-Kronrod 7/15 panel; returns (value, error, resabs).
struct PanelResult {
  double value;
  double error;
  double resabs;
};
PanelResult gk15(const Integrand& fn, double a, double b);
}  // namespace detail

}  // namespace bergman
