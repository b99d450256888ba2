#pragma once

#include <string>
#include <variant>
#include <vector>

#include "bergman/profile.hpp"

namespace bergman {

/// Witness (sigma, R, T, C') for the doubling inequality
/// 2*Lambda(x) <= Lambda(sigma x) on [0, R/sigma], grid-verified.
struct DoublingCertificate {
  double sigma = 0.0;
  double R = 0.0;
  double T = 0.0;       // Lambda(R/sigma)
  double cprime = 0.0;  // sigma - 1, the first-power constant
  int grid_size = 0;
  double min_margin = 0.0;  // min over grid of Lambda(sigma x) - 2 Lambda(x)
};

struct DoublingWitness {
  double sigma;
  double x;
  double lhs;  // 2 Lambda(x)
  double rhs;  // Lambda(sigma x)
};

/// One witness per failed ladder candidate.
struct NotDoublingEvidence {
  std::vector<DoublingWitness> witnesses;
  double sigma_max = 0.0;
};

using DoublingOutcome = std::variant<DoublingCertificate, NotDoublingEvidence>;

/// Smallest sigma on the geometric ladder 1.05^j (capped at sigma_max) whose
/// certificate verifies on a grid of [0, R/sigma].
DoublingOutcome find_sigma(const LambdaView& view, double R, double sigma_max,
                           int grid_size = 10000);

/// min over the grid of Lambda(sigma x) - 2 Lambda(x), x in [0, R/sigma].
double doubling_margin(const LambdaView& view, double sigma, double R, int grid_size);

struct DiffSquaresResult {
  double max_ratio;
  double bound;  // sigma^{2n} - 1 + tol
  bool pass;
};

/// max over t in (0, T] of (G(2t)^{2n} - G(t)^{2n}) / G(t)^{2n}, n in {1,2},
/// against the certificate-derived bound.
DiffSquaresResult diff_of_squares_check(const LambdaView& view,
                                        const DoublingCertificate& cert, int n,
                                        int grid_size = 10000, double tol = 1e-9);

/// Increasing function given by samples; evaluated by linear interpolation.
struct SampledFunction {
  std::vector<double> x;
  std::vector<double> y;
  double operator()(double t) const;
  double eps0() const { return x.back(); }
};

struct PowerConvexityResult {
  int nu = 0;         // min m >= 0 with 2^m >= p
  int N = 0;          // min N >= 1 with 2^N >= 2 B^2
  double R_out = 0.0;  // 2^{-(nu+1)} eps0
  double sigma_chi = 0.0;
  double sigma_out = 0.0;  // sigma_chi^N
};

/// Bridge from power-convexity of chi to a doubling constant for any gauge
/// sandwiched between chi/B and B*chi. Preconditions: chi(0)=0, chi
/// increasing, chi^p convex (second divided differences >= -tol).
PowerConvexityResult doubling_from_power_convexity(const SampledFunction& chi, double p,
                                                   double B, double sigma_max = 1e6,
                                                   int grid_size = 10000);

std::string certificate_to_json(const DoublingCertificate& cert);

}  // namespace bergman
