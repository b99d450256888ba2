#pragma once

#include <complex>
#include <variant>

#include "bergman/doubling.hpp"
#include "bergman/profile.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

/// The explicit competitor functions driving the kernel and metric bounds.
/// All are holomorphic on the domain: the only pole sits at w = -it, below
/// the boundary.
namespace candidates {

/// |z|^alpha t^beta zeta^n / (w+it)^2
struct Psi {
  double alpha;
  double beta;
  int n;  // 0 or 1
  double t;
  std::complex<double> z;
};

/// -4 t^2 / (w+it)^2; equals 1 at every center (z, it)
struct PhiKernel {
  double t;
};

/// t^3 w^n / (w+it)^3
struct PhiAlt {
  int n;  // 0 or 1
  double t;
};

/// -8 i t^3 (w-it) / (xi2 (w+it)^3); vanishes at (z,it), d/dw pairing 1/xi2
struct PhiMetric2 {
  double t;
  std::complex<double> xi2;
};

/// -4 (zeta-z) t^2 / (xi1 (w+it)^2); vanishes at (z,it), d/dzeta pairing 1/xi1
struct PhiMetric1 {
  std::complex<double> z;
  double t;
  std::complex<double> xi1;
};

}  // namespace candidates

using Candidate = std::variant<candidates::Psi, candidates::PhiKernel,
                               candidates::PhiAlt, candidates::PhiMetric2,
                               candidates::PhiMetric1>;

std::complex<double> candidate_eval(const Candidate& c, std::complex<double> zeta,
                                    std::complex<double> w);

double candidate_t(const Candidate& c);

struct AdmissibilityResult {
  std::complex<double> value_at_center;
  std::complex<double> pairing;  // d_zeta phi * xi1 + d_w phi * xi2 at (z, it)
  bool pass;                      // value ~ 0 and pairing ~ 1
};

/// Membership in the class defining the auxiliary J-infimum at (z, it; xi).
AdmissibilityResult admissibility_check(const Candidate& c, std::complex<double> z,
                                        double t,
                                        std::complex<double> xi1,
                                        std::complex<double> xi2);

enum class NormDomain { FullDomain, BidiscCut };

struct NormEstimate {
  double norm_sq = 0.0;
  double error = 0.0;
  NormDomain domain = NormDomain::FullDomain;
};

/// Exact squared L^2 norm by rotational reduction. FullDomain uses the
/// closed-form (v+t)-antiderivatives of the inner integrals; BidiscCut
/// (domain cut with D(0,a) x D, a = min(f^{-1}(1), 1)) integrates the lune
/// {f(r) < v, u^2+v^2 < 1} with exact u-antiderivatives.
///
/// Throws computation_error for the two candidates that are not L^2 on the
/// full domain (Psi with n=1 and PhiMetric1: the radial integral diverges
/// logarithmically under quadratic growth).
NormEstimate candidate_norm_sq(const Candidate& c, const RadialProfile& profile,
                               NormDomain domain, const QuadratureSpec& spec = {});

struct ReducedIntegral {
  IntegralResult total;
  double R_t = 0.0;       // f^{-1}(t)
  double R_sqrt_t = 0.0;  // f^{-1}(sqrt t)
  IntegralResult parts[3];  // [0,R_t], [R_t, R_sqrt_t], [R_sqrt_t, a], clamped
};

/// Int_0^a r^w / (t+f(r))^power dr with w = 2n+1 when power = 2 (kernel
/// chain) and w = 1 when power = 4-2n (metric chain), plus the split at
/// R_t and R_sqrt(t).
ReducedIntegral reduced_integral(const RadialProfile& profile, int n, double t,
                                 double a, int power,
                                 const QuadratureSpec& spec = {});

struct KernelLowerBound {
  double lower_bound = 0.0;
  double error = 0.0;
  NormDomain domain = NormDomain::FullDomain;
};

/// Bergman-Fuchs lower bound 1/||phi_t||^2 for the diagonal kernel at (z,it).
/// FullDomain needs no localisation constant and no height threshold.
KernelLowerBound kernel_lower_certificate(const RadialProfile& profile,
                                          std::complex<double> z, double t,
                                          NormDomain domain = NormDomain::FullDomain,
                                          const QuadratureSpec& spec = {});

struct JUpperBound {
  double j_ub = 0.0;
  double error = 0.0;
  int case_used = 0;  // 1: xi2-candidate, 2: xi1-candidate
  NormDomain domain = NormDomain::FullDomain;
};

/// Upper bound for the auxiliary infimum J at (z, it; xi) by the admissible
/// candidate norm. Case 2 exists only on the bidisc cut.
JUpperBound j_upper_bound(const RadialProfile& profile, std::complex<double> z,
                          double t, std::complex<double> xi1,
                          std::complex<double> xi2, NormDomain domain,
                          const QuadratureSpec& spec = {});

struct R0Threshold {
  double r0 = 0.0;
  double f_a_sq = 0.0;   // f(a)^2
  double exp_inv_T = 0.0;  // e^{-1/T}
  double c_star = 0.0;   // threshold of f^{-1}(t)^8 >= t (binding n=1 case)
  double a = 0.0;
};

R0Threshold r0_threshold(const RadialProfile& profile, const DoublingCertificate& cert);

}  // namespace bergman
