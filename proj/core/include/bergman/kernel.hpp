#pragma once

#include <complex>
#include <memory>
#include <unordered_map>

#include "bergman/doubling.hpp"
#include "bergman/profile.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

struct DomainPoint {
  std::complex<double> z;
  std::complex<double> w;
  double height;  // Im w - f(|z|), positive inside the domain

  DomainPoint(const RadialProfile& profile, std::complex<double> z_,
              std::complex<double> w_);
};

/// Points with sqrt(|z|^2 + (Re w)^2) < alpha (Im w)^{1/N}.
struct ApproachRegion {
  double alpha = 1.0;
  int N = 1;
  bool contains(const RadialProfile& profile, std::complex<double> z,
                std::complex<double> w) const;
  /// Admissible radius at height t.
  double radius(double t) const;
};

struct SlicingConfig {
  int k_max = 64;
  double tau_min = 1e-8;
  double tau_cap = 1e12;
  double series_rel_tol = 1e-12;
  QuadratureSpec tau_spec{1e-10, 1e-300, 2000};
  QuadratureSpec moment_spec{1e-11, 1e-300, 400};
};

struct KernelValue {
  double value = 0.0;
  double error = 0.0;  // absolute bound: quadrature + series tail + cutoff tails
  bool converged = false;
  int k_used = 0;
  long evaluations = 0;
};

/// Slice data at z=0 for the metric: I_j = (1/pi) Int tau e^{-2 tau v}/m_j dtau
/// and its v-derivatives.
struct DerivativeSlices {
  double I0 = 0.0, I1 = 0.0;
  double dI0_dv = 0.0, d2I0_dv2 = 0.0, dI1_dv = 0.0;
  double error = 0.0;
  bool converged = false;
};

/// Diagonal Bergman kernel of {Im w > f(|z|)} by rotation/translation
/// reduction: K(z, u+iv) = (1/pi) Int_0^inf tau S(tau) e^{-2 tau v} dtau with
/// S(tau) = sum_k |z|^{2k}/m_k(tau), m_k(tau) = 2 pi Int r^{2k+1} e^{-2 tau f} dr.
///
/// Everything is computed in log space (moments underflow/overflow doubles
/// routinely). Moment values are memoized per (k, tau); the cache is owned by
/// the evaluator, so sweeps use one evaluator per worker.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const RadialProfile& profile, SlicingConfig cfg = {});

  KernelValue kernel(double z_abs, double v) const;
  DerivativeSlices slices(double z_abs, double v) const;

  /// log m_k(tau) and its relative error.
  std::pair<double, double> log_moment(int k, double tau) const;

  const RadialProfile& profile() const { return profile_; }
  const SlicingConfig& config() const { return cfg_; }
  size_t cache_size() const { return cache_.size(); }

 private:
  struct SliceSum {
    double log_s;
    double rel_err;
    bool converged;
    int k_used;
  };
  SliceSum slice_sum(double z_abs, double tau) const;

  struct DecayCert {
    double lambda;   // integrand decays like e^{-lambda tau}
    double log_c;    // log of the prefactor
    double rho2;
    double rr;       // (rho1/rho2)^2 of the bracketing interval
  };
  DecayCert decay_certificate(double z_abs, double v) const;

  struct MomentKey {
    int k;
    uint64_t tau_bits;
    bool operator==(const MomentKey& o) const {
      return k == o.k && tau_bits == o.tau_bits;
    }
  };
  struct MomentKeyHash {
    size_t operator()(const MomentKey& key) const {
      return std::hash<uint64_t>()(key.tau_bits * 0x9E3779B97F4A7C15ull + key.k);
    }
  };

  const RadialProfile& profile_;
  SlicingConfig cfg_;
  mutable std::unordered_map<MomentKey, std::pair<double, double>, MomentKeyHash> cache_;
  mutable long evals_ = 0;
};

/// m_k(tau) = 2 pi Int_0^inf r^{2k+1} e^{-2 tau f(r)} dr.
double weighted_moment(const RadialProfile& profile, int k, double tau,
                       const SlicingConfig& cfg = {});

KernelValue reference_kernel_diag(const RadialProfile& profile, double z_abs, double v,
                                  const SlicingConfig& cfg = {});

/// 1-D analogue on the upper half-plane; calibrates the slicing
/// normalization against 1/(4 pi v^2).
double half_plane_kernel_1d(double v, const QuadratureSpec& spec = {});

/// Diagonal kernel of D(0,rho1) x D(0,rho2) at its center.
double bidisc_kernel_center(double rho1, double rho2);

struct InscribedBidisc {
  std::complex<double> center_z;
  double t = 0.0;        // center w = it
  double z_radius = 0.0;  // (c/2) f^{-1}(t)
  double w_radius = 0.0;  // t/2
  double c = 0.0;         // 1/sigma
  double containment_margin = 0.0;  // min over samples of Im w - F(z)
};

/// Containment-verified construction: exact radial criterion
/// f(|z| + z_radius) <= t - w_radius plus a 32x32 boundary sample.
InscribedBidisc make_inscribed_bidisc(const RadialProfile& profile, double c,
                                      std::complex<double> z, double t);

/// r(alpha, N): largest threshold <= min(e^{-1/T}, f(a)^2) below which
/// alpha t^{1/N} < (c/2) f^{-1}(t). Zero when no representable threshold works.
double approach_threshold(const RadialProfile& profile, const DoublingCertificate& cert,
                          const ApproachRegion& region);

/// Threshold-gated inscription used on approach-region points.
InscribedBidisc inscribe_bidisc(const RadialProfile& profile,
                                const DoublingCertificate& cert,
                                const ApproachRegion& region, std::complex<double> z,
                                double t);

}  // namespace bergman
