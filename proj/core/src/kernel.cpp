#include "bergman/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Int_L^inf tau^n e^{-lam tau} dtau
double gamma_tail(int n, double lam, double L) {
  double fact_ratio = 1.0;  // n!/i! running from i=n down to 0
  double sum = 0.0;
  for (int i = n; i >= 0; --i) {
    sum += fact_ratio * std::pow(L, i) / std::pow(lam, n + 1 - i);
    fact_ratio *= i;  // builds n!/ (i-1)!
  }
  return std::exp(-lam * L) * sum;
}

}  // namespace

DomainPoint::DomainPoint(const RadialProfile& profile, std::complex<double> z_,
                         std::complex<double> w_)
    : z(z_), w(w_), height(w_.imag() - profile.eval(std::abs(z_)).value) {
  if (!(height > 0.0))
    throw domain_error("DomainPoint: Im w must exceed f(|z|)");
}

bool ApproachRegion::contains(const RadialProfile& profile, std::complex<double> z,
                              std::complex<double> w) const {
  const double t = w.imag();
  if (!(t > profile.eval(std::abs(z)).value)) return false;
  const double r = std::sqrt(std::norm(z) + w.real() * w.real());
  return r < radius(t);
}

double ApproachRegion::radius(double t) const {
  return alpha * std::pow(t, 1.0 / N);
}

KernelEvaluator::KernelEvaluator(const RadialProfile& profile, SlicingConfig cfg)
    : profile_(profile), cfg_(cfg) {}

std::pair<double, double> KernelEvaluator::log_moment(int k, double tau) const {
  MomentKey key{k, 0};
  static_assert(sizeof(double) == sizeof(uint64_t));
  std::memcpy(&key.tau_bits, &tau, sizeof(tau));
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  const double n = 2.0 * k + 1.0;
  auto lexp = [&](double r) -> double {
    if (!(r > 0.0)) return -kInf;
    const double f = profile_.eval(r).value;  // underflow to 0 means weight 1
    return n * std::log(r) - 2.0 * tau * f;
  };

  // coarse peak scan
  const double scan_top =
      std::max({2.0, profile_.pure() ? 1.0 : 2.0 * profile_.cutoff()});
  double maxl = -kInf, argmax = 1e-10;
  for (int i = 0; i <= 220; ++i) {
    const double r =
        std::exp(std::log(1e-10) + (std::log(scan_top) - std::log(1e-10)) * i / 220.0);
    const double l = lexp(r);
    if (l > maxl) {
      maxl = l;
      argmax = r;
    }
  }
  // expand right until the exponent has dropped well under the peak
  double r_cut = scan_top;
  for (;;) {
    const double l = lexp(r_cut);
    if (l > maxl) {
      maxl = l;
      argmax = r_cut;
    }
    if (l < maxl - 85.0 || r_cut > 1e15) break;
    r_cut *= 1.5;
  }

  // dyadic panels around the peak, trimmed where the integrand is dead
  int j_lo = 0;
  while (j_lo > -60 && lexp(argmax * std::pow(2.0, j_lo - 1)) > maxl - 80.0) --j_lo;
  std::vector<double> breaks{0.0};
  for (int j = j_lo - 1; argmax * std::pow(2.0, j) < r_cut; ++j)
    breaks.push_back(argmax * std::pow(2.0, j));
  breaks.push_back(r_cut);

  auto scaled = [&](double r) {
    const double l = lexp(r) - maxl;
    return l > -745.0 ? std::exp(l) : 0.0;
  };
  auto res = integrate_panels(scaled, breaks, cfg_.moment_spec);
  if (!res.converged || !(res.value > 0.0)) {
    std::ostringstream os;
    os << "weighted moment did not converge at (k=" << k << ", tau=" << tau << ")";
    throw computation_error(os.str());
  }
  // tail beyond r_cut: exponent decreasing at rate >= |l'(r_cut)|
  const auto d = profile_.derivs(r_cut);
  const double rate = std::max(2.0 * tau * d.f1 - n / r_cut, 1e-10);
  const double tail = scaled(r_cut) / rate;

  const double log_m = std::log(2.0 * kPi) + maxl + std::log(res.value);
  const double rel = res.error_estimate / res.value + tail / res.value;
  auto entry = std::make_pair(log_m, rel);
  cache_.emplace(key, entry);
  evals_ += res.evaluations;
  return entry;
}

KernelEvaluator::SliceSum KernelEvaluator::slice_sum(double z_abs, double tau) const {
  if (z_abs == 0.0) {
    auto [lm, rel] = log_moment(0, tau);
    return {-lm, rel, true, 0};
  }
  const double lz2 = 2.0 * std::log(z_abs);
  double rel_max = 0.0;

  auto term = [&](int k) {
    auto [lm, rel] = log_moment(k, tau);
    rel_max = std::max(rel_max, rel);
    return k * lz2 - lm;
  };

  double lt_prev = term(0);
  double big = lt_prev;     // running max for logsumexp
  double sum = 1.0;         // sum of exp(lt - big)
  double tail_rel = 0.0;
  bool converged = false;
  int k = 0;
  while (k < cfg_.k_max) {
    const double lt = term(k + 1);
    ++k;
    if (lt > big) {
      sum = sum * std::exp(big - lt) + 1.0;
      big = lt;
    } else {
      sum += std::exp(lt - big);
    }
    const double rho = std::exp(lt - lt_prev);
    lt_prev = lt;
    if (rho < 0.9) {
      // moment log-convexity makes term ratios non-increasing, so the
      // remaining tail is geometrically dominated
      const double tail = std::exp(lt - big) * rho / (1.0 - rho);
      if (tail <= cfg_.series_rel_tol * sum) {
        tail_rel = tail / sum;
        converged = true;
        break;
      }
    }
  }
  return {big + std::log(sum), rel_max + tail_rel, converged, k};
}

KernelEvaluator::DecayCert KernelEvaluator::decay_certificate(double z_abs,
                                                              double v) const {
  const double fi = profile_.f_inverse(v);
  const double rho1 = z_abs + 0.05 * (fi - z_abs);
  const double rho2 = z_abs + 0.10 * (fi - z_abs);
  const double q2 = (z_abs / rho2) * (z_abs / rho2);
  const double rr = (rho1 / rho2) * (rho1 / rho2);
  DecayCert cert;
  cert.rho2 = rho2;
  cert.rr = rr;
  cert.lambda = 2.0 * (v - profile_.eval(rho2).value);
  cert.log_c = -std::log(kPi * rho2 * rho2 * (1.0 - rr) * (1.0 - q2) * (1.0 - q2));
  return cert;
}

KernelValue KernelEvaluator::kernel(double z_abs, double v) const {
  if (z_abs < 0.0) throw domain_error("kernel: |z| must be nonnegative");
  const double f_at_z = profile_.eval(z_abs).value;
  if (!(v > f_at_z)) throw domain_error("kernel: point outside the domain (v <= f(|z|))");
  if (!(v < profile_.eval(profile_.x_max()).value))
    throw domain_error("kernel: height exceeds the supported range");

  const DecayCert cert = decay_certificate(z_abs, v);
  auto tail = [&](double L) {
    return std::exp(cert.log_c) / kPi * gamma_tail(1, cert.lambda, L);
  };

  double max_srel = 0.0;
  bool series_ok = true;
  int k_used = 0;
  auto integrand = [&](double tau) {
    const auto s = slice_sum(z_abs, tau);
    if (!s.converged) series_ok = false;
    max_srel = std::max(max_srel, s.rel_err);
    k_used = std::max(k_used, s.k_used);
    const double l = std::log(tau) + s.log_s - 2.0 * tau * v - std::log(kPi);
    return l > -745.0 ? std::exp(l) : 0.0;
  };

  // grow half-decade panels until the decay certificate closes the tail
  std::vector<double> breaks{cfg_.tau_min};
  double accum = 0.0;
  double L = cfg_.tau_min;
  bool tail_ok = false;
  const double step = std::sqrt(10.0);
  while (true) {
    const double next = L * step;
    accum += detail::gk15(integrand, L, next).value;
    breaks.push_back(next);
    L = next;
    const double target =
        std::max(cfg_.tau_spec.abs_tol, cfg_.tau_spec.rel_tol * accum);
    if (tail(L) <= 0.25 * target) {
      tail_ok = true;
      break;
    }
    if (L >= cfg_.tau_cap) break;
  }

  auto res = integrate_panels(integrand, breaks, cfg_.tau_spec);
  // below tau_min the integrand is bounded by C tau e^{2 tau f(rho2)}
  const double low_tail = std::exp(cert.log_c) / kPi * 0.5 * cfg_.tau_min *
                          cfg_.tau_min *
                          std::exp(2.0 * cfg_.tau_min * profile_.eval(cert.rho2).value);

  KernelValue out;
  out.value = res.value;
  out.error = res.error_estimate + tail(L) + low_tail + res.value * max_srel;
  out.k_used = k_used;
  out.evaluations = res.evaluations;
  out.converged =
      res.converged && tail_ok && series_ok &&
      out.error <= 50.0 * std::max(cfg_.tau_spec.abs_tol,
                                   cfg_.tau_spec.rel_tol * std::fabs(out.value));
  return out;
}

DerivativeSlices KernelEvaluator::slices(double z_abs, double v) const {
  const double f_at_z = profile_.eval(z_abs).value;
  if (!(v > f_at_z)) throw domain_error("slices: point outside the domain");

  const DecayCert cert = decay_certificate(z_abs, v);

  // per-j prefactor: 1/m_j <= (2j+2) e^{2 tau f(rho2)} / (2 pi rho2^{2j+2}(1-rr^{j+1}))
  auto log_c_j = [&](int j) {
    const double r2 = cert.rho2;
    return std::log(2.0 * j + 2.0) -
           std::log(2.0 * kPi * std::pow(r2, 2.0 * j + 2.0) * (1.0 - cert.rr));
  };

  double max_rel = 0.0;
  bool ok = true;
  auto make_integrand = [&](int j, int m) {
    return [this, j, m, v, &max_rel, &ok](double tau) {
      auto [lm, rel] = log_moment(j, tau);
      max_rel = std::max(max_rel, rel);
      const double l = std::log(tau) + m * std::log(2.0 * tau) - lm - 2.0 * tau * v -
                       std::log(kPi);
      (void)ok;
      return l > -745.0 ? std::exp(l) : 0.0;
    };
  };

  // shared panel skeleton driven by the slowest-decaying integrand (j=0,m=2)
  auto probe = make_integrand(0, 2);
  auto tail02 = [&](double L) {
    return std::exp(log_c_j(0)) / kPi * 4.0 * gamma_tail(3, cert.lambda, L);
  };
  std::vector<double> breaks{cfg_.tau_min};
  double accum = 0.0, L = cfg_.tau_min;
  const double step = std::sqrt(10.0);
  while (true) {
    const double next = L * step;
    accum += detail::gk15(probe, L, next).value;
    breaks.push_back(next);
    L = next;
    const double target =
        std::max(cfg_.tau_spec.abs_tol, cfg_.tau_spec.rel_tol * accum);
    if (tail02(L) <= 0.25 * target) break;
    if (L >= cfg_.tau_cap) {
      ok = false;
      break;
    }
  }

  DerivativeSlices out;
  double err = 0.0;
  struct Item {
    int j, m;
    double* slot;
    double sign;
  };
  Item items[] = {{0, 0, &out.I0, 1.0},
                  {1, 0, &out.I1, 1.0},
                  {0, 1, &out.dI0_dv, -1.0},
                  {0, 2, &out.d2I0_dv2, 1.0},
                  {1, 1, &out.dI1_dv, -1.0}};
  for (const auto& it : items) {
    auto fn = make_integrand(it.j, it.m);
    auto res = integrate_panels(fn, breaks, cfg_.tau_spec);
    const double tl = std::exp(log_c_j(it.j)) / kPi * std::pow(2.0, it.m) *
                      gamma_tail(it.m + 1, cert.lambda, L);
    *it.slot = it.sign * res.value;
    err += res.error_estimate + tl + std::fabs(res.value) * max_rel;
    ok = ok && res.converged;
  }
  out.error = err;
  out.converged = ok;
  return out;
}

double weighted_moment(const RadialProfile& profile, int k, double tau,
                       const SlicingConfig& cfg) {
  if (!(tau > 0.0)) throw domain_error("weighted_moment: tau must be positive");
  if (k < 0) throw domain_error("weighted_moment: k must be nonnegative");
  KernelEvaluator ev(profile, cfg);
  auto [lm, rel] = ev.log_moment(k, tau);
  (void)rel;
  return std::exp(lm);
}

KernelValue reference_kernel_diag(const RadialProfile& profile, double z_abs, double v,
                                  const SlicingConfig& cfg) {
  KernelEvaluator ev(profile, cfg);
  return ev.kernel(z_abs, v);
}

double half_plane_kernel_1d(double v, const QuadratureSpec& spec) {
  if (!(v > 0.0)) throw domain_error("half_plane_kernel_1d: v must be positive");
  auto fn = [v](double tau) { return tau * std::exp(-2.0 * v * tau); };
  auto tail = [v](double L) { return gamma_tail(1, 2.0 * v, L); };
  auto res = integrate_decaying(fn, 0.0, tail, spec);
  return res.value / kPi;
}

double bidisc_kernel_center(double rho1, double rho2) {
  if (!(rho1 > 0.0) || !(rho2 > 0.0))
    throw domain_error("bidisc_kernel_center: radii must be positive");
  return 1.0 / (kPi * kPi * rho1 * rho1 * rho2 * rho2);
}

InscribedBidisc make_inscribed_bidisc(const RadialProfile& profile, double c,
                                      std::complex<double> z, double t) {
  if (!(c > 0.0)) throw domain_error("make_inscribed_bidisc: need c > 0");
  const double z_abs = std::abs(z);
  if (!(t > profile.eval(z_abs).value))
    throw domain_error("make_inscribed_bidisc: center outside the domain");

  InscribedBidisc b;
  b.center_z = z;
  b.t = t;
  b.c = c;
  b.z_radius = 0.5 * c * profile.f_inverse(t);
  b.w_radius = 0.5 * t;

  // exact radial criterion: worst boundary point has |zeta| = |z| + rho1 and
  // Im w = t - rho2
  const double worst = profile.eval(z_abs + b.z_radius).value;
  if (!(worst <= t - b.w_radius)) {
    std::ostringstream os;
    os << "bidisc containment fails: f(|z|+rho1) = " << worst << " > t - rho2 = "
       << (t - b.w_radius) << " (certificate c likely too large)";
    throw geometry_error(os.str());
  }

  // 32x32 boundary sample of F(zeta) < Im w
  double min_margin = kInf;
  for (int i = 0; i < 32; ++i) {
    const double th = 2.0 * kPi * i / 32.0;
    const std::complex<double> zeta =
        z + b.z_radius * std::complex<double>(std::cos(th), std::sin(th));
    const double fz = profile.eval(std::abs(zeta)).value;
    for (int j = 0; j < 32; ++j) {
      const double ph = 2.0 * kPi * j / 32.0;
      const double im_w = t + b.w_radius * std::sin(ph);
      min_margin = std::min(min_margin, im_w - fz);
    }
  }
  if (!(min_margin > 0.0))
    throw geometry_error("bidisc containment sample failed");
  b.containment_margin = min_margin;
  return b;
}

double approach_threshold(const RadialProfile& profile, const DoublingCertificate& cert,
                          const ApproachRegion& region) {
  const double a = std::min(profile.f_inv_one(), 1.0);
  const double fa = profile.eval(a).value;
  const double cap = std::min(std::exp(-1.0 / cert.T), fa * fa);
  const double c = 1.0 / cert.sigma;

  auto pred = [&](double t) {
    return region.alpha * std::pow(t, 1.0 / region.N) <
           0.5 * c * profile.f_inverse(t);
  };

  // scan upward from far below the cap; the admissibility inequality can
  // switch only finitely often on (0, cap]
  const int steps = 121;  // 30 decades, 4 points per decade
  double last_good = 0.0, first_bad = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double t = cap * std::pow(10.0, -30.0 + 30.0 * i / (steps - 1));
    if (pred(t)) {
      last_good = t;
    } else {
      first_bad = t;
      break;
    }
  }
  if (first_bad == 0.0) return cap;
  if (last_good == 0.0) return 0.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = std::sqrt(last_good * first_bad);
    if (pred(mid))
      last_good = mid;
    else
      first_bad = mid;
  }
  return last_good;
}

InscribedBidisc inscribe_bidisc(const RadialProfile& profile,
                                const DoublingCertificate& cert,
                                const ApproachRegion& region, std::complex<double> z,
                                double t) {
  const std::complex<double> w(0.0, t);
  if (!region.contains(profile, z, w))
    throw domain_error("inscribe_bidisc: center not in the approach region");
  const double r = approach_threshold(profile, cert, region);
  if (!(t < r)) {
    std::ostringstream os;
    os << "inscribe_bidisc: t = " << t << " >= r(alpha,N) = " << r;
    throw threshold_error(os.str(), r);
  }
  return make_inscribed_bidisc(profile, 1.0 / cert.sigma, z, t);
}

}  // namespace bergman
