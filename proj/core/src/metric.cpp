#include "bergman/metric.hpp"

#include <cmath>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

using cx = std::complex<double>;

double check_pd(const MetricForm& m) {
  const double det = m.g11 * m.g22 - std::norm(m.g12);
  if (!(m.g11 > 0.0) || !(m.g22 > 0.0) || !(det > 0.0)) {
    std::ostringstream os;
    os << "metric form not positive definite at (|z|=" << m.z_abs << ", v=" << m.v
       << "): g11=" << m.g11 << " g22=" << m.g22 << " |g12|=" << std::abs(m.g12)
       << " det=" << det;
    throw computation_error(os.str());
  }
  return det;
}

MetricForm metric_analytic(const KernelEvaluator& ev, double v) {
  const auto s = ev.slices(0.0, v);
  if (!s.converged)
    throw computation_error("metric_reference: slice integrals did not converge");
  MetricForm m;
  m.z_abs = 0.0;
  m.v = v;
  m.g11 = s.I1 / s.I0;
  m.g22 = 0.25 * (s.d2I0_dv2 * s.I0 - s.dI0_dv * s.dI0_dv) / (s.I0 * s.I0);
  m.g12 = cx(0.0, 0.0);
  check_pd(m);
  return m;
}

MetricForm metric_fd(const RadialProfile& profile, double z_abs, double v,
                     SlicingConfig cfg) {
  // the log-kernel second differences eat ~h^{-2} of the kernel's relative
  // error, so the quadrature runs much tighter than the requested steps
  cfg.tau_spec.rel_tol = std::min(cfg.tau_spec.rel_tol, 1e-12);
  cfg.moment_spec.rel_tol = std::min(cfg.moment_spec.rel_tol, 1e-13);
  KernelEvaluator ev(profile, cfg);

  auto logk = [&](double rho, double vv) {
    auto kv = ev.kernel(std::fabs(rho), vv);
    if (!kv.converged)
      throw computation_error("metric_reference: kernel evaluation did not converge");
    return std::log(kv.value);
  };

  double hv = 1e-3 * v;
  double hr = 1e-3 * std::max(z_abs, profile.f_inverse(v));
  // keep the stencil inside the domain
  for (int guard = 0; guard < 4; ++guard) {
    if (v - 2.0 * hv > profile.eval(z_abs + 2.0 * hr).value) break;
    hv *= 0.25;
    hr *= 0.25;
  }

  const double L0 = logk(z_abs, v);
  auto lvv = [&](double h) {
    return (logk(z_abs, v + h) - 2.0 * L0 + logk(z_abs, v - h)) / (h * h);
  };
  auto lxx = [&](double h) {
    return (logk(z_abs + h, v) - 2.0 * L0 + logk(std::fabs(z_abs - h), v)) / (h * h);
  };
  auto lyy = [&](double h) {
    return 2.0 * (logk(std::hypot(z_abs, h), v) - L0) / (h * h);
  };
  auto lrv = [&](double h, double g) {
    return (logk(z_abs + h, v + g) - logk(z_abs + h, v - g) -
            logk(std::fabs(z_abs - h), v + g) + logk(std::fabs(z_abs - h), v - g)) /
           (4.0 * h * g);
  };
  auto richardson = [](double coarse, double fine) {
    return (4.0 * fine - coarse) / 3.0;
  };

  const double Lvv = richardson(lvv(hv), lvv(0.5 * hv));
  const double Lxx = richardson(lxx(hr), lxx(0.5 * hr));
  const double Lyy = richardson(lyy(hr), lyy(0.5 * hr));
  const double Lrv = richardson(lrv(hr, hv), lrv(0.5 * hr, 0.5 * hv));

  MetricForm m;
  m.z_abs = z_abs;
  m.v = v;
  m.g11 = 0.25 * (Lxx + Lyy);
  m.g22 = 0.25 * Lvv;
  m.g12 = z_abs == 0.0 ? cx(0.0, 0.0) : cx(0.0, 0.25 * Lrv);
  check_pd(m);
  return m;
}

}  // namespace

double MetricForm::eval(cx xi1, cx xi2) const {
  return g11 * std::norm(xi1) + 2.0 * std::real(g12 * xi1 * std::conj(xi2)) +
         g22 * std::norm(xi2);
}

bool MetricForm::positive_definite() const {
  return g11 > 0.0 && g22 > 0.0 && g11 * g22 - std::norm(g12) > 0.0;
}

MetricForm metric_reference(const RadialProfile& profile, double z_abs, double v,
                            const SlicingConfig& cfg, MetricMode mode) {
  if (z_abs < 0.0) throw domain_error("metric_reference: |z| must be nonnegative");
  if (!(v > profile.eval(z_abs).value))
    throw domain_error("metric_reference: point outside the domain");
  if (mode == MetricMode::Analytic ||
      (mode == MetricMode::Auto && z_abs == 0.0)) {
    if (z_abs != 0.0)
      throw domain_error("metric_reference: analytic slices require z = 0");
    KernelEvaluator ev(profile, cfg);
    return metric_analytic(ev, v);
  }
  return metric_fd(profile, z_abs, v, cfg);
}

double metric_eval(const MetricForm& form, cx xi1, cx xi2) {
  return form.eval(xi1, xi2);
}

double bidisc_metric_center(double rho1, double rho2, cx xi1, cx xi2) {
  if (!(rho1 > 0.0) || !(rho2 > 0.0))
    throw domain_error("bidisc_metric_center: radii must be positive");
  return 2.0 / (rho1 * rho1) * std::norm(xi1) + 2.0 / (rho2 * rho2) * std::norm(xi2);
}

MetricLowerBound metric_lower_certificate(const RadialProfile& profile, cx z, double t,
                                          cx xi1, cx xi2, double k_upper,
                                          NormDomain j_domain,
                                          const QuadratureSpec& spec) {
  if (!(k_upper > 0.0))
    throw domain_error("metric_lower_certificate: k_upper must be positive");
  const auto j = j_upper_bound(profile, z, t, xi1, xi2, j_domain, spec);
  MetricLowerBound out;
  out.value = 1.0 / (k_upper * j.j_ub);
  out.error = j.error / (k_upper * j.j_ub * j.j_ub);
  out.j_case = j.case_used;
  out.j_domain = j.domain;
  return out;
}

}  // namespace bergman
