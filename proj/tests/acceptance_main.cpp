// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria marked with a time budget fail when they overrun it.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bergman/certificates.hpp"
#include "bergman/doubling.hpp"
#include "bergman/errors.hpp"
#include "bergman/kernel.hpp"
#include "bergman/metric.hpp"
#include "bergman/profile.hpp"
#include "bergman/verify.hpp"

using namespace bergman;
using cx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
};

DoublingCertificate cert_of(const RadialProfile& pr, double R) {
  auto view = make_lambda_view(pr);
  auto out = find_sigma(view, R, 1e3);
  if (!std::holds_alternative<DoublingCertificate>(out))
    throw computation_error("no doubling certificate for " + pr.name());
  return std::get<DoublingCertificate>(out);
}

double siegel(double z, double v) {
  const double h = v - z * z;
  return 1.0 / (2.0 * kPi * kPi * h * h * h);
}

// ---------------------------------------------------------------- criterion 1
bool c1_siegel_oracle(std::string& detail) {
  Check chk;
  auto quad = RadialProfile::monomial_pure(1);
  SlicingConfig cfg;
  cfg.k_max = 768;

  std::vector<std::pair<double, double>> pts;  // (|z|, v)
  const double h_lo = std::log(0.05), h_hi = std::log(2.0);
  for (int iz = 0; iz < 5; ++iz) {
    const double z = 0.5 * iz / 4.0;
    for (int ih = 0; ih < 5; ++ih) {
      const double h = std::exp(h_lo + (h_hi - h_lo) * ih / 4.0);
      pts.emplace_back(z, h + z * z);
    }
  }

  const int workers = resolve_thread_count(0);
  std::vector<KernelEvaluator> evals;
  for (int w = 0; w < workers; ++w) evals.emplace_back(quad, cfg);
  std::vector<double> errs(pts.size(), 1.0);
  std::vector<bool> conv(pts.size(), false);
  parallel_for_indexed(static_cast<int>(pts.size()), workers, [&](int i, int w) {
    auto kv = evals[w].kernel(pts[i].first, pts[i].second);
    errs[i] = rel_err(kv.value, siegel(pts[i].first, pts[i].second));
    conv[i] = kv.converged;
  });
  double worst = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    worst = std::max(worst, errs[i]);
    chk.require(conv[i], "unconverged grid point");
  }
  chk.require(worst <= 1e-6, "worst rel err above 1e-6");

  // second derivation: ball kernel through the Cayley map must reproduce the
  // same closed form the slicing is tested against
  for (auto [z, v] : std::vector<std::pair<double, double>>{{0.0, 1.0},
                                                            {0.25, 0.5},
                                                            {0.5, 0.35}}) {
    const cx zeta2((1.0 - v) / (1.0 + v), 0.0);
    const cx zeta1(2.0 * z / (1.0 + v), 0.0);
    const double n2 = std::norm(zeta1) + std::norm(zeta2);
    const double k_ball = 2.0 / (kPi * kPi * std::pow(1.0 - n2, 3));
    const double k_cayley = k_ball * std::pow(std::abs(cx(1.0, 0.0) + zeta2), 6) / 4.0;
    chk.require(rel_err(k_cayley, siegel(z, v)) < 1e-12,
                "Cayley route disagrees with the Laplace-slice closed form");
  }

  std::ostringstream os;
  os << "25 points, worst rel err " << worst;
  if (!chk.detail.str().empty()) os << "; " << chk.detail.str();
  detail = os.str();
  return chk.ok;
}

// ---------------------------------------------------------------- criterion 2
bool c2_calibration(std::string& detail) {
  Check chk;
  double worst = 0.0;
  for (double v : {0.1, 1.0, 10.0}) {
    const double got = half_plane_kernel_1d(v);
    worst = std::max(worst, rel_err(got, 1.0 / (4.0 * kPi * v * v)));
  }
  chk.require(worst <= 1e-9, "1-D normalization off at rel 1e-9");
  detail = "worst rel err " + std::to_string(worst);
  return chk.ok;
}

// ---------------------------------------------------------------- criterion 3
bool c3_metric_oracle(std::string& detail) {
  Check chk;
  auto quad = RadialProfile::monomial_pure(1);
  double worst = 0.0;
  for (double rho : {0.05, 0.1, 0.25, 0.5, 1.0}) {
    auto an = metric_reference(quad, 0.0, rho, {}, MetricMode::Analytic);
    auto fd = metric_reference(quad, 0.0, rho, {}, MetricMode::FiniteDifference);
    const double w1 = rel_err(an.g11, 3.0 / rho);
    const double w2 = rel_err(an.g22, 0.75 / (rho * rho));
    const double f1 = rel_err(fd.g11, 3.0 / rho);
    const double f2 = rel_err(fd.g22, 0.75 / (rho * rho));
    const double a1 = rel_err(fd.g11, an.g11);
    const double a2 = rel_err(fd.g22, an.g22);
    worst = std::max({worst, w1, w2, f1, f2, a1, a2});
  }
  chk.require(worst <= 1e-4, "metric oracle above rel 1e-4");
  detail = "5 heights, worst rel err " + std::to_string(worst);
  return chk.ok;
}

// ---------------------------------------------------------------- criterion 4
bool c4_doubling(std::string& detail) {
  Check chk;
  std::ostringstream os;
  for (double p : {0.5, 1.0, 2.0}) {
    auto pr = RadialProfile::exp_inverse(p);
    auto cert = cert_of(pr, 0.4);
    const double floor = std::pow(2.0, 1.0 / p);
    chk.require(cert.sigma >= floor, "sigma below the theoretical floor");
    chk.require(cert.sigma <= floor * 1.05 * 1.10, "sigma above floor*ladder*10%");
    os << "p=" << p << ": sigma=" << cert.sigma << "  ";
  }
  {
    auto de = RadialProfile::double_exp();
    auto cert = cert_of(de, 0.4);
    chk.require(cert.sigma <= 1.4, "double_exp sigma above 1.4");
    os << "double_exp: sigma=" << cert.sigma << "  ";
  }
  for (int M : {1, 2, 3}) {
    auto mono = RadialProfile::monomial(M);
    auto view = make_lambda_view(mono);
    auto out = find_sigma(view, 0.4, 1e6, 2000);
    chk.require(std::holds_alternative<NotDoublingEvidence>(out),
                "monomial unexpectedly certified");
  }
  os << "monomials M=1..3: no certificate up to 1e6";
  if (!chk.detail.str().empty()) os << "; " << chk.detail.str();
  detail = os.str();
  return chk.ok;
}

// criteria 5/7/10 share sweep construction
std::vector<SweepSpec> band_specs(const RadialProfile& pr,
                                  const DoublingCertificate& cert, double t_min,
                                  double t_max) {
  std::vector<SweepSpec> specs;
  const ApproachRegion regions[] = {{1.0, 2}, {5.0, 8}};
  const ZPath paths[] = {{ZPathKind::Origin, 0.0}, {ZPathKind::RegionEdge, 0.5}};
  for (const auto& reg : regions) {
    for (const auto& path : paths) {
      SweepSpec s;
      s.profile = &pr;
      s.cert = cert;
      s.region = reg;
      s.t_min = t_min;
      s.t_max = t_max;
      s.points = 30;
      s.path = path;
      s.slicing.k_max = 256;
      std::ostringstream name;
      name << pr.name() << "_a" << reg.alpha << "n" << reg.N
           << (path.kind == ZPathKind::Origin ? "_origin" : "_edge");
      s.name = name.str();
      specs.push_back(s);
    }
  }
  return specs;
}

bool run_band_criterion(const RadialProfile& pr, const DoublingCertificate& cert,
                        double t_min, double t_max, std::string& detail) {
  Check chk;
  std::ostringstream os;
  for (const auto& spec : band_specs(pr, cert, t_min, t_max)) {
    auto rep = sweep_kernel_band(spec, 0);
    const double ratio = rep.c_lo > 0.0 ? rep.c_hi / rep.c_lo : INFINITY;
    chk.require(rep.excluded_count == 0, spec.name + ": excluded rows");
    chk.require(ratio <= 1e3, spec.name + ": band ratio above 1e3");
    chk.require(std::fabs(rep.slope - 1.0) <= 0.1, spec.name + ": slope outside");
    os << spec.name << " ratio=" << ratio << " slope=" << rep.slope << "; ";
  }
  if (!chk.detail.str().empty()) os << chk.detail.str();
  detail = os.str();
  return chk.ok;
}

bool run_sandwich_criterion(const RadialProfile& pr, const DoublingCertificate& cert,
                            double t_min, double t_max, std::string& detail) {
  Check chk;
  int rows = 0;
  for (const auto& spec : band_specs(pr, cert, t_min, t_max)) {
    auto rep = sweep_sandwich(spec, 0);
    rows += static_cast<int>(rep.rows.size());
    chk.require(rep.excluded_count == 0, spec.name + ": excluded rows");
    chk.require(rep.rows_ok, spec.name + ": sandwich violation");
  }
  std::ostringstream os;
  os << rows << " rows, zero violations";
  if (!chk.detail.str().empty()) os << "; " << chk.detail.str();
  detail = os.str();
  return chk.ok;
}

// ---------------------------------------------------------------- criterion 6
bool c6_part_c_probe(std::string& detail) {
  Check chk;
  auto pr = RadialProfile::exp_inverse(1.0);
  SlicingConfig cfg;
  cfg.k_max = 1024;
  KernelEvaluator ev(pr, cfg);
  const double z = 0.1;
  const double t_lo = 2.0 * pr.eval(z).value * 1.0000001;
  const double t_hi = 1e-1;
  const int n = 12;
  for (int i = 0; i < n; ++i) {
    const double t =
        std::exp(std::log(t_lo) + (std::log(t_hi) - std::log(t_lo)) * i / (n - 1));
    auto kv = ev.kernel(z, t);
    auto lb = kernel_lower_certificate(pr, cx(z, 0.0), t);
    chk.require(kv.converged, "kernel eval unconverged");
    chk.require(lb.lower_bound <= kv.value + kv.error + lb.error,
                "lower certificate above reference at t=" + std::to_string(t));
  }
  detail = "12 heights in (2 f(0.1), 0.1], all below the reference";
  if (!chk.detail.str().empty()) detail += "; " + chk.detail.str();
  return chk.ok;
}

// ---------------------------------------------------------------- criterion 8
bool c8_metric_bands(std::string& detail) {
  Check chk;
  auto pr = RadialProfile::exp_inverse(1.0);
  auto cert = cert_of(pr, 0.7);
  SweepSpec spec;
  spec.profile = &pr;
  spec.cert = cert;
  spec.region = ApproachRegion{1.0, 2};
  spec.t_min = 1e-6;
  spec.t_max = 1e-2;
  spec.points = 30;
  spec.name = "metric";
  auto reps = sweep_metric_band(spec, {{cx(1.0, 0.0), cx(0.0, 0.0)},
                                       {cx(0.0, 0.0), cx(1.0, 0.0)}},
                                0);
  std::ostringstream os;
  const char* labels[] = {"g11 vs log^2(1/t)", "g22 vs t^-2"};
  for (size_t i = 0; i < reps.size(); ++i) {
    const double ratio = reps[i].c_lo > 0.0 ? reps[i].c_hi / reps[i].c_lo : INFINITY;
    chk.require(reps[i].excluded_count == 0, std::string(labels[i]) + ": excluded");
    chk.require(ratio <= 1e3, std::string(labels[i]) + ": band above 1e3");
    chk.require(std::fabs(reps[i].slope - 1.0) <= 0.1,
                std::string(labels[i]) + ": slope outside [0.9,1.1]");
    os << labels[i] << " slope=" << reps[i].slope << " ratio=" << ratio << "; ";
  }
  if (!chk.detail.str().empty()) os << chk.detail.str();
  detail = os.str();
  return chk.ok;
}

// ---------------------------------------------------------------- criterion 9
bool c9_envelope_suites(std::string& detail) {
  Check chk;
  std::ostringstream os;

  struct ProfileCase {
    RadialProfile pr;
    DoublingCertificate cert_small;  // R = 0.4 (difference-of-squares)
    DoublingCertificate cert_sweep;  // wide-R certificate for sweep ranges
    double t_min;
  };
  std::vector<ProfileCase> cases;
  {
    auto e1 = RadialProfile::exp_inverse(1.0);
    cases.push_back({e1, cert_of(e1, 0.4), cert_of(e1, 0.7), 1e-6});
    auto de = RadialProfile::double_exp();
    cases.push_back({de, cert_of(de, 0.4), cert_of(de, 0.85), 1e-4});
  }

  for (auto& pc : cases) {
    auto view = make_lambda_view(pc.pr);
    for (int n : {1, 2}) {
      auto ds = diff_of_squares_check(view, pc.cert_small, n);
      chk.require(ds.pass, pc.pr.name() + ": diff-of-squares n=" + std::to_string(n));
    }

    const double fa = pc.pr.eval(std::min(pc.pr.f_inv_one(), 1.0)).value;
    const double t_max =
        std::min({1e-2, fa * fa, std::exp(-1.0 / pc.cert_sweep.T)});
    const int points = 12;
    auto sweep_ts = [&](int i) {
      return std::exp(std::log(pc.t_min) +
                      (std::log(t_max) - std::log(pc.t_min)) * i / (points - 1));
    };

    // ratio streams: bounded, and no monotone blow-up below t = 1e-4
    auto check_stream = [&](const std::string& label,
                            const std::function<double(double)>& ratio_at) {
      double max_low = 0.0, max_high = 0.0, chat = 0.0;
      for (int i = 0; i < points; ++i) {
        const double t = sweep_ts(i);
        const double r = ratio_at(t);
        chk.require(std::isfinite(r) && r > 0.0, label + ": ratio not finite");
        chat = std::max(chat, r);
        (t < 1e-4 ? max_low : max_high) = std::max(t < 1e-4 ? max_low : max_high, r);
      }
      if (max_low > 0.0 && max_high > 0.0)
        chk.require(max_low <= 1.5 * max_high,
                    label + ": ratio keeps growing below t=1e-4");
      os << label << " C^=" << chat << "; ";
    };

    struct PsiShape {
      double alpha, beta;
      int n;
    };
    for (const auto& sh : std::initializer_list<PsiShape>{
             {0.0, 2.0, 0}, {0.0, 2.0, 1}, {1.0, 2.0, 0}}) {
      std::ostringstream label;
      label << pc.pr.name() << " psi(" << sh.alpha << "," << sh.beta << "," << sh.n
            << ")";
      check_stream(label.str(), [&](double t) {
        const double fi = pc.pr.f_inverse(t);
        const cx z = sh.alpha > 0.0 ? cx(0.5 * fi, 0.0) : cx(1.0, 0.0);
        auto norm = candidate_norm_sq(candidates::Psi{sh.alpha, sh.beta, sh.n, t, z},
                                      pc.pr, NormDomain::BidiscCut);
        const double env = std::pow(t, 2.0 * (sh.beta - 1.0)) *
                           std::pow(fi, 2.0 * (sh.alpha + sh.n + 1.0));
        return norm.norm_sq / env;
      });
    }

    for (int n : {0, 1}) {
      std::ostringstream label;
      label << pc.pr.name() << " phi_alt(n=" << n << ")";
      check_stream(label.str(), [&](double t) {
        auto norm =
            candidate_norm_sq(candidates::PhiAlt{n, t}, pc.pr, NormDomain::BidiscCut);
        const double fi = pc.pr.f_inverse(t);
        return norm.norm_sq / (std::pow(t, 2.0 + 2.0 * n) * fi * fi);
      });
    }

    // split chain: the three-piece estimate with the doubling consequence
    // G(2s) <= sigma G(s) pins an explicit constant
    //   B_cert = (1 + (sigma^{2n+2} - 1)/4) / (2n+2),
    // valid wherever s = 1/log(1/t) <= T (the sweep cap enforces this)
    for (int n : {0, 1}) {
      std::ostringstream label;
      label << pc.pr.name() << " split-chain(n=" << n << ")";
      const double a = std::min(pc.pr.f_inv_one(), 1.0);
      const double b_cert =
          (1.0 + (std::pow(pc.cert_sweep.sigma, 2.0 * n + 2.0) - 1.0) / 4.0) /
          (2.0 * n + 2.0);
      double bhat = 0.0;
      for (int i = 0; i < points; ++i) {
        const double t = sweep_ts(i);
        auto ri = reduced_integral(pc.pr, n, t, a, 2);
        const double env = std::pow(t, -2.0) * std::pow(ri.R_t, 2.0 * n + 2.0) +
                           std::pow(t, -1.5);
        bhat = std::max(bhat, ri.total.value / env);
      }
      chk.require(bhat <= b_cert,
                  label.str() + ": B-hat above the certificate bound");
      os << label.str() << " B^=" << bhat << "<=B_cert=" << b_cert << "; ";
    }
  }

  std::string d = os.str();
  if (!chk.detail.str().empty()) d += chk.detail.str();
  detail = d;
  return chk.ok;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    double budget_s;  // 0 = no budget
    std::function<bool(std::string&)> fn;
  };

  auto e1 = RadialProfile::exp_inverse(1.0);
  auto de = RadialProfile::double_exp();
  auto e1_cert = cert_of(e1, 0.7);
  auto de_cert = cert_of(de, 0.85);

  std::vector<Criterion> criteria = {
      {1, "Siegel oracle (5x5 grid, two derivations)", 10.0, c1_siegel_oracle},
      {2, "1-D slicing calibration", 0.0, c2_calibration},
      {3, "quadratic-profile metric oracle", 0.0, c3_metric_oracle},
      {4, "doubling positives and negatives", 5.0, c4_doubling},
      {5, "kernel growth bands, exp-inverse p=1", 120.0,
       [&](std::string& d) { return run_band_criterion(e1, e1_cert, 1e-6, 1e-2, d); }},
      {6, "off-region lower-bound probe at |z|=0.1", 0.0, c6_part_c_probe},
      {7, "sandwich on the band sweeps, exp-inverse p=1", 0.0,
       [&](std::string& d) {
         return run_sandwich_criterion(e1, e1_cert, 1e-6, 1e-2, d);
       }},
      {8, "metric growth bands, exp-inverse p=1", 180.0, c8_metric_bands},
      {9, "envelope suites (difference-of-squares, norm shapes, split chain)", 0.0,
       c9_envelope_suites},
      {10, "double-exp bands and sandwich", 0.0,
       [&](std::string& d) {
         std::string d1, d2;
         const bool b = run_band_criterion(de, de_cert, 1e-4, 1e-2, d1);
         const bool s = run_sandwich_criterion(de, de_cert, 1e-4, 1e-2, d2);
         d = d1 + " | " + d2;
         return b && s;
       }},
  };

  int failures = 0;
  for (auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double dt = elapsed(t0);
    if (c.budget_s > 0.0 && dt > c.budget_s) {
      ok = false;
      detail += " [over time budget]";
    }
    std::printf("[%s] criterion %2d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id,
                c.label, dt);
    if (!detail.empty()) std::printf("         %s\n", detail.c_str());
    if (!ok) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
