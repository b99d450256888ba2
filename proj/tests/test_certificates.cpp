#include "bergman/certificates.hpp"

#include <cmath>
#include <random>

#include "bergman/errors.hpp"
#include "bergman/kernel.hpp"
#include "bergman/profile.hpp"
#include "doctest.h"

using namespace bergman;
using namespace bergman::candidates;
using cx = std::complex<double>;

namespace {
constexpr double kPi = 3.14159265358979323846;

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}
}  // namespace

TEST_CASE("candidate evaluation at centers and poles") {
  const double t = 0.37;
  CHECK(std::abs(candidate_eval(PhiKernel{t}, cx(0.3, 0.1), cx(0.0, t)) -
                 cx(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(candidate_eval(PhiMetric2{t, cx(2.0, 1.0)}, cx(0.1, 0.0),
                                cx(0.0, t))) < 1e-14);
  CHECK(std::abs(candidate_eval(PhiMetric1{cx(0.1, 0.0), t, cx(1.0, 0.0)},
                                cx(0.1, 0.0), cx(0.0, t))) < 1e-14);
  CHECK_THROWS_AS(candidate_eval(PhiKernel{t}, cx(0.0, 0.0), cx(0.0, -t)),
                  domain_error);
}

TEST_CASE("admissibility pairings equal one") {
  const double t = 0.05;
  const cx z(0.12, 0.0);

  SUBCASE("xi2 candidate") {
    for (cx xi2 : {cx(1.0, 0.0), cx(0.3, -0.8), cx(-2.0, 0.1)}) {
      auto r = admissibility_check(PhiMetric2{t, xi2}, z, t, cx(0.7, 0.2), xi2);
      CHECK(r.pass);
      CHECK(std::abs(r.value_at_center) < 1e-14);
      CHECK(std::abs(r.pairing - cx(1.0, 0.0)) < 1e-12);
    }
  }
  SUBCASE("xi1 candidate") {
    for (cx xi1 : {cx(1.0, 0.0), cx(0.0, 1.5)}) {
      auto r = admissibility_check(PhiMetric1{z, t, xi1}, z, t, xi1, cx(0.4, 0.0));
      CHECK(r.pass);
      CHECK(std::abs(r.pairing - cx(1.0, 0.0)) < 1e-12);
    }
  }
  SUBCASE("kernel candidate fails the J-class but is 1 at the center") {
    auto r = admissibility_check(PhiKernel{t}, z, t, cx(1.0, 0.0), cx(1.0, 0.0));
    CHECK_FALSE(r.pass);
    CHECK(std::abs(r.value_at_center - cx(1.0, 0.0)) < 1e-14);
  }
}

TEST_CASE("reduced integral oracles") {
  auto quad = RadialProfile::monomial_pure(1);

  SUBCASE("closed form at t=1") {
    auto r = reduced_integral(quad, 0, 1.0, 1.0, 2);
    CHECK(r.total.converged);
    CHECK(rel_err(r.total.value, 0.25) < 1e-10);  // Int r/(1+r^2)^2 = 1/4
  }

  SUBCASE("large-t dominated limit") {
    auto pr = RadialProfile::exp_inverse(1.0);
    const double t = 1e6, a = 1.0;
    for (int n : {0, 1}) {
      auto r = reduced_integral(pr, n, t, a, 2);
      const double want = std::pow(a, 2.0 * n + 2.0) / ((2.0 * n + 2.0) * t * t);
      CHECK(rel_err(r.total.value, want) < 0.01);
    }
  }

  SUBCASE("split pieces recompose the total") {
    auto pr = RadialProfile::exp_inverse(1.0);
    auto r = reduced_integral(pr, 0, 1e-4, 1.0, 2);
    const double sum = r.parts[0].value + r.parts[1].value + r.parts[2].value;
    const double tol = r.total.error_estimate + r.parts[0].error_estimate +
                       r.parts[1].error_estimate + r.parts[2].error_estimate;
    CHECK(std::fabs(sum - r.total.value) <= tol + 1e-12 * std::fabs(sum));
    CHECK(r.R_t == doctest::Approx(pr.f_inverse(1e-4)));
    CHECK(r.R_sqrt_t == doctest::Approx(pr.f_inverse(1e-2)));
  }
}

TEST_CASE("full-domain norm oracle: quadratic profile") {
  auto quad = RadialProfile::monomial_pure(1);
  for (double t : {0.25, 1.0}) {
    auto n = candidate_norm_sq(PhiKernel{t}, quad, NormDomain::FullDomain);
    CHECK(rel_err(n.norm_sq, 4.0 * kPi * kPi * t * t * t) < 1e-8);
  }
}

TEST_CASE("phi_kernel is 16 x psi(0,2,0)") {
  auto pr = RadialProfile::exp_inverse(1.0);
  const double t = 0.01;
  auto a = candidate_norm_sq(PhiKernel{t}, pr, NormDomain::FullDomain);
  auto b = candidate_norm_sq(Psi{0.0, 2.0, 0, t, cx(1.0, 0.0)}, pr,
                             NormDomain::FullDomain);
  CHECK(rel_err(a.norm_sq, 16.0 * b.norm_sq) < 1e-10);
}

TEST_CASE("cut norms against brute-force 3-D quadrature") {
  // validates the exact u-antiderivatives behind the lune slices
  auto pr = RadialProfile::exp_inverse(1.0);
  const double a = std::min(pr.f_inv_one(), 1.0);
  QuadratureSpec coarse;
  coarse.rel_tol = 1e-7;

  auto brute = [&](auto abs2, double t) {
    auto outer = integrate(
        [&](double r) {
          const double fr = pr.eval(r).value;
          if (fr >= 1.0) return 0.0;
          auto mid = integrate(
              [&](double v) {
                const double U = std::sqrt(std::max(0.0, 1.0 - v * v));
                if (U <= 0.0) return 0.0;
                auto in = integrate([&](double u) { return abs2(r, u, v, t); },
                                    -U, U, coarse);
                return in.value;
              },
              fr, 1.0, coarse);
          return r * mid.value;
        },
        0.0, a, coarse);
    return 2.0 * kPi * outer.value;
  };

  const double t = 0.3;
  SUBCASE("phi_kernel") {
    auto got = candidate_norm_sq(PhiKernel{t}, pr, NormDomain::BidiscCut);
    auto want = brute(
        [](double, double u, double v, double tt) {
          const double m = u * u + (v + tt) * (v + tt);
          return 16.0 * tt * tt * tt * tt / (m * m);
        },
        t);
    CHECK(rel_err(got.norm_sq, want) < 1e-5);
  }
  SUBCASE("phi_alt n=1") {
    auto got = candidate_norm_sq(PhiAlt{1, t}, pr, NormDomain::BidiscCut);
    auto want = brute(
        [](double, double u, double v, double tt) {
          const double m = u * u + (v + tt) * (v + tt);
          return std::pow(tt, 6.0) * (u * u + v * v) / (m * m * m);
        },
        t);
    CHECK(rel_err(got.norm_sq, want) < 1e-5);
  }
  SUBCASE("phi_metric2") {
    auto got =
        candidate_norm_sq(PhiMetric2{t, cx(0.0, 2.0)}, pr, NormDomain::BidiscCut);
    auto want = brute(
        [](double, double u, double v, double tt) {
          const double m = u * u + (v + tt) * (v + tt);
          return 64.0 * std::pow(tt, 6.0) * (u * u + (v - tt) * (v - tt)) /
                 (4.0 * m * m * m);
        },
        t);
    CHECK(rel_err(got.norm_sq, want) < 1e-5);
  }
  SUBCASE("phi_metric1") {
    const cx z(0.05, 0.0);
    auto got =
        candidate_norm_sq(PhiMetric1{z, t, cx(1.0, 0.0)}, pr, NormDomain::BidiscCut);
    // the angular average of |zeta - z|^2 over the circle |zeta| = r is
    // r^2 + |z|^2, so the brute weight carries that factor
    auto want = brute(
        [&](double r, double u, double v, double tt) {
          const double m = u * u + (v + tt) * (v + tt);
          return 16.0 * tt * tt * tt * tt * (r * r + std::norm(z)) / (m * m);
        },
        t);
    CHECK(rel_err(got.norm_sq, want) < 1e-5);
  }
}

TEST_CASE("cut norm never exceeds the full-domain norm") {
  auto pr = RadialProfile::exp_inverse(1.0);
  const double t = 0.02;
  Candidate cs[] = {PhiKernel{t}, PhiAlt{0, t}, PhiAlt{1, t},
                    PhiMetric2{t, cx(1.0, 0.0)}, Psi{0.0, 2.0, 0, t, cx(1.0, 0.0)}};
  for (const auto& c : cs) {
    auto cut = candidate_norm_sq(c, pr, NormDomain::BidiscCut);
    auto full = candidate_norm_sq(c, pr, NormDomain::FullDomain);
    CHECK(cut.norm_sq <= full.norm_sq * (1.0 + 1e-9));
  }
}

TEST_CASE("non-integrable candidates are rejected on the full domain") {
  auto pr = RadialProfile::exp_inverse(1.0);
  CHECK_THROWS_AS(candidate_norm_sq(Psi{0.0, 2.0, 1, 0.1, cx(1.0, 0.0)}, pr,
                                    NormDomain::FullDomain),
                  computation_error);
  CHECK_THROWS_AS(candidate_norm_sq(PhiMetric1{cx(0.0, 0.0), 0.1, cx(1.0, 0.0)}, pr,
                                    NormDomain::FullDomain),
                  computation_error);
}

TEST_CASE("pointwise decomposition inequalities on random domain points") {
  auto pr = RadialProfile::exp_inverse(1.0);
  const double a = std::min(pr.f_inv_one(), 1.0);
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  const double t = 0.07;
  const cx z(0.1, 0.0);
  const cx xi1(0.8, -0.4), xi2(1.3, 0.7);
  const Candidate pm2 = PhiMetric2{t, xi2};
  const Candidate pm1 = PhiMetric1{z, t, xi1};
  const Candidate alt0 = PhiAlt{0, t};
  const Candidate alt1 = PhiAlt{1, t};
  const Candidate psi021 = Psi{0.0, 2.0, 1, t, cx(1.0, 0.0)};
  const Candidate psi120 = Psi{1.0, 2.0, 0, t, z};

  int kept = 0;
  while (kept < 1000) {
    const cx zeta(a * uni(rng), a * uni(rng));
    if (std::abs(zeta) >= a) continue;
    const cx w(uni(rng), uni(rng));
    if (std::abs(w) >= 1.0) continue;
    if (!(w.imag() > pr.eval(std::abs(zeta)).value)) continue;
    ++kept;

    const double lhs2 = std::norm(candidate_eval(pm2, zeta, w));
    const double rhs2 = 128.0 / std::norm(xi2) *
                            std::norm(candidate_eval(alt1, zeta, w)) +
                        128.0 * t * t / std::norm(xi2) *
                            std::norm(candidate_eval(alt0, zeta, w));
    CHECK(lhs2 <= rhs2 * (1.0 + 1e-12));

    const double lhs1 = std::norm(candidate_eval(pm1, zeta, w));
    const double rhs1 = 32.0 / std::norm(xi1) *
                        (std::norm(candidate_eval(psi021, zeta, w)) +
                         std::norm(candidate_eval(psi120, zeta, w)));
    CHECK(lhs1 <= rhs1 * (1.0 + 1e-12));
  }
}

TEST_CASE("kernel lower certificate sits below the reference") {
  SUBCASE("quadratic profile: exact ratio 1/2 and t^{-3} scaling") {
    auto quad = RadialProfile::monomial_pure(1);
    KernelEvaluator ev(quad, {});
    double prev_cert = 0.0;
    for (double t : {0.01, 0.1, 1.0}) {
      auto lb = kernel_lower_certificate(quad, cx(0.0, 0.0), t);
      auto kv = ev.kernel(0.0, t);
      CHECK(lb.lower_bound <= kv.value * (1.0 + 1e-8));
      CHECK(rel_err(lb.lower_bound / kv.value, 0.5) < 1e-6);
      if (prev_cert > 0.0)
        CHECK(rel_err(prev_cert / lb.lower_bound, 1000.0) < 1e-5);  // (10x t)^3
      prev_cert = lb.lower_bound;
    }
  }
  SUBCASE("infinite-type profiles, on and off the z-axis") {
    SlicingConfig cfg;
    cfg.k_max = 512;  // |z| = 0.1 sits near the critical radius at t = 1e-3
    for (auto pr : {RadialProfile::exp_inverse(1.0), RadialProfile::double_exp()}) {
      KernelEvaluator ev(pr, cfg);
      for (double t : {1e-3, 1e-2}) {
        for (double z : {0.0, 0.1}) {
          if (!(t > pr.eval(z).value)) continue;
          auto lb = kernel_lower_certificate(pr, cx(z, 0.0), t);
          auto kv = ev.kernel(z, t);
          CAPTURE(pr.name());
          CAPTURE(t);
          CAPTURE(z);
          CHECK(kv.converged);
          CHECK(lb.lower_bound <= kv.value * (1.0 + 1e-6));
        }
      }
    }
  }
}

TEST_CASE("J upper bounds: cases, scaling, domains") {
  auto pr = RadialProfile::exp_inverse(1.0);
  const double t = 1e-3;

  SUBCASE("xi selects the case") {
    auto j2 = j_upper_bound(pr, cx(0.0, 0.0), t, cx(0.0, 0.0), cx(1.0, 0.0),
                            NormDomain::BidiscCut);
    CHECK(j2.case_used == 1);
    auto j1 = j_upper_bound(pr, cx(0.0, 0.0), t, cx(1.0, 0.0), cx(0.0, 0.0),
                            NormDomain::BidiscCut);
    CHECK(j1.case_used == 2);
    // both components: the minimum is taken
    auto jb = j_upper_bound(pr, cx(0.0, 0.0), t, cx(1.0, 0.0), cx(1.0, 0.0),
                            NormDomain::BidiscCut);
    CHECK(jb.j_ub <= std::min(j1.j_ub, j2.j_ub) * (1.0 + 1e-12));
  }

  SUBCASE("xi scaling law") {
    auto j1 = j_upper_bound(pr, cx(0.0, 0.0), t, cx(0.0, 0.0), cx(1.0, 0.0),
                            NormDomain::BidiscCut);
    auto j3 = j_upper_bound(pr, cx(0.0, 0.0), t, cx(0.0, 0.0), cx(3.0, 0.0),
                            NormDomain::BidiscCut);
    CHECK(rel_err(j3.j_ub, j1.j_ub / 9.0) < 1e-10);
  }

  SUBCASE("norm envelopes stay within a modest band") {
    double lo1 = INFINITY, hi1 = 0.0, lo2 = INFINITY, hi2 = 0.0;
    for (double tt : {1e-4, 1e-3, 1e-2}) {
      const double fi = pr.f_inverse(tt);
      auto jc1 = j_upper_bound(pr, cx(0.0, 0.0), tt, cx(0.0, 0.0), cx(1.0, 0.0),
                               NormDomain::BidiscCut);
      const double r1 = jc1.j_ub / (std::pow(tt, 4.0) * fi * fi);
      lo1 = std::min(lo1, r1);
      hi1 = std::max(hi1, r1);
      auto jc2 = j_upper_bound(pr, cx(0.0, 0.0), tt, cx(1.0, 0.0), cx(0.0, 0.0),
                               NormDomain::BidiscCut);
      const double r2 = jc2.j_ub / (tt * tt * std::pow(fi, 4.0));
      lo2 = std::min(lo2, r2);
      hi2 = std::max(hi2, r2);
    }
    CHECK(hi1 / lo1 < 10.0);
    CHECK(hi2 / lo2 < 10.0);
  }

  SUBCASE("full-domain case 2 degrades to the cut, and says so") {
    // the case-2 candidate is not L^2 on the full domain; the bound that
    // comes back is a cut-domain bound and is labelled as such
    auto j = j_upper_bound(pr, cx(0.0, 0.0), t, cx(1.0, 0.0), cx(0.0, 0.0),
                           NormDomain::FullDomain);
    CHECK(j.case_used == 2);
    CHECK(j.domain == NormDomain::BidiscCut);
  }
}

TEST_CASE("r0 threshold components") {
  auto e1 = RadialProfile::exp_inverse(1.0);
  auto v1 = make_lambda_view(e1);
  auto c1 = std::get<DoublingCertificate>(find_sigma(v1, 0.4, 1e3));
  auto r1 = r0_threshold(e1, c1);
  CHECK(r1.a == 1.0);
  CHECK(r1.exp_inv_T == doctest::Approx(std::exp(-1.0 / c1.T)));
  CHECK(r1.c_star < 1e-10);  // t log^8(1/t) <= 1 only far below double sweeps
  CHECK(r1.r0 == doctest::Approx(std::min({r1.f_a_sq, r1.exp_inv_T, r1.c_star})));

  auto de = RadialProfile::double_exp();
  auto vd = make_lambda_view(de);
  auto cd = std::get<DoublingCertificate>(find_sigma(vd, 0.85, 1e3));
  auto rd = r0_threshold(de, cd);
  CHECK(rd.c_star > 1e-3);  // triple-log inverse stays ~0.5
  CHECK(rd.exp_inv_T > 1e-2);
}

TEST_CASE("slow decay: R_t^{2n+2}/sqrt(t) blows up along t -> 0") {
  for (auto pr : {RadialProfile::exp_inverse(1.0), RadialProfile::double_exp()}) {
    double prev = 0.0;
    for (double t : {1e-4, 1e-5, 1e-6}) {
      const double val = std::pow(pr.f_inverse(t), 4.0) / std::sqrt(t);
      CHECK(val > prev);
      prev = val;
    }
  }
}
