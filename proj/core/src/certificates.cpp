#include "bergman/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

constexpr double kPi = 3.14159265358979323846;
using cx = std::complex<double>;

// Int_0^U du/(u^2+A^2)^2
double f2_slice(double U, double A) {
  const double s = U * U + A * A;
  return U / (2.0 * A * A * s) + std::atan(U / A) / (2.0 * A * A * A);
}

// Int_0^U du/(u^2+A^2)^3
double f3_slice(double U, double A) {
  const double s = U * U + A * A;
  const double A2 = A * A;
  return U / (4.0 * A2 * s * s) + 3.0 * U / (8.0 * A2 * A2 * s) +
         3.0 * std::atan(U / A) / (8.0 * A2 * A2 * A);
}

// Int_0^U u^2 du/(u^2+A^2)^3
double f3u2_slice(double U, double A) {
  const double s = U * U + A * A;
  const double A2 = A * A;
  return U / (8.0 * A2 * s) - U / (4.0 * s * s) + std::atan(U / A) / (8.0 * A2 * A);
}

// panel skeleton for integrands concentrated around the scale R on [0, top]
std::vector<double> radial_breaks(double R, double top) {
  std::vector<double> pts{0.0, top};
  for (double frac : {1e-3, 1e-2, 0.1, 0.3, 1.0, 2.0, 4.0, 8.0}) {
    const double x = R * frac;
    if (x > 0.0 && x < top) pts.push_back(x);
  }
  if (top > 1.0) pts.push_back(1.0);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::fabs(a - b) < 1e-300; }),
            pts.end());
  return pts;
}

// Int_0^inf fn(r) dr for integrands shaped by t+f(r); splits at R_t and the
// extension shoulder, then a mapped tail
IntegralResult radial_semi_infinite(const Integrand& fn, const RadialProfile& profile,
                                    double t, const QuadratureSpec& spec) {
  const double Rt = profile.f_inverse(std::min(t, 0.5 * profile.eval(profile.x_max()).value));
  const double B = std::max({2.0, profile.pure() ? 2.0 : profile.cutoff() + 2.0,
                             4.0 * Rt});
  auto finite = integrate_panels(fn, radial_breaks(Rt, B), spec);
  auto tail = integrate(fn, B, std::numeric_limits<double>::infinity(), spec);
  IntegralResult out;
  out.value = finite.value + tail.value;
  out.error_estimate = finite.error_estimate + tail.error_estimate;
  out.evaluations = finite.evaluations + tail.evaluations;
  out.converged = finite.converged && tail.converged;
  return out;
}

struct RadialShape {
  // |candidate|^2 integrated in (u,v): front * wgt(r) * inner(r)
  double front = 1.0;
  std::function<double(double)> wgt;
  std::function<double(double)> inner_full;              // closed form, v over (f, inf)
  std::function<double(double, double)> slice_cut;  // (v, r) integrand for the lune
  bool full_integrable = true;
  const char* label = "";
};

RadialShape shape_of(const Candidate& c, const RadialProfile& profile) {
  RadialShape s;
  const double t = candidate_t(c);
  auto A0 = [&profile, t](double r) { return t + profile.eval(r).value; };

  if (const auto* psi = std::get_if<candidates::Psi>(&c)) {
    const int n = psi->n;
    s.front = std::pow(std::abs(psi->z), 2.0 * psi->alpha) *
              std::pow(psi->t, 2.0 * psi->beta) * 2.0 * kPi;
    s.wgt = [n](double r) { return std::pow(r, 2 * n + 1); };
    s.inner_full = [A0](double r) {
      const double a0 = A0(r);
      return 0.25 * kPi / (a0 * a0);
    };
    s.slice_cut = [t](double v, double) {
      const double A = v + t;
      return 2.0 * f2_slice(std::sqrt(std::max(0.0, 1.0 - v * v)), A);
    };
    s.full_integrable = (n == 0);
    s.label = "psi";
    return s;
  }
  if (std::get_if<candidates::PhiKernel>(&c)) {
    s.front = 16.0 * std::pow(t, 4.0) * 2.0 * kPi;
    s.wgt = [](double r) { return r; };
    s.inner_full = [A0](double r) {
      const double a0 = A0(r);
      return 0.25 * kPi / (a0 * a0);
    };
    s.slice_cut = [t](double v, double) {
      const double A = v + t;
      return 2.0 * f2_slice(std::sqrt(std::max(0.0, 1.0 - v * v)), A);
    };
    s.label = "phi_kernel";
    return s;
  }
  if (const auto* alt = std::get_if<candidates::PhiAlt>(&c)) {
    const int n = alt->n;
    s.front = std::pow(t, 6.0) * 2.0 * kPi;
    s.wgt = [](double r) { return r; };
    if (n == 0) {
      s.inner_full = [A0](double r) {
        const double a0 = A0(r);
        return 3.0 * kPi / (32.0 * std::pow(a0, 4));
      };
      s.slice_cut = [t](double v, double) {
        const double A = v + t;
        return 2.0 * f3_slice(std::sqrt(std::max(0.0, 1.0 - v * v)), A);
      };
    } else {
      s.inner_full = [A0, t](double r) {
        const double a0 = A0(r);
        return 0.25 * kPi / (a0 * a0) - 0.25 * kPi * t / std::pow(a0, 3) +
               (3.0 / 32.0) * kPi * t * t / std::pow(a0, 4);
      };
      s.slice_cut = [t](double v, double) {
        const double A = v + t;
        const double U = std::sqrt(std::max(0.0, 1.0 - v * v));
        return 2.0 * (f3u2_slice(U, A) + v * v * f3_slice(U, A));
      };
    }
    s.label = "phi_alt";
    return s;
  }
  if (const auto* m2 = std::get_if<candidates::PhiMetric2>(&c)) {
    s.front = 64.0 * std::pow(t, 6.0) / std::norm(m2->xi2) * 2.0 * kPi;
    s.wgt = [](double r) { return r; };
    s.inner_full = [A0, t](double r) {
      const double a0 = A0(r);
      return 0.25 * kPi / (a0 * a0) - 0.5 * kPi * t / std::pow(a0, 3) +
             (3.0 / 8.0) * kPi * t * t / std::pow(a0, 4);
    };
    s.slice_cut = [t](double v, double) {
      const double A = v + t;
      const double U = std::sqrt(std::max(0.0, 1.0 - v * v));
      const double d = v - t;
      return 2.0 * (f3u2_slice(U, A) + d * d * f3_slice(U, A));
    };
    s.label = "phi_metric2";
    return s;
  }
  const auto& m1 = std::get<candidates::PhiMetric1>(c);
  const double zn = std::norm(m1.z);
  s.front = 16.0 * std::pow(t, 4.0) / std::norm(m1.xi1) * 2.0 * kPi;
  s.wgt = [zn](double r) { return r * (r * r + zn); };
  s.inner_full = [A0](double r) {
    const double a0 = A0(r);
    return 0.25 * kPi / (a0 * a0);
  };
  s.slice_cut = [t](double v, double) {
    const double A = v + t;
    return 2.0 * f2_slice(std::sqrt(std::max(0.0, 1.0 - v * v)), A);
  };
  s.full_integrable = false;
  s.label = "phi_metric1";
  return s;
}

}  // namespace

double candidate_t(const Candidate& c) {
  return std::visit([](const auto& k) { return k.t; }, c);
}

std::complex<double> candidate_eval(const Candidate& c, cx zeta, cx w) {
  const double t = candidate_t(c);
  const cx wit = w + cx(0.0, t);
  if (std::abs(wit) == 0.0)
    throw domain_error("candidate_eval: pole at w = -it");
  return std::visit(
      [&](const auto& k) -> cx {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, candidates::Psi>) {
          const cx zn = k.n == 0 ? cx(1.0, 0.0) : zeta;
          return std::pow(std::abs(k.z), k.alpha) * std::pow(k.t, k.beta) * zn /
                 (wit * wit);
        } else if constexpr (std::is_same_v<T, candidates::PhiKernel>) {
          return -4.0 * k.t * k.t / (wit * wit);
        } else if constexpr (std::is_same_v<T, candidates::PhiAlt>) {
          const cx wn = k.n == 0 ? cx(1.0, 0.0) : w;
          return std::pow(k.t, 3.0) * wn / (wit * wit * wit);
        } else if constexpr (std::is_same_v<T, candidates::PhiMetric2>) {
          return cx(0.0, -8.0) * std::pow(k.t, 3.0) * (w - cx(0.0, k.t)) /
                 (k.xi2 * wit * wit * wit);
        } else {
          return -4.0 * (zeta - k.z) * k.t * k.t / (k.xi1 * wit * wit);
        }
      },
      c);
}

AdmissibilityResult admissibility_check(const Candidate& c, cx z, double t, cx xi1,
                                        cx xi2) {
  const cx w(0.0, t);
  const cx wit(0.0, 2.0 * t);  // w + it at the center
  AdmissibilityResult out;
  out.value_at_center = candidate_eval(c, z, w);

  // analytic derivatives at (z, it)
  cx dzeta(0.0, 0.0), dw(0.0, 0.0);
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, candidates::Psi>) {
          const double pref = std::pow(std::abs(k.z), k.alpha) * std::pow(k.t, k.beta);
          if (k.n == 1) dzeta = pref / (wit * wit);
          const cx zn = k.n == 0 ? cx(1.0, 0.0) : z;
          dw = -2.0 * pref * zn / (wit * wit * wit);
        } else if constexpr (std::is_same_v<T, candidates::PhiKernel>) {
          dw = 8.0 * k.t * k.t / (wit * wit * wit);
        } else if constexpr (std::is_same_v<T, candidates::PhiAlt>) {
          const double t3 = std::pow(k.t, 3.0);
          if (k.n == 0) {
            dw = -3.0 * t3 / (wit * wit * wit * wit);
          } else {
            dw = t3 / (wit * wit * wit) -
                 3.0 * t3 * w / (wit * wit * wit * wit);
          }
        } else if constexpr (std::is_same_v<T, candidates::PhiMetric2>) {
          dw = cx(0.0, -8.0) * std::pow(k.t, 3.0) / (k.xi2 * wit * wit * wit);
        } else {
          dzeta = -4.0 * k.t * k.t / (k.xi1 * wit * wit);
          dw = 8.0 * (z - k.z) * k.t * k.t / (k.xi1 * wit * wit * wit);
        }
      },
      c);
  out.pairing = dzeta * xi1 + dw * xi2;
  out.pass = std::abs(out.value_at_center) < 1e-10 &&
             std::abs(out.pairing - cx(1.0, 0.0)) < 1e-10;
  return out;
}

NormEstimate candidate_norm_sq(const Candidate& c, const RadialProfile& profile,
                               NormDomain domain, const QuadratureSpec& spec) {
  const double t = candidate_t(c);
  if (!(t > 0.0)) throw domain_error("candidate_norm_sq: t must be positive");
  const auto shape = shape_of(c, profile);

  NormEstimate out;
  out.domain = domain;

  if (domain == NormDomain::FullDomain) {
    if (!shape.full_integrable) {
      std::ostringstream os;
      os << "candidate " << shape.label
         << " is not square-integrable on the full domain (radial integral "
            "diverges logarithmically); use the bidisc cut";
      throw computation_error(os.str());
    }
    auto fn = [&](double r) { return shape.wgt(r) * shape.inner_full(r); };
    auto res = radial_semi_infinite(fn, profile, t, spec);
    if (!res.converged)
      throw computation_error("candidate_norm_sq: full-domain quadrature failed");
    out.norm_sq = shape.front * res.value;
    out.error = shape.front * res.error_estimate;
    return out;
  }

  // bidisc cut: a = min(f^{-1}(1), 1), w-disc is the unit disc
  const double a = std::min(profile.f_inv_one(), 1.0);
  QuadratureSpec inner_spec = spec;
  inner_spec.rel_tol = std::max(spec.rel_tol * 0.1, 1e-12);
  inner_spec.max_subdivisions = 200;

  auto lune = [&](double r) {
    const double fr = profile.eval(r).value;
    if (!(fr < 1.0)) return 0.0;
    std::vector<double> vb{fr, 1.0};
    for (double m : {1e-2, 1e-1, 1.0, 10.0, 100.0}) {
      const double v = fr + m * t;
      if (v > fr && v < 1.0) vb.push_back(v);
    }
    std::sort(vb.begin(), vb.end());
    auto res = integrate_panels([&](double v) { return shape.slice_cut(v, r); }, vb,
                                inner_spec);
    return res.value;
  };

  const double Rt = t < profile.eval(profile.x_max()).value * 0.5
                        ? std::min(profile.f_inverse(t), a)
                        : a;
  auto outer = integrate_panels([&](double r) { return shape.wgt(r) * lune(r); },
                                radial_breaks(Rt, a), spec);
  if (!outer.converged)
    throw computation_error("candidate_norm_sq: bidisc-cut quadrature failed");
  out.norm_sq = shape.front * outer.value;
  out.error = shape.front * outer.error_estimate;
  return out;
}

ReducedIntegral reduced_integral(const RadialProfile& profile, int n, double t,
                                 double a, int power, const QuadratureSpec& spec) {
  if (!(t > 0.0) || !(a > 0.0))
    throw domain_error("reduced_integral: t and a must be positive");
  if (n != 0 && n != 1) throw domain_error("reduced_integral: n must be 0 or 1");
  const double wexp = (power == 2) ? 2.0 * n + 1.0 : 1.0;

  auto fn = [&](double r) {
    const double a0 = t + profile.eval(r).value;
    return std::pow(r, wexp) / std::pow(a0, power);
  };

  ReducedIntegral out;
  const double fmax = profile.eval(profile.x_max()).value;
  out.R_t = t < fmax ? profile.f_inverse(t) : profile.x_max();
  out.R_sqrt_t = std::sqrt(t) < fmax ? profile.f_inverse(std::sqrt(t))
                                     : profile.x_max();
  const double b1 = std::min(out.R_t, a);
  const double b2 = std::min(std::max(out.R_sqrt_t, b1), a);

  auto piece = [&](double lo, double hi) {
    IntegralResult r;
    if (!(hi > lo)) {
      r.converged = true;
      return r;
    }
    return integrate(fn, lo, hi, spec);
  };
  out.parts[0] = piece(0.0, b1);
  out.parts[1] = piece(b1, b2);
  out.parts[2] = piece(b2, a);
  // total computed on its own panel set, so the split stays a real check
  out.total = integrate_panels(fn, radial_breaks(b1, a), spec);
  return out;
}

KernelLowerBound kernel_lower_certificate(const RadialProfile& profile, cx z, double t,
                                          NormDomain domain,
                                          const QuadratureSpec& spec) {
  if (!(t > profile.eval(std::abs(z)).value))
    throw domain_error("kernel_lower_certificate: (z, it) outside the domain");
  const Candidate phi = candidates::PhiKernel{t};
  // phi_t(z, it) = 1 for every z
  const auto norm = candidate_norm_sq(phi, profile, domain, spec);
  KernelLowerBound out;
  out.domain = domain;
  out.lower_bound = 1.0 / norm.norm_sq;
  out.error = norm.error / (norm.norm_sq * norm.norm_sq);
  return out;
}

JUpperBound j_upper_bound(const RadialProfile& profile, cx z, double t, cx xi1, cx xi2,
                          NormDomain domain, const QuadratureSpec& spec) {
  if (std::abs(xi1) == 0.0 && std::abs(xi2) == 0.0)
    throw domain_error("j_upper_bound: xi must be nonzero");
  if (!(t > profile.eval(std::abs(z)).value))
    throw domain_error("j_upper_bound: (z, it) outside the domain");

  JUpperBound best;
  best.j_ub = std::numeric_limits<double>::infinity();

  auto consider = [&](const Candidate& c, int which, NormDomain dom) {
    const auto adm = admissibility_check(c, z, t, xi1, xi2);
    if (!adm.pass)
      throw computation_error("j_upper_bound: candidate failed admissibility");
    const auto norm = candidate_norm_sq(c, profile, dom, spec);
    if (norm.norm_sq < best.j_ub) {
      best.j_ub = norm.norm_sq;
      best.error = norm.error;
      best.case_used = which;
      best.domain = dom;
    }
  };

  if (std::abs(xi2) != 0.0)
    consider(candidates::PhiMetric2{t, xi2}, 1, domain);
  if (std::abs(xi1) != 0.0) {
    // case 2 is L^2 only on the cut
    consider(candidates::PhiMetric1{z, t, xi1}, 2, NormDomain::BidiscCut);
  }
  return best;
}

R0Threshold r0_threshold(const RadialProfile& profile,
                         const DoublingCertificate& cert) {
  R0Threshold out;
  out.a = std::min(profile.f_inv_one(), 1.0);
  const double fa = profile.eval(out.a).value;
  out.f_a_sq = fa * fa;
  out.exp_inv_T = std::exp(-1.0 / cert.T);

  // c*: largest threshold below which f^{-1}(t)^8 >= t (the binding n=1 case)
  auto pred = [&](double t) { return 8.0 * std::log(profile.f_inverse(t)) >= std::log(t); };
  const double cap = std::min(out.f_a_sq, 0.99 * profile.eval(profile.x_max()).value);
  double last_good = 0.0, first_bad = 0.0;
  const int steps = 121;
  for (int i = 0; i < steps; ++i) {
    const double t = cap * std::pow(10.0, -30.0 + 30.0 * i / (steps - 1));
    if (pred(t)) {
      last_good = t;
    } else {
      first_bad = t;
      break;
    }
  }
  if (first_bad == 0.0) {
    out.c_star = cap;
  } else if (last_good == 0.0) {
    out.c_star = 0.0;
  } else {
    for (int i = 0; i < 80; ++i) {
      const double mid = std::sqrt(last_good * first_bad);
      if (pred(mid))
        last_good = mid;
      else
        first_bad = mid;
    }
    out.c_star = last_good;
  }
  out.r0 = std::min({out.f_a_sq, out.exp_inv_T, out.c_star});
  return out;
}

}  // namespace bergman
