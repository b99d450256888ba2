#include "bergman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
constexpr double kWg[4] = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776};

struct Segment {
  double a, b;
  double value;
  double error;
};

double segment_target(double total_value, const QuadratureSpec& spec) {
  return std::max(spec.abs_tol, spec.rel_tol * std::fabs(total_value));
}

IntegralResult adapt(const Integrand& fn, std::vector<Segment> segs,
                     const QuadratureSpec& spec, long evals) {
  IntegralResult res;
  int splits = 0;
  while (true) {
    double total = 0.0, err = 0.0;
    for (const auto& s : segs) {
      total += s.value;
      err += s.error;
    }
    if (err <= segment_target(total, spec)) {
      res.value = total;
      res.error_estimate = err;
      res.evaluations = evals;
      res.converged = true;
      return res;
    }
    if (splits >= spec.max_subdivisions) {
      res.value = total;
      res.error_estimate = err;
      res.evaluations = evals;
      res.converged = false;
      return res;
    }
    // split the worst segment (first max for determinism)
    size_t worst = 0;
    for (size_t i = 1; i < segs.size(); ++i)
      if (segs[i].error > segs[worst].error) worst = i;
    Segment s = segs[worst];
    double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b)) {
      // interval exhausted at machine precision; freeze its error
      res.value = 0.0;
      for (const auto& t : segs) res.value += t.value;
      res.error_estimate = 0.0;
      for (const auto& t : segs) res.error_estimate += t.error;
      res.evaluations = evals;
      res.converged = res.error_estimate <= segment_target(res.value, spec);
      return res;
    }
    auto left = detail::gk15(fn, s.a, m);
    auto right = detail::gk15(fn, m, s.b);
    evals += 30;
    segs[worst] = {s.a, m, left.value, left.error};
    segs.push_back({m, s.b, right.value, right.error});
    ++splits;
  }
}

IntegralResult integrate_finite(const Integrand& fn, double a, double b,
                                const QuadratureSpec& spec) {
  auto first = detail::gk15(fn, a, b);
  std::vector<Segment> segs{{a, b, first.value, first.error}};
  return adapt(fn, std::move(segs), spec, 15);
}

}  // namespace

namespace detail {

PanelResult gk15(const Integrand& fn, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = fn(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = kWgk[7] * std::fabs(fc);
  double fv[7][2];
  for (int j = 0; j < 7; ++j) {
    fv[j][0] = fn(c - h * kXgk[j]);
    fv[j][1] = fn(c + h * kXgk[j]);
    const double sum = fv[j][0] + fv[j][1];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::fabs(fv[j][0]) + std::fabs(fv[j][1]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::fabs(fv[j][0] - mean) + std::fabs(fv[j][1] - mean));
  resasc *= std::fabs(h);
  resabs *= std::fabs(h);
  const double value = resk * h;
  double err = std::fabs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50)
    err = std::max(eps50 * resabs, err);
  return {value, err, resabs};
}

}  // namespace detail

IntegralResult integrate(const Integrand& fn, double a, double b,
                         const QuadratureSpec& spec) {
  if (!(a < b)) throw domain_error("integrate: requires a < b");
  if (std::isinf(b)) {
    // tau = a + (1-u)/u maps u in (0,1] onto [a, inf)
    auto mapped = [&fn, a](double u) {
      const double tau = a + (1.0 - u) / u;
      return fn(tau) / (u * u);
    };
    return integrate_finite(mapped, 0.0, 1.0, spec);
  }
  return integrate_finite(fn, a, b, spec);
}

IntegralResult integrate_panels(const Integrand& fn, const std::vector<double>& breaks,
                                const QuadratureSpec& spec) {
  if (breaks.size() < 2) throw domain_error("integrate_panels: need >= 2 breakpoints");
  std::vector<Segment> segs;
  segs.reserve(breaks.size() - 1);
  long evals = 0;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1]))
      throw domain_error("integrate_panels: breakpoints must increase");
    auto p = detail::gk15(fn, breaks[i], breaks[i + 1]);
    segs.push_back({breaks[i], breaks[i + 1], p.value, p.error});
    evals += 15;
  }
  return adapt(fn, std::move(segs), spec, evals);
}

IntegralResult integrate_decaying(const Integrand& fn, double a, const TailBound& tail,
                                  const QuadratureSpec& spec) {
  // grow the cutoff until the certified tail is negligible next to a rough
  // estimate of the integral so far
  double L = a + 1.0;
  double rough = std::fabs(detail::gk15(fn, a, L).value);
  long evals = 15;
  for (int i = 0; i < 400; ++i) {
    const double target = 0.1 * std::max(spec.abs_tol, spec.rel_tol * rough);
    if (tail(L) <= target) break;
    const double L2 = a + 2.0 * (L - a);
    rough += std::fabs(detail::gk15(fn, L, L2).value);
    evals += 15;
    L = L2;
    if (!std::isfinite(L)) throw computation_error("integrate_decaying: cutoff overflow");
  }
  // log-spaced panels between a and L
  std::vector<double> breaks{a};
  const double span = L - a;
  for (double w = span / 1024.0; w < span; w *= 2.0) breaks.push_back(a + w);
  breaks.push_back(L);
  auto res = integrate_panels(fn, breaks, spec);
  res.error_estimate += tail(L);
  res.evaluations += evals;
  res.converged = res.converged &&
                  res.error_estimate <=
                      std::max(spec.abs_tol, spec.rel_tol * std::fabs(res.value)) * 2.0;
  return res;
}

IntegralResult sum_series(const std::function<double(long)>& term,
                          const std::function<double(long)>& tail_bound,
                          const QuadratureSpec& spec, long max_terms) {
  IntegralResult res;
  double partial = 0.0;
  for (long k = 0; k < max_terms; ++k) {
    partial += term(k);
    res.evaluations = k + 1;
    const double tb = tail_bound(k);
    if (tb <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(partial))) {
      res.value = partial;
      res.error_estimate = tb;
      res.converged = true;
      return res;
    }
  }
  res.value = partial;
  res.error_estimate = tail_bound(max_terms - 1);
  res.converged = false;
  return res;
}

}  // namespace bergman
