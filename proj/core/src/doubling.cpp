#include "bergman/doubling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

// Grid on [0, top]: 0 plus log-spaced points from top*1e-30 to top inclusive.
std::vector<double> margin_grid(double top, int n) {
  std::vector<double> xs;
  xs.reserve(n + 1);
  xs.push_back(0.0);
  const double lo = std::log(top) - 30.0 * std::log(10.0);
  const double hi = std::log(top);
  for (int i = 0; i < n; ++i)
    xs.push_back(std::exp(lo + (hi - lo) * i / (n - 1)));
  xs.back() = top;
  return xs;
}

struct MarginScan {
  double min_margin;
  double worst_x;
  double lhs;
  double rhs;
};

MarginScan scan_margin(const std::function<double(double)>& gauge, double sigma,
                       double R, int grid_size) {
  MarginScan m{std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0};
  for (double x : margin_grid(R / sigma, grid_size)) {
    const double lhs = 2.0 * gauge(x);
    const double rhs = gauge(sigma * x);
    const double margin = rhs - lhs;
    if (margin < m.min_margin) {
      m.min_margin = margin;
      m.worst_x = x;
      m.lhs = lhs;
      m.rhs = rhs;
    }
  }
  return m;
}

std::vector<double> sigma_ladder(double sigma_max) {
  std::vector<double> out;
  for (double s = 1.05; s < sigma_max; s *= 1.05) out.push_back(s);
  out.push_back(sigma_max);
  return out;
}

struct GaugeDoubling {
  bool found = false;
  double sigma = 0.0;
  double min_margin = 0.0;
  std::vector<DoublingWitness> witnesses;
};

GaugeDoubling find_gauge_sigma(const std::function<double(double)>& gauge, double R,
                               double sigma_max, int grid_size) {
  GaugeDoubling out;
  for (double s : sigma_ladder(sigma_max)) {
    const auto m = scan_margin(gauge, s, R, grid_size);
    if (m.min_margin >= 0.0) {
      out.found = true;
      out.sigma = s;
      out.min_margin = m.min_margin;
      return out;
    }
    out.witnesses.push_back({s, m.worst_x, m.lhs, m.rhs});
  }
  return out;
}

}  // namespace

double doubling_margin(const LambdaView& view, double sigma, double R,
                       int grid_size) {
  auto gauge = [&view](double x) { return view.profile->lambda(x); };
  return scan_margin(gauge, sigma, R, grid_size).min_margin;
}

DoublingOutcome find_sigma(const LambdaView& view, double R, double sigma_max,
                           int grid_size) {
  if (!(R > 0.0) || !(R < view.profile->f_inv_one()))
    throw domain_error("find_sigma: need 0 < R < f_inv_one = " +
                       std::to_string(view.profile->f_inv_one()));
  if (!(sigma_max > 1.0)) throw domain_error("find_sigma: sigma_max must exceed 1");
  auto gauge = [&view](double x) { return view.profile->lambda(x); };
  const auto found = find_gauge_sigma(gauge, R, sigma_max, grid_size);
  if (!found.found)
    return NotDoublingEvidence{found.witnesses, sigma_max};
  DoublingCertificate cert;
  cert.sigma = found.sigma;
  cert.R = R;
  cert.T = view.profile->lambda(R / found.sigma);
  cert.cprime = found.sigma - 1.0;
  cert.grid_size = grid_size;
  cert.min_margin = found.min_margin;
  return cert;
}

DiffSquaresResult diff_of_squares_check(const LambdaView& view,
                                        const DoublingCertificate& cert, int n,
                                        int grid_size, double tol) {
  if (n != 1 && n != 2) throw domain_error("diff_of_squares_check: n must be 1 or 2");
  const RadialProfile& pr = *view.profile;
  double max_ratio = 0.0;
  const double lo = std::log(cert.T) - 30.0 * std::log(10.0);
  const double hi = std::log(cert.T);
  for (int i = 0; i < grid_size; ++i) {
    const double t = std::exp(lo + (hi - lo) * i / (grid_size - 1));
    const double g1 = pr.g_inverse(t);
    const double g2 = pr.g_inverse(2.0 * t);
    if (g1 <= 0.0) continue;
    const double q = g2 / g1;
    const double ratio = std::pow(q, 2.0 * n) - 1.0;
    max_ratio = std::max(max_ratio, ratio);
  }
  const double bound = std::pow(cert.sigma, 2.0 * n) - 1.0 + tol;
  return {max_ratio, bound, max_ratio <= bound};
}

double SampledFunction::operator()(double t) const {
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), t);
  const size_t i = static_cast<size_t>(it - x.begin());
  const double w = (t - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + w * (y[i] - y[i - 1]);
}

PowerConvexityResult doubling_from_power_convexity(const SampledFunction& chi, double p,
                                                   double B, double sigma_max,
                                                   int grid_size) {
  if (chi.x.size() < 3 || chi.x.size() != chi.y.size())
    throw domain_error("power_convexity: need >= 3 samples");
  if (!(p > 0.0)) throw domain_error("power_convexity: p must be positive");
  if (!(B >= 1.0)) throw domain_error("power_convexity: B must be >= 1");
  if (chi.x.front() != 0.0 || chi.y.front() != 0.0)
    throw domain_error("power_convexity: chi(0) = 0 required");
  const double tol = 1e-12;
  for (size_t i = 1; i < chi.y.size(); ++i)
    if (!(chi.y[i] > chi.y[i - 1]))
      throw domain_error("power_convexity: chi must be increasing (at x=" +
                         std::to_string(chi.x[i]) + ")");
  // convexity of chi^p via second divided differences
  for (size_t i = 1; i + 1 < chi.x.size(); ++i) {
    const double gm = std::pow(chi.y[i - 1], p);
    const double g0 = std::pow(chi.y[i], p);
    const double gp = std::pow(chi.y[i + 1], p);
    const double d1 = (g0 - gm) / (chi.x[i] - chi.x[i - 1]);
    const double d2 = (gp - g0) / (chi.x[i + 1] - chi.x[i]);
    const double scale = std::max({std::fabs(d1), std::fabs(d2), 1.0});
    if (d2 - d1 < -1e-9 * scale - tol) {
      std::ostringstream os;
      os << "power_convexity: chi^p not convex at triple (" << chi.x[i - 1] << ", "
         << chi.x[i] << ", " << chi.x[i + 1] << "), slope drop " << (d2 - d1);
      throw domain_error(os.str());
    }
  }

  PowerConvexityResult out;
  out.nu = 0;
  while (std::pow(2.0, out.nu) < p) ++out.nu;
  out.N = 1;
  while (std::pow(2.0, out.N) < 2.0 * B * B) ++out.N;
  out.R_out = std::pow(2.0, -(out.nu + 1)) * chi.eps0();

  auto gauge = [&chi](double x) { return chi(x); };
  const auto found = find_gauge_sigma(gauge, out.R_out, sigma_max, grid_size);
  if (!found.found)
    throw computation_error("power_convexity: ladder exhausted without a certificate");
  out.sigma_chi = found.sigma;
  out.sigma_out = std::pow(found.sigma, out.N);
  return out;
}

std::string certificate_to_json(const DoublingCertificate& cert) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"sigma\":" << cert.sigma << ",\"R\":" << cert.R << ",\"T\":" << cert.T
     << ",\"cprime\":" << cert.cprime << ",\"min_margin\":" << cert.min_margin
     << ",\"grid_size\":" << cert.grid_size << "}";
  return os.str();
}

}  // namespace bergman
