#include "bergman/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogFloor = -700.0;  // below this exp() underflows

double bisect_increasing(const std::function<double(double)>& fn, double target,
                         double lo, double hi) {
  double flo = fn(lo) - target;
  double fhi = fn(hi) - target;
  if (flo > 0.0 || fhi < 0.0)
    throw computation_error("bisect: target not bracketed");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (fn(mid) - target <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FValue RadialProfile::core_eval(double x) const {
  switch (family_) {
    case ProfileFamily::ExpInverse: {
      const double lv = -std::pow(x, -p_);
      return {lv > kLogFloor ? std::exp(lv) : 0.0, lv};
    }
    case ProfileFamily::DoubleExp: {
      const double e = std::exp(1.0 / x);  // +inf for tiny x is fine
      const double lv = -e;
      return {lv > kLogFloor ? std::exp(lv) : 0.0, lv};
    }
    case ProfileFamily::Monomial: {
      const double lv = 2.0 * m_ * std::log(x);
      return {lv > kLogFloor ? std::exp(lv) : 0.0, lv};
    }
    case ProfileFamily::Custom:
      return custom_(x);
  }
  throw computation_error("core_eval: unreachable");
}

RadialProfile::Derivs RadialProfile::core_derivs(double x) const {
  // term-by-term in log space: the weight underflows long before the
  // polynomial factors overflow, and inf*0 must not appear
  auto exp0 = [](double l) { return l > kLogFloor ? std::exp(l) : 0.0; };
  switch (family_) {
    case ProfileFamily::ExpInverse: {
      const double lf = -std::pow(x, -p_);
      const double lx = std::log(x);
      const double f1 = exp0(lf + std::log(p_) - (p_ + 1.0) * lx);
      const double f2 = exp0(lf + 2.0 * std::log(p_) - 2.0 * (p_ + 1.0) * lx) -
                        exp0(lf + std::log(p_ * (p_ + 1.0)) - (p_ + 2.0) * lx);
      return {f1, f2};
    }
    case ProfileFamily::DoubleExp: {
      const double lf = -std::exp(1.0 / x);
      const double lx = std::log(x);
      const double f1 = exp0(lf + 1.0 / x - 2.0 * lx);
      const double f2 = exp0(lf + 2.0 / x - 4.0 * lx) -
                        exp0(lf + 1.0 / x - 4.0 * lx) -
                        exp0(lf + std::log(2.0) + 1.0 / x - 3.0 * lx);
      return {f1, f2};
    }
    case ProfileFamily::Monomial: {
      const double n = 2.0 * m_;
      return {n * std::pow(x, n - 1.0), n * (n - 1.0) * std::pow(x, n - 2.0)};
    }
    case ProfileFamily::Custom: {
      const double h = std::max(1e-6 * x, 1e-12);
      const double fp = custom_(x + h).value;
      const double fm = custom_(x - h > 0.0 ? x - h : x * 0.5).value;
      const double f0 = custom_(x).value;
      const double hm = x - h > 0.0 ? h : x * 0.5;
      // nonuniform central differences
      const double f1 = (fp - fm) / (h + hm);
      const double f2 = 2.0 * (hm * fp - (h + hm) * f0 + h * fm) /
                        (h * hm * (h + hm));
      return {f1, f2};
    }
  }
  throw computation_error("core_derivs: unreachable");
}

void RadialProfile::finalize() {
  if (pure_) {
    f_inv_one_ = 1.0;  // x^{2M} = 1
    lambda_validity_ = 0.995;
    return;
  }
  const FValue vc = core_eval(cutoff_);
  if (!(vc.value > 1e-300))
    throw domain_error("profile: core value at the cutoff underflows doubles");
  if (!(vc.value < 1.0))
    throw domain_error("profile: core value at the cutoff must be < 1");
  const Derivs dc = core_derivs(cutoff_);
  ext_value_ = vc.value;
  ext_slope_ = dc.f1;
  kappa_ = std::max({kappa_, 1.0, dc.f2 / 2.0});
  // f_inv_one: kappa y^2 + slope y + value = 1
  const double s = ext_slope_, k = kappa_, v0 = ext_value_;
  f_inv_one_ = cutoff_ + (-s + std::sqrt(s * s + 4.0 * k * (1.0 - v0))) / (2.0 * k);
  lambda_validity_ = std::min(0.995 * f_inv_one_, x_max_);
}

RadialProfile RadialProfile::exp_inverse(double p, double cutoff, double kappa) {
  if (!(p > 0.0)) throw domain_error("exp_inverse: p must be positive");
  RadialProfile r;
  r.family_ = ProfileFamily::ExpInverse;
  r.p_ = p;
  r.cutoff_ = cutoff;
  r.kappa_ = kappa;
  r.name_ = "exp_inverse(p=" + std::to_string(p) + ")";
  r.finalize();
  return r;
}

RadialProfile RadialProfile::double_exp(double cutoff, double kappa) {
  RadialProfile r;
  r.family_ = ProfileFamily::DoubleExp;
  r.cutoff_ = cutoff;
  r.kappa_ = kappa;
  r.name_ = "double_exp";
  r.finalize();
  return r;
}

RadialProfile RadialProfile::monomial(int M, double cutoff, double kappa) {
  if (M < 1) throw domain_error("monomial: M must be a positive integer");
  RadialProfile r;
  r.family_ = ProfileFamily::Monomial;
  r.m_ = M;
  r.cutoff_ = cutoff;
  r.kappa_ = kappa;
  r.name_ = "monomial(M=" + std::to_string(M) + ")";
  r.finalize();
  return r;
}

RadialProfile RadialProfile::monomial_pure(int M) {
  if (M < 1) throw domain_error("monomial_pure: M must be a positive integer");
  RadialProfile r;
  r.family_ = ProfileFamily::Monomial;
  r.m_ = M;
  r.pure_ = true;
  r.cutoff_ = kInf;
  r.name_ = "monomial_pure(M=" + std::to_string(M) + ")";
  r.finalize();
  return r;
}

RadialProfile RadialProfile::custom(CustomCore core, double cutoff, double kappa,
                                    std::string name) {
  if (!core) throw domain_error("custom: evaluator required");
  RadialProfile r;
  r.family_ = ProfileFamily::Custom;
  r.custom_ = std::move(core);
  r.cutoff_ = cutoff;
  r.kappa_ = kappa;
  r.name_ = std::move(name);
  try {
    r.finalize();
  } catch (const std::exception&) {
    // non-conforming custom profiles (validation targets) keep defaults
    r.f_inv_one_ = cutoff;
    r.lambda_validity_ = 0.5 * cutoff;
  }
  return r;
}

FValue RadialProfile::eval(double x) const {
  if (x < 0.0) throw domain_error("eval: x must be nonnegative");
  if (x == 0.0) return {0.0, -kInf};
  if (pure_ || x < cutoff_) return core_eval(x);
  const double y = x - cutoff_;
  const double v = ext_value_ + ext_slope_ * y + kappa_ * y * y;
  return {v, std::log(v)};
}

RadialProfile::Derivs RadialProfile::derivs(double x) const {
  if (!(x > 0.0)) throw domain_error("derivs: x must be positive");
  if (pure_ || x < cutoff_) return core_derivs(x);
  const double y = x - cutoff_;
  return {ext_slope_ + 2.0 * kappa_ * y, 2.0 * kappa_};
}

double RadialProfile::f_inverse(double t) const {
  if (!(t > 0.0)) throw domain_error("f_inverse: t must be positive");
  if (!(t < eval(x_max_).value))
    throw domain_error("f_inverse: t must be below f(x_max)");
  const double top = pure_ ? kInf : ext_value_;
  if (t >= top) {
    // extension region: kappa y^2 + slope y + value = t
    const double s = ext_slope_, k = kappa_, v0 = ext_value_;
    return cutoff_ + (-s + std::sqrt(s * s + 4.0 * k * (t - v0))) / (2.0 * k);
  }
  switch (family_) {
    case ProfileFamily::ExpInverse:
      return std::pow(std::log(1.0 / t), -1.0 / p_);
    case ProfileFamily::DoubleExp:
      return 1.0 / std::log(std::log(1.0 / t));
    case ProfileFamily::Monomial:
      return std::pow(t, 1.0 / (2.0 * m_));
    case ProfileFamily::Custom: {
      auto fn = [this](double x) { return core_eval(x).log_value; };
      return bisect_increasing(fn, std::log(t), 1e-300, cutoff_);
    }
  }
  throw computation_error("f_inverse: unreachable");
}

double RadialProfile::lambda(double x) const {
  if (x < 0.0) throw domain_error("lambda: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (!(x < f_inv_one_))
    throw domain_error("lambda: x must be below f_inv_one = " +
                       std::to_string(f_inv_one_));
  if (pure_ || x < cutoff_) {
    switch (family_) {
      case ProfileFamily::ExpInverse:
        return std::pow(x, p_);
      case ProfileFamily::DoubleExp:
        return std::exp(-1.0 / x);
      case ProfileFamily::Monomial:
        return -1.0 / (2.0 * m_ * std::log(x));
      case ProfileFamily::Custom:
        return -1.0 / custom_(x).log_value;
    }
  }
  return -1.0 / eval(x).log_value;
}

double RadialProfile::g_inverse(double t) const {
  if (t < 0.0) throw domain_error("g_inverse: t must be nonnegative");
  if (t == 0.0) return 0.0;
  const double t_top = lambda(lambda_validity_);
  if (!(t <= t_top))
    throw domain_error("g_inverse: t exceeds lambda(validity) = " +
                       std::to_string(t_top));
  const double core_top = pure_ ? kInf : cutoff_;
  double t_core_top;
  if (pure_)
    t_core_top = t_top;
  else
    t_core_top = lambda(std::min(cutoff_, lambda_validity_));
  if (t <= t_core_top) {
    switch (family_) {
      case ProfileFamily::ExpInverse:
        return std::pow(t, 1.0 / p_);
      case ProfileFamily::DoubleExp:
        return -1.0 / std::log(t);
      case ProfileFamily::Monomial:
        return std::exp(-1.0 / (2.0 * m_ * t));
      case ProfileFamily::Custom:
        break;  // fall through to bisection
    }
  }
  auto fn = [this](double x) { return lambda(x); };
  const double lo = family_ == ProfileFamily::Custom ? 1e-300
                                                     : std::min(core_top, lambda_validity_) * 0.5;
  return bisect_increasing(fn, t, std::min(lo, lambda_validity_ * 0.5), lambda_validity_);
}

LambdaView make_lambda_view(const RadialProfile& profile) {
  return {&profile, profile.lambda_validity()};
}

LambdaView make_lambda_view(const RadialProfile& profile, double validity) {
  if (!(validity > 0.0) || !(validity < profile.f_inv_one()))
    throw domain_error("lambda view: validity must lie in (0, f_inv_one)");
  return {&profile, validity};
}

double lambda_and_inverse(const LambdaView& view, double arg, LambdaDirection dir) {
  const RadialProfile& pr = *view.profile;
  switch (dir) {
    case LambdaDirection::Forward:
      if (arg < 0.0 || arg >= pr.f_inv_one())
        throw domain_error("lambda forward: need 0 <= x < f_inv_one");
      return pr.lambda(arg);
    case LambdaDirection::Inverse: {
      const double top = pr.lambda(view.validity);
      if (arg < 0.0 || arg > top)
        throw domain_error("lambda inverse: need 0 <= t <= lambda(validity)");
      return pr.g_inverse(arg);
    }
    case LambdaDirection::FInverse:
      if (!(arg > 0.0) || !(arg < pr.eval(pr.x_max()).value))
        throw domain_error("f_inverse: need 0 < t < f(x_max)");
      return pr.f_inverse(arg);
  }
  throw computation_error("lambda_and_inverse: unreachable");
}

ValidationReport validate(const RadialProfile& profile, int grid_points) {
  ValidationReport rep;
  const double x_max = profile.x_max();

  const FValue at0 = profile.eval(0.0);
  rep.f0_zero = at0.value == 0.0 && std::isinf(at0.log_value);
  if (!rep.f0_zero) rep.witnesses.push_back({"f0_zero", 0.0, at0.value});

  // log-spaced grid on [1e-8, x_max]
  std::vector<double> xs(grid_points);
  const double lo = std::log(1e-8), hi = std::log(x_max);
  for (int i = 0; i < grid_points; ++i)
    xs[i] = std::exp(lo + (hi - lo) * i / (grid_points - 1));
  xs.back() = x_max;

  rep.strictly_increasing = true;
  FValue prev = profile.eval(xs[0]);
  for (int i = 1; i < grid_points; ++i) {
    const FValue cur = profile.eval(xs[i]);
    bool ok;
    if (std::isfinite(prev.log_value) || std::isfinite(cur.log_value)) {
      ok = cur.log_value > prev.log_value;
    } else if (prev.log_value == -kInf && cur.log_value == -kInf) {
      ok = true;  // both below the representable floor
    } else {
      ok = cur.value > prev.value;  // non-conforming custom values
    }
    if (std::isnan(prev.log_value) || std::isnan(cur.log_value))
      ok = cur.value > prev.value;
    if (!ok) {
      rep.strictly_increasing = false;
      rep.witnesses.push_back({"strictly_increasing", xs[i], cur.value - prev.value});
      if (rep.witnesses.size() > 8) break;
    }
    prev = cur;
  }

  rep.subharmonic = true;
  for (int i = 0; i < grid_points; i += 1) {
    const double x = xs[i];
    const auto d = profile.derivs(x);
    const double expr = d.f2 + d.f1 / x;
    if (!(expr >= -1e-10)) {
      rep.subharmonic = false;
      rep.witnesses.push_back({"subharmonic", x, expr});
      if (rep.witnesses.size() > 16) break;
    }
  }

  const FValue top = profile.eval(x_max);
  const auto dtop = profile.derivs(x_max);
  rep.grows_to_infinity = top.value > 1.0 && dtop.f1 > 0.0;
  if (!rep.grows_to_infinity)
    rep.witnesses.push_back({"grows_to_infinity", x_max, top.value});

  // infinite-order vanishing probe, n = 20, in log space
  {
    const int n = 20;
    std::vector<double> probe_x, s;
    for (int j = 0; j <= 10; ++j) {
      const double x = std::pow(10.0, -12.0 + j);
      probe_x.push_back(x);
      double lv = profile.eval(x).log_value;
      if (lv < -1e300 || lv == -kInf) lv = -1e300;
      s.push_back(lv - n * std::log(x));
    }
    bool deep = s[0] <= -30.0;
    bool net_decrease = s[0] <= s[2] - 1.0 || (s[0] <= -1e299 && s[2] <= -1e299);
    bool monotone_low = true;
    for (int j = 0; j + 1 < 4; ++j)
      if (s[j] > s[j + 1] + 1e-9 && !(s[j] <= -1e299)) monotone_low = false;
    rep.infinite_order_vanishing = deep && net_decrease && monotone_low;
    if (!rep.infinite_order_vanishing)
      rep.witnesses.push_back({"infinite_order_vanishing", probe_x[0], s[0]});
  }

  return rep;
}

}  // namespace bergman
