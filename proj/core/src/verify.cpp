#include "bergman/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

using cx = std::complex<double>;

void validate_spec(const SweepSpec& spec) {
  if (spec.profile == nullptr) throw domain_error("sweep: profile required");
  if (!(spec.t_min > 0.0) || !(spec.t_min < spec.t_max))
    throw domain_error("sweep: need 0 < t_min < t_max");
  if (spec.points < 2) throw domain_error("sweep: need at least 2 points");
  if (spec.path.kind == ZPathKind::RegionEdge &&
      !(spec.path.theta > 0.0 && spec.path.theta < 1.0))
    throw domain_error("sweep: edge fraction must lie in (0,1)");
}

std::vector<double> t_grid(const SweepSpec& spec) {
  std::vector<double> ts(spec.points);
  const double lo = std::log(spec.t_min), hi = std::log(spec.t_max);
  for (int i = 0; i < spec.points; ++i)
    ts[i] = std::exp(lo + (hi - lo) * i / (spec.points - 1));
  ts.front() = spec.t_min;
  ts.back() = spec.t_max;
  return ts;
}

void finalize_band(BandReport& rep, const SweepSpec& spec) {
  double c_lo = std::numeric_limits<double>::infinity();
  double c_hi = 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  rep.excluded_count = 0;
  rep.rows_ok = true;
  for (const auto& row : rep.rows) {
    if (row.excluded) {
      ++rep.excluded_count;
      continue;
    }
    if (!row.ok) rep.rows_ok = false;
    if (row.measured > 0.0 && row.envelope > 0.0) {
      c_lo = std::min(c_lo, row.ratio);
      c_hi = std::max(c_hi, row.ratio);
      const double x = std::log(row.envelope), y = std::log(row.measured);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
  }
  if (n >= 2) {
    const double var = sxx - sx * sx / n;
    rep.slope = var > 0.0 ? (sxy - sx * sy / n) / var : 0.0;
    rep.c_lo = c_lo;
    rep.c_hi = c_hi;
    rep.band_ok = c_hi / c_lo <= spec.band_limit;
    rep.slope_ok = std::fabs(rep.slope - 1.0) <= spec.slope_tol;
  } else {
    rep.band_ok = rep.slope_ok = false;
    rep.rows_ok = false;
  }
}

double kernel_envelope(const RadialProfile& pr, double t) {
  const double fi = pr.f_inverse(t);
  return 1.0 / (t * t * fi * fi);
}

}  // namespace

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

void parallel_for_indexed(int n, int threads,
                          const std::function<void(int, int)>& fn) {
  const int workers = std::min(resolve_thread_count(threads), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i, w);
        } catch (...) {
          std::lock_guard<std::mutex> lk(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double SweepSpec::z_at(double t) const {
  if (path.kind == ZPathKind::Origin) return 0.0;
  return path.theta * std::min(region.radius(t), profile->f_inverse(t));
}

BandReport sweep_kernel_band(const SweepSpec& spec, int threads) {
  validate_spec(spec);
  const auto ts = t_grid(spec);
  BandReport rep;
  rep.name = spec.name.empty() ? "kernel_band" : spec.name;
  rep.kind = "kernel_band";
  rep.r_alpha_N = approach_threshold(*spec.profile, spec.cert, spec.region);
  rep.r0 = r0_threshold(*spec.profile, spec.cert).r0;
  rep.rows.resize(ts.size());

  const int workers = resolve_thread_count(threads);
  std::vector<KernelEvaluator> evals;
  evals.reserve(workers);
  for (int w = 0; w < workers; ++w) evals.emplace_back(*spec.profile, spec.slicing);

  parallel_for_indexed(
      static_cast<int>(ts.size()), workers, [&](int i, int w) {
        BandRow row;
        row.t = ts[i];
        row.z_abs = spec.z_at(ts[i]);
        row.envelope = kernel_envelope(*spec.profile, ts[i]);
        auto kv = evals[w].kernel(row.z_abs, ts[i]);
        row.measured = kv.value;
        row.error = kv.error;
        row.excluded = !kv.converged;
        row.ratio = row.measured / row.envelope;
        rep.rows[i] = row;
      });
  finalize_band(rep, spec);
  return rep;
}

BandReport sweep_sandwich(const SweepSpec& spec, int threads, double c_override) {
  validate_spec(spec);
  const auto ts = t_grid(spec);
  BandReport rep;
  rep.name = spec.name.empty() ? "sandwich" : spec.name;
  rep.kind = "sandwich";
  rep.r_alpha_N = approach_threshold(*spec.profile, spec.cert, spec.region);
  rep.r0 = r0_threshold(*spec.profile, spec.cert).r0;
  rep.rows.resize(ts.size());
  const double c = c_override > 0.0 ? c_override : 1.0 / spec.cert.sigma;

  const int workers = resolve_thread_count(threads);
  std::vector<KernelEvaluator> evals;
  evals.reserve(workers);
  for (int w = 0; w < workers; ++w) evals.emplace_back(*spec.profile, spec.slicing);

  parallel_for_indexed(
      static_cast<int>(ts.size()), workers, [&](int i, int w) {
        BandRow row;
        row.t = ts[i];
        row.z_abs = spec.z_at(ts[i]);
        row.envelope = kernel_envelope(*spec.profile, ts[i]);

        auto kv = evals[w].kernel(row.z_abs, ts[i]);
        row.measured = kv.value;
        row.error = kv.error;
        row.excluded = !kv.converged;
        row.ratio = row.measured / row.envelope;

        auto lb = kernel_lower_certificate(*spec.profile, cx(row.z_abs, 0.0), ts[i],
                                           NormDomain::FullDomain, spec.norm_spec);
        row.lower = lb.lower_bound;
        row.lower_error = lb.error;

        bool contained = true;
        try {
          make_inscribed_bidisc(*spec.profile, c, cx(row.z_abs, 0.0), ts[i]);
        } catch (const geometry_error&) {
          contained = false;
        }
        const double rho1 = 0.5 * c * spec.profile->f_inverse(ts[i]);
        const double rho2 = 0.5 * ts[i];
        row.upper = bidisc_kernel_center(rho1, rho2);

        const bool low_ok = row.lower <= row.measured + row.error + row.lower_error;
        const bool up_ok = row.measured <= row.upper + row.error;
        row.ok = contained && low_ok && up_ok;
        rep.rows[i] = row;
      });
  finalize_band(rep, spec);
  return rep;
}

std::vector<BandReport> sweep_metric_band(
    const SweepSpec& spec, const std::vector<std::pair<cx, cx>>& dirs, int threads) {
  validate_spec(spec);
  if (dirs.empty()) throw domain_error("sweep_metric_band: need directions");
  const auto ts = t_grid(spec);

  // metric forms are direction-independent: compute once per t
  std::vector<MetricForm> forms(ts.size());
  std::vector<bool> failed(ts.size(), false);
  parallel_for_indexed(
      static_cast<int>(ts.size()), threads, [&](int i, int) {
        const double z = spec.z_at(ts[i]);
        try {
          forms[i] = metric_reference(*spec.profile, z, ts[i], spec.slicing);
        } catch (const computation_error&) {
          failed[i] = true;
        }
      });

  std::vector<BandReport> out;
  for (size_t d = 0; d < dirs.size(); ++d) {
    const cx xi1 = dirs[d].first, xi2 = dirs[d].second;
    BandReport rep;
    rep.kind = "metric_band";
    rep.name = (spec.name.empty() ? std::string("metric_band") : spec.name) + "_dir" +
               std::to_string(d);
    rep.r_alpha_N = approach_threshold(*spec.profile, spec.cert, spec.region);
    rep.r0 = r0_threshold(*spec.profile, spec.cert).r0;
    for (size_t i = 0; i < ts.size(); ++i) {
      BandRow row;
      row.t = ts[i];
      row.z_abs = spec.z_at(ts[i]);
      const double fi = spec.profile->f_inverse(ts[i]);
      row.envelope = std::norm(xi1) / (fi * fi) + std::norm(xi2) / (ts[i] * ts[i]);
      row.excluded = failed[i];
      if (!failed[i]) {
        row.measured = forms[i].eval(xi1, xi2);
        row.ratio = row.measured / row.envelope;
      }
      rep.rows.push_back(row);
    }
    finalize_band(rep, spec);
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace bergman
