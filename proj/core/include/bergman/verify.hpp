#pragma once

#include <string>
#include <vector>

#include "bergman/certificates.hpp"
#include "bergman/kernel.hpp"
#include "bergman/metric.hpp"

namespace bergman {

enum class ZPathKind { Origin, RegionEdge };

/// Where the sweep sits in z at height t: the origin, or a fraction theta of
/// the admissible radius alpha t^{1/N}, clamped by f^{-1}(t) so the point
/// stays inside the domain (high-contact regions exit the domain otherwise).
struct ZPath {
  ZPathKind kind = ZPathKind::Origin;
  double theta = 0.5;
};

struct SweepSpec {
  const RadialProfile* profile = nullptr;
  DoublingCertificate cert;
  ApproachRegion region;
  double t_min = 0.0;
  double t_max = 0.0;
  int points = 30;
  ZPath path;
  double band_limit = 1e3;
  double slope_tol = 0.1;
  SlicingConfig slicing;
  QuadratureSpec norm_spec;
  std::string name;

  double z_at(double t) const;
};

struct BandRow {
  double t = 0.0;
  double z_abs = 0.0;
  double measured = 0.0;
  double envelope = 0.0;
  double ratio = 0.0;
  double error = 0.0;  // absolute error bound on measured
  double lower = 0.0;  // sandwich only
  double lower_error = 0.0;
  double upper = 0.0;  // sandwich only
  bool ok = true;
  bool excluded = false;
};

struct BandReport {
  std::string name;
  std::string kind;
  std::vector<BandRow> rows;
  double c_lo = 0.0;
  double c_hi = 0.0;
  double slope = 0.0;
  bool band_ok = false;
  bool slope_ok = false;
  bool rows_ok = false;
  int excluded_count = 0;
  double r_alpha_N = 0.0;  // reported approach threshold
  double r0 = 0.0;         // reported certificate threshold
  bool pass() const { return band_ok && slope_ok && rows_ok; }
};

/// measured = diagonal kernel along the path, envelope = t^{-2} f^{-1}(t)^{-2}.
BandReport sweep_kernel_band(const SweepSpec& spec, int threads = 0);

/// Per row: Bergman-Fuchs full-domain lower bound <= reference <= inscribed
/// bidisc volume bound, each within propagated errors. c_override > 0 swaps
/// the certificate constant (violation-injection hook for tests).
BandReport sweep_sandwich(const SweepSpec& spec, int threads = 0,
                          double c_override = 0.0);

/// One report per direction; measured = metric along the path, envelope =
/// f^{-1}(t)^{-2}|xi1|^2 + t^{-2}|xi2|^2.
std::vector<BandReport> sweep_metric_band(
    const SweepSpec& spec,
    const std::vector<std::pair<std::complex<double>, std::complex<double>>>& dirs,
    int threads = 0);

/// Deterministic index-parallel loop; fn(index, worker). threads == 0 uses
/// the hardware count.
void parallel_for_indexed(int n, int threads,
                          const std::function<void(int, int)>& fn);

int resolve_thread_count(int requested);

}  // namespace bergman
