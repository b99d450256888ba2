#include <benchmark/benchmark.h>

#include <complex>

#include "bergman/certificates.hpp"
#include "bergman/doubling.hpp"
#include "bergman/kernel.hpp"
#include "bergman/metric.hpp"

using namespace bergman;
using cx = std::complex<double>;

namespace {

const RadialProfile& exp1() {
  static const RadialProfile pr = RadialProfile::exp_inverse(1.0);
  return pr;
}

void BM_WeightedMoment(benchmark::State& state) {
  KernelEvaluator ev(exp1(), {});
  double tau = 1.0;
  for (auto _ : state) {
    // fresh tau each pass to defeat the cache
    tau *= 1.0000001;
    benchmark::DoNotOptimize(ev.log_moment(2, tau));
  }
}
BENCHMARK(BM_WeightedMoment);

void BM_KernelEvalColdCache(benchmark::State& state) {
  const double t = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) {
    KernelEvaluator ev(exp1(), {});
    benchmark::DoNotOptimize(ev.kernel(0.0, t));
  }
}
BENCHMARK(BM_KernelEvalColdCache)->Arg(2)->Arg(4)->Arg(6);

void BM_KernelEvalWarmCache(benchmark::State& state) {
  KernelEvaluator ev(exp1(), {});
  const double t = 1e-4;
  ev.kernel(0.0, t);
  for (auto _ : state) benchmark::DoNotOptimize(ev.kernel(0.0, t));
}
BENCHMARK(BM_KernelEvalWarmCache);

void BM_FullDomainNorm(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(candidate_norm_sq(candidates::PhiKernel{1e-3}, exp1(),
                                               NormDomain::FullDomain));
}
BENCHMARK(BM_FullDomainNorm);

void BM_BidiscCutNorm(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(candidate_norm_sq(candidates::PhiKernel{1e-3}, exp1(),
                                               NormDomain::BidiscCut));
}
BENCHMARK(BM_BidiscCutNorm);

void BM_DoublingScan(benchmark::State& state) {
  auto view = make_lambda_view(exp1());
  for (auto _ : state)
    benchmark::DoNotOptimize(doubling_margin(view, 2.1, 0.4, 10000));
}
BENCHMARK(BM_DoublingScan);

void BM_MetricAnalytic(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(metric_reference(exp1(), 0.0, 1e-3));
}
BENCHMARK(BM_MetricAnalytic);

}  // namespace

BENCHMARK_MAIN();
