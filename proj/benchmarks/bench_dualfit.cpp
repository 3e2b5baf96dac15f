#include <benchmark/benchmark.h>

#include "poacert/dualfit.hpp"
#include "poacert/generators.hpp"
#include "poacert/localsearch.hpp"

using namespace poacert;

static void BM_FitAndVerifyPotential(benchmark::State& state) {
  const LowerBoundLS lb = gen_lower_bound_ls(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const DualSolution sol =
        fit_dual(Scenario::ImprovedLSFit, lb.instance, Certificate(lb.shifted));
    benchmark::DoNotOptimize(
        verify_dual(Scenario::ImprovedLSFit, lb.instance, Certificate(lb.shifted), sol).pass);
  }
}
BENCHMARK(BM_FitAndVerifyPotential)->Arg(30)->Arg(120);

static void BM_VerifyKK(benchmark::State& state) {
  const KKInstance kk = gen_kk({static_cast<int>(state.range(0)), 1, 2.0, 0.01});
  const KKCertificate cert{kk.params, kk.small_jobs, kk.nash};
  const Scenario s = kk.high_p ? Scenario::KKHighP : Scenario::KKLowP;
  for (auto _ : state) {
    const DualSolution sol = fit_dual(s, kk.instance, Certificate(cert));
    benchmark::DoNotOptimize(verify_dual(s, kk.instance, Certificate(cert), sol).pass);
  }
}
BENCHMARK(BM_VerifyKK)->Arg(2)->Arg(4)->Arg(6);
