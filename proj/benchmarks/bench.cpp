#include <benchmark/benchmark.h>

#include <vector>

#include "dpqt/calibration.hpp"
#include "dpqt/fixtures.hpp"
#include "dpqt/matrix.hpp"
#include "dpqt/rdp.hpp"
#include "dpqt/simulate.hpp"
#include "dpqt/stats.hpp"

namespace {

void BM_min_sigma(benchmark::State& state) {
  dpqt::PrivacyLevel lv{1.0, 1e-5};
  for (auto _ : state)
    benchmark::DoNotOptimize(dpqt::min_sigma(lv, 1.0));
}
BENCHMARK(BM_min_sigma);

void BM_weighted_chi_sq_cdf(benchmark::State& state) {
  std::vector<double> w{71.07, 40.99, 20.62, 8.96, 4.89, 1.96};
  for (auto _ : state)
    benchmark::DoNotOptimize(dpqt::weighted_chi_sq_cdf(w, 60.0));
}
BENCHMARK(BM_weighted_chi_sq_cdf);

void BM_sym_eigen_blood(benchmark::State& state) {
  const dpqt::SymMatrix& sigma = dpqt::fixtures::blood6_sigma();
  for (auto _ : state)
    benchmark::DoNotOptimize(dpqt::sym_eigen(sigma));
}
BENCHMARK(BM_sym_eigen_blood);

void BM_mechanism_suite(benchmark::State& state) {
  dpqt::CovarianceModel model =
      dpqt::CovarianceModel::make(dpqt::fixtures::blood6_sigma(), 50);
  dpqt::RdpLevel level{1.0, 0.02, 1e-4};
  for (auto _ : state)
    benchmark::DoNotOptimize(dpqt::mechanism_suite(model, level));
}
BENCHMARK(BM_mechanism_suite);

void BM_simulation_fixed(benchmark::State& state) {
  dpqt::SimPlan plan;
  plan.scenario = dpqt::Scenario::fixed_data;
  plan.seed = 5;
  plan.replications = state.range(0);
  plan.psi = {2.0, 0.4, 1.0};
  plan.mu = {1.0, -0.5, 0.25};
  plan.eta = {3.0, 1.0, -2.0};
  plan.workers = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(dpqt::run_plan(plan));
}
BENCHMARK(BM_simulation_fixed)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
