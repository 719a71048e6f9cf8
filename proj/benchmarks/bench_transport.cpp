#include <benchmark/benchmark.h>

#include <random>

#include "ot/transport.hpp"

namespace {

ot::OrdinalDistribution random_distribution(int k, std::mt19937_64& rng) {
  std::vector<double> probs(k);
  double sum = 0.0;
  for (double& p : probs) {
    p = 0.01 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
    sum += p;
  }
  for (double& p : probs) p /= sum;
  return ot::make_distribution(std::move(probs));
}

void BM_Discrepancy(benchmark::State& state) {
  std::mt19937_64 rng(1);
  int k = static_cast<int>(state.range(0));
  auto mu = random_distribution(k, rng);
  auto nu = random_distribution(k, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ot::discrepancy(mu, nu));
  }
}
BENCHMARK(BM_Discrepancy)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_MonotoneCoupling(benchmark::State& state) {
  std::mt19937_64 rng(2);
  int k = static_cast<int>(state.range(0));
  auto mu = random_distribution(k, rng);
  auto nu = random_distribution(k, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ot::min_cost_coupling(mu, nu));
  }
}
BENCHMARK(BM_MonotoneCoupling)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_MaxMobility(benchmark::State& state) {
  std::mt19937_64 rng(3);
  int k = static_cast<int>(state.range(0));
  auto mu = random_distribution(k, rng);
  auto nu = random_distribution(k, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ot::max_mobility(mu, nu));
  }
}
BENCHMARK(BM_MaxMobility)->Arg(4)->Arg(8)->Arg(12);

void BM_OptimalCellBounds(benchmark::State& state) {
  std::mt19937_64 rng(4);
  int k = static_cast<int>(state.range(0));
  auto mu = random_distribution(k, rng);
  auto nu = random_distribution(k, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ot::optimal_cell_bounds(mu, nu));
  }
}
BENCHMARK(BM_OptimalCellBounds)->Arg(4)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
