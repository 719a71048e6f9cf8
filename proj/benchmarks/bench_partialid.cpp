#include <benchmark/benchmark.h>

#include <random>

#include "ot/inference.hpp"
#include "ot/partialid.hpp"

namespace {

ot::ObservedSample random_sample(int k, std::int64_t n, std::mt19937_64& rng) {
  std::vector<std::int64_t> counts(k, 1);
  std::int64_t left = n - k - n / 20;
  for (int i = 0; i < k; ++i) {
    std::int64_t take = static_cast<std::int64_t>(rng() % (left + 1));
    counts[i] += take;
    left -= take;
  }
  counts[k - 1] += left;
  return ot::ObservedSample::from_counts(std::move(counts), n / 20);
}

void BM_DiscrepancyEndpoints(benchmark::State& state) {
  std::mt19937_64 rng(5);
  int k = static_cast<int>(state.range(0));
  auto bm = ot::identified_set(random_sample(k, 1000, rng));
  auto bn = ot::identified_set(random_sample(k, 1000, rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ot::discrepancy_endpoints(bm, bn));
  }
}
BENCHMARK(BM_DiscrepancyEndpoints)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_EndpointCouplingBounds(benchmark::State& state) {
  std::mt19937_64 rng(6);
  int k = static_cast<int>(state.range(0));
  auto bm = ot::identified_set(random_sample(k, 1000, rng));
  auto bn = ot::identified_set(random_sample(k, 1000, rng));
  auto interval = ot::discrepancy_endpoints(bm, bn);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ot::endpoint_coupling_bounds(bm, bn, ot::Endpoint::Lower, interval));
  }
}
BENCHMARK(BM_EndpointCouplingBounds)->Arg(4)->Arg(6)->Arg(8);

void BM_BootstrapIntervalCI(benchmark::State& state) {
  std::mt19937_64 rng(7);
  auto sm = random_sample(4, 500, rng);
  auto sn = random_sample(4, 500, rng);
  ot::BootstrapConfig cfg{static_cast<int>(state.range(0)), 0.05, 11};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ot::confidence_set_d(sm, sn, cfg));
  }
}
BENCHMARK(BM_BootstrapIntervalCI)->Arg(49)->Arg(199);

}  // namespace
