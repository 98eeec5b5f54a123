#include <benchmark/benchmark.h>

#include <random>

#include "acaslab/batch.hpp"
#include "acaslab/oracle.hpp"

using namespace acaslab;

namespace {

std::vector<RegionQuery> make_queries(std::size_t n, RegionKind kind) {
  std::mt19937_64 rng(42);
  auto uni = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  Params p;
  p.r_v = 250;
  p.epsilon = kind == RegionKind::CEps || kind == RegionKind::CSafeable ? 10 : -1;
  ModelVariant m = kind == RegionKind::CSafeable ? ModelVariant::SafeableVert
                   : kind == RegionKind::CEps    ? ModelVariant::BoundVert
                                                 : ModelVariant::InfVert;
  ValidatedParams vp = validate_params(p, m);
  std::vector<RegionQuery> qs;
  qs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Advisory a;
    a.w = (rng() & 1) ? 1 : -1;
    a.v_lo = a.w * uni(0, 45);
    if (p.epsilon >= 0) a.v_up = a.w * (a.w * a.v_lo + uni(5, 120));
    EncounterState s{uni(-2000, 30000), uni(-3000, 3000), uni(-100, 100), 0};
    qs.push_back({s, a, vp, kind});
  }
  return qs;
}

void bench_exact(benchmark::State& state, ExecMode mode, RegionKind kind) {
  auto qs = make_queries((std::size_t)state.range(0), kind);
  for (auto _ : state) {
    auto v = eval_region_batch(qs, mode);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bench_oracle(benchmark::State& state, ExecMode mode) {
  auto qs = make_queries((std::size_t)state.range(0), RegionKind::LInf);
  for (auto _ : state) {
    auto v = oracle_batch(qs, 0.01, 300, mode);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(bench_exact, linf_serial, ExecMode::Serial, RegionKind::LInf)->Arg(4096);
BENCHMARK_CAPTURE(bench_exact, linf_parallel, ExecMode::Parallel, RegionKind::LInf)->Arg(4096);
BENCHMARK_CAPTURE(bench_exact, safeable_serial, ExecMode::Serial, RegionKind::CSafeable)
    ->Arg(4096);
BENCHMARK_CAPTURE(bench_exact, safeable_parallel, ExecMode::Parallel, RegionKind::CSafeable)
    ->Arg(4096);
BENCHMARK_CAPTURE(bench_oracle, linf_serial, ExecMode::Serial)->Arg(256);
BENCHMARK_CAPTURE(bench_oracle, linf_parallel, ExecMode::Parallel)->Arg(256);

BENCHMARK_MAIN();
