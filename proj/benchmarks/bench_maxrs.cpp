#include <benchmark/benchmark.h>

#include "maxrs/approx_maxcrs.hpp"
#include "maxrs/datasets.hpp"
#include "maxrs/exact_maxrs.hpp"

namespace {

using namespace maxrs;

// Wall time is informational only; block transfers are reported as counters.
void BM_ExactByN(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GenSpec spec = GenSpec::scaled(n, 1);
  const auto objects = generate_objects(spec);
  const double d = spec.extent / 250.0;
  MaxRSResult res;
  for (auto _ : state) {
    BlockStore store(EMConfig{8, 128, 0});
    const auto file = write_all<WeightedObject>(store, objects);
    res = solve_maxrs(store, file, d, d);
    benchmark::DoNotOptimize(res.region.sum);
  }
  state.counters["io_sort"] = static_cast<double>(res.sort_io.total());
  state.counters["io_sweep"] = static_cast<double>(res.sweep_io.total());
  state.counters["depth"] = static_cast<double>(res.stats.depth);
}
BENCHMARK(BM_ExactByN)->Arg(1000)->Arg(2000)->Arg(5000)->Arg(10000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_ExactByBuffer(benchmark::State& state) {
  const GenSpec spec = GenSpec::scaled(10000, 1);
  const auto objects = generate_objects(spec);
  const double d = spec.extent / 250.0;
  const auto M = static_cast<std::size_t>(state.range(0));
  MaxRSResult res;
  for (auto _ : state) {
    BlockStore store(EMConfig{8, M, 0});
    const auto file = write_all<WeightedObject>(store, objects);
    res = solve_maxrs(store, file, d, d);
    benchmark::DoNotOptimize(res.region.sum);
  }
  state.counters["io_total"] = static_cast<double>(res.sort_io.total() + res.sweep_io.total());
}
BENCHMARK(BM_ExactByBuffer)->Arg(128)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_ApproxCircle(benchmark::State& state) {
  const GenSpec spec = GenSpec::scaled(static_cast<std::size_t>(state.range(0)), 1);
  const auto objects = generate_objects(spec);
  const double d = spec.extent / 250.0;
  CrsAnswer ans;
  for (auto _ : state) {
    BlockStore store(EMConfig{8, 128, 0});
    const auto file = write_all<WeightedObject>(store, objects);
    ans = approx_maxcrs(store, file, d);
    benchmark::DoNotOptimize(ans.value);
  }
  state.counters["io_scan"] = static_cast<double>(ans.scan_io.total());
}
BENCHMARK(BM_ApproxCircle)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
