#include <benchmark/benchmark.h>

#include "scp/config_text.hpp"
#include "scp/event_scheduler.hpp"
#include "scp/meanfield.hpp"
#include "scp/percolation.hpp"
#include "scp/simulator.hpp"

using namespace scp;

namespace {

std::shared_ptr<const Geometry> ring(int n) { return std::make_shared<const Geometry>(std::vector<int>{n}); }

void BM_SchedulerPop(benchmark::State& state) {
  auto geo = ring(static_cast<int>(state.range(0)));
  const ModelParams m{4.0, 0.0, 0.9, 1.0};
  std::uint64_t rings = 0;
  for (auto _ : state) {
    EventScheduler sched(geo, m, 1);
    for (SiteIndex x = 0; x < geo->size(); ++x) sched.set_activity(x, SiteState::fertile1, 0.0);
    while (auto ev = sched.pop(10.0)) benchmark::DoNotOptimize(ev->to);
    rings += sched.rings();
  }
  state.counters["rings/s"] = benchmark::Counter(double(rings), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SchedulerPop)->Arg(100)->Arg(1000);

template <Trajectory (*Run)(const ModelParams&, const Torus&, double, std::uint64_t, const RunOptions&)>
void BM_Simulator(benchmark::State& state) {
  auto geo = ring(static_cast<int>(state.range(0)));
  const Torus init = parse_config("product(1,0,0,0)", geo, 1);
  const ModelParams m{4.0, 0.0, 0.9, 1.0};
  std::uint64_t events = 0, seed = 0;
  for (auto _ : state) {
    const auto t = Run(m, init, 10.0, ++seed, RunOptions{});
    events += t.applied_events;
  }
  state.counters["events/s"] = benchmark::Counter(double(events), benchmark::Counter::kIsRate);
}
BENCHMARK_TEMPLATE(BM_Simulator, run_graphical)->Arg(500);
BENCHMARK_TEMPLATE(BM_Simulator, run_gillespie)->Arg(500);

void BM_InfiniteRate(benchmark::State& state) {
  auto geo = ring(201);
  const Torus init = parse_config("single-fertile-1@center", geo);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_infinite_rate(ModelParams{kInfiniteRate, 0.0, 0.2, 1.0}, init, 200.0, ++seed));
  }
}
BENCHMARK(BM_InfiniteRate);

void BM_MeanField(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(meanfield::integrate_single(4.0, 0.5, {0.1, 0.1}, 100.0));
}
BENCHMARK(BM_MeanField);

void BM_WetSet(benchmark::State& state) {
  const auto g = percolation::OrientedGraph::make(percolation::GraphKind::L1, 1);
  percolation::Window w;
  w.radius = static_cast<int>(state.range(0));
  w.height = w.radius;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto field = percolation::sample_field(g, 0.1, w, ++seed);
    benchmark::DoNotOptimize(percolation::wet_set(field));
  }
}
BENCHMARK(BM_WetSet)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
