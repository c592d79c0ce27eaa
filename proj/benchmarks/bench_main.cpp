#include <benchmark/benchmark.h>

#include <random>

#include "uavsee/bcd.hpp"

using namespace uavsee;

namespace {

struct Setup {
  Scenario sc;
  TrajectoryPlan plan;
  PowerSchedule powers;
  ScheduleMatrix x;
};

Setup make_setup(char layout, double period) {
  Setup s;
  s.sc = layout_scenario(layout, 7, period, 1.0);
  s.plan = circular_initializer(s.sc);
  s.powers = PowerSchedule::uniform(s.sc.uav_count(), s.sc.slot_count, 0.5 * s.sc.phys.p_max_w);
  s.x = greedy_schedule(pair_secrecy_table(s.plan, s.powers, s.sc)).schedule;
  return s;
}

PairSecrecyTable random_table(int slots, int users, int suavs) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 10.0);
  std::vector<std::vector<std::vector<double>>> v(slots, std::vector<std::vector<double>>(users, std::vector<double>(suavs)));
  for (auto& m : v) {
    for (auto& row : m) {
      for (auto& e : row) e = u(rng);
    }
  }
  return PairSecrecyTable::from_matrices(v);
}

}  // namespace

static void BM_SecrecyReport(benchmark::State& state) {
  const Setup s = make_setup('C', static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(secrecy_report(s.plan, s.powers, s.x, s.sc).sum_bps);
}
BENCHMARK(BM_SecrecyReport)->Arg(40)->Arg(160);

static void BM_GreedySchedule(benchmark::State& state) {
  const PairSecrecyTable t = random_table(160, static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(greedy_schedule(t).objective);
}
BENCHMARK(BM_GreedySchedule)->Arg(2)->Arg(8)->Arg(32);

static void BM_ExhaustiveSchedule(benchmark::State& state) {
  const PairSecrecyTable t = random_table(40, static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_schedule(t).objective);
}
BENCHMARK(BM_ExhaustiveSchedule)->Arg(2)->Arg(4)->Arg(6);

static void BM_PowerProgram(benchmark::State& state) {
  const Setup s = make_setup('C', 40.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_p21(s.x, s.plan, s.powers, s.sc).objective);
}
BENCHMARK(BM_PowerProgram)->Unit(benchmark::kMillisecond);

static void BM_TrajectoryDinkelbach(benchmark::State& state) {
  const Setup s = make_setup('B', static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dinkelbach(s.x, s.powers, s.plan, s.sc).zeta_star);
}
BENCHMARK(BM_TrajectoryDinkelbach)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond)->Iterations(2);

static void BM_BcdRun(benchmark::State& state) {
  const Scenario sc = layout_scenario('A', 7, 40.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(run_see(sc).see);
}
BENCHMARK(BM_BcdRun)->Unit(benchmark::kSecond)->Iterations(1);
BENCHMARK_MAIN();
