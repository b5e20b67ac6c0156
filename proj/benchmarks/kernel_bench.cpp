// Serial reference vs OpenMP kernel for the trial loop and the exhaustive
// allocation search. Compare the paired rows; outputs are identical by test.

#include <benchmark/benchmark.h>

#include "rebel/bench.hpp"
#include "rebel/llm.hpp"
#include "rebel/rng.hpp"
#include "rebel/sim.hpp"

namespace {

using namespace rebel;

bench::TrialFn mission_trial() {
    return [](std::size_t trial) {
        const auto s = bench::random_scenario(bench::TeamSpec::fixed(5, 7, 30), mix_seed(11, trial));
        const auto plan = llm::heuristic_allocate(s, PreferenceVector::single(Objective::MissionTime));
        sim::SimConfig cfg;
        cfg.seed = mix_seed(11, 1000 + trial);
        bench::TrialOutcome out;
        out.performance = sim::run_mission(s, plan, cfg).performance;
        return out;
    };
}

void BM_TrialsSerial(benchmark::State& state) {
    const auto fn = mission_trial();
    for (auto _ : state) benchmark::DoNotOptimize(bench::run_trials_serial(state.range(0), fn));
}

void BM_TrialsParallel(benchmark::State& state) {
    const auto fn = mission_trial();
    for (auto _ : state) benchmark::DoNotOptimize(bench::run_trials(state.range(0), fn));
}

BENCHMARK(BM_TrialsSerial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsParallel)->Arg(100)->Unit(benchmark::kMillisecond);

void brute_force(benchmark::State& state, bool parallel) {
    const auto s = bench::random_scenario(bench::TeamSpec::fixed(2, 3, static_cast<std::size_t>(state.range(0))), 5);
    const auto prefs = PreferenceVector::parse("TP=0.4,MT=0.4,HW=0.2");
    bench::BruteForceOptions opt;
    opt.parallel = parallel;
    for (auto _ : state) benchmark::DoNotOptimize(bench::brute_force_optimal(s, prefs, {}, opt));
    state.counters["plans"] = bench::search_space_size(s);
}

void BM_BruteForceSerial(benchmark::State& state) { brute_force(state, false); }
void BM_BruteForceParallel(benchmark::State& state) { brute_force(state, true); }

BENCHMARK(BM_BruteForceSerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForceParallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
