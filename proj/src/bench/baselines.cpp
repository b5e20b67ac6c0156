#include "rebel/bench.hpp"
#include "rebel/rng.hpp"

namespace rebel::bench {

std::vector<TaskRoles> task_options(const MissionScenario& input) {
    MissionScenario s = input;
    s.canonicalize();
    std::vector<TaskRoles> out;
    out.reserve(s.robots.size() * (1 + 2 * s.humans.size()));
    for (const auto& r : s.robots) {
        out.push_back({r.id, std::nullopt, std::nullopt});
        for (const auto& h : s.humans) out.push_back({r.id, std::nullopt, h.id});
        for (const auto& h : s.humans) out.push_back({r.id, h.id, h.id});
    }
    return out;
}

ItaPlan random_allocate(const MissionScenario& scenario, std::uint64_t seed) {
    if (!is_runnable(scenario)) throw Error("random allocation needs a runnable scenario");
    const auto options = task_options(scenario);
    MissionScenario s = scenario;
    s.canonicalize();
    SplitMix rng(mix_seed(seed, fnv1a("random-allocate")));
    ItaPlan plan;
    for (const auto& t : s.tasks) plan.assign(t.id, options[rng.below(options.size())]);
    return plan;
}

std::vector<std::uint64_t> common_seeds(std::uint64_t seed, std::size_t samples) {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < samples; ++i) out.push_back(mix_seed(seed, 0xC0FFEEULL + i));
    return out;
}

std::vector<PerformanceRecord> evaluate_plan(const MissionScenario& scenario, const ItaPlan& plan,
                                             const sim::SimConfig& cfg, std::span<const std::uint64_t> seeds) {
    std::vector<PerformanceRecord> out;
    auto c = cfg;
    for (const auto seed : seeds) {
        c.seed = seed;
        out.push_back(sim::run_mission(scenario, plan, c).performance);
    }
    return out;
}

double mean_aggregate(std::span<const PerformanceRecord> records, const PreferenceVector& prefs,
                      const NormalizationBounds& bounds) {
    if (records.empty()) throw Error("mean of an empty record set");
    double sum = 0.0;
    for (const auto& r : records) sum += aggregate_objective(r, prefs, bounds);
    return sum / static_cast<double>(records.size());
}

}  // namespace rebel::bench
