#include <cmath>

#include "rebel/bench.hpp"
#include "rebel/text_format.hpp"

namespace rebel::bench {

const CandidateScore* BruteForceResult::find(const ItaPlan& plan) const {
    for (const auto& c : table) {
        if (c.plan == plan) return &c;
    }
    return nullptr;
}

double search_space_size(const MissionScenario& s) {
    const double per_task = static_cast<double>(s.robots.size()) * (1.0 + 2.0 * static_cast<double>(s.humans.size()));
    return std::pow(per_task, static_cast<double>(s.tasks.size()));
}

BruteForceResult brute_force_optimal(const MissionScenario& input, const PreferenceVector& prefs,
                                     const sim::SimConfig& cfg, const BruteForceOptions& options) {
    if (!is_runnable(input)) throw Error("brute force needs a runnable scenario");
    if (options.samples < 1) throw Error("brute force needs at least one sample per plan");
    const double size = search_space_size(input);
    if (size > options.cap) {
        throw Error("search space of " + text::format_number(size) + " plans exceeds the cap of " +
                    text::format_number(options.cap) + "; use fewer tasks, robots or humans");
    }
    MissionScenario s = input;
    s.canonicalize();
    const auto per_task = task_options(s);

    BruteForceResult result;
    result.seeds = common_seeds(options.seed, options.samples);
    const auto total = static_cast<std::size_t>(size);
    result.table.resize(total);

    // Odometer over tasks, last task fastest.
    std::vector<std::size_t> digits(s.tasks.size(), 0);
    for (std::size_t i = 0; i < total; ++i) {
        auto& c = result.table[i];
        for (std::size_t t = 0; t < s.tasks.size(); ++t) c.plan.assign(s.tasks[t].id, per_task[digits[t]]);
        c.encoding = text::render_plan(c.plan);
        for (std::size_t t = s.tasks.size(); t-- > 0;) {
            if (++digits[t] < per_task.size()) break;
            digits[t] = 0;
        }
    }

    const auto n = static_cast<std::ptrdiff_t>(total);
    if (options.parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            auto& c = result.table[static_cast<std::size_t>(i)];
            c.records = evaluate_plan(s, c.plan, cfg, result.seeds);
        }
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            auto& c = result.table[static_cast<std::size_t>(i)];
            c.records = evaluate_plan(s, c.plan, cfg, result.seeds);
        }
    }

    std::vector<PerformanceRecord> all;
    all.reserve(total * options.samples);
    for (const auto& c : result.table) all.insert(all.end(), c.records.begin(), c.records.end());
    result.bounds = NormalizationBounds::empirical(all);

    const CandidateScore* best = nullptr;
    for (auto& c : result.table) {
        c.mean_j = mean_aggregate(c.records, prefs, result.bounds);
        if (best == nullptr || c.mean_j > best->mean_j || (c.mean_j == best->mean_j && c.encoding < best->encoding)) {
            best = &c;
        }
    }
    result.best = best->plan;
    result.best_j = best->mean_j;
    return result;
}

}  // namespace rebel::bench
