#include <algorithm>

#include "rebel/retrieval.hpp"

namespace rebel::retrieval {

std::vector<ScoredExperience> rank_experiences(const SectionEmbeddings& query, const PreferenceVector& prefs,
                                               std::span<const ExperienceRecord> records, std::size_t k,
                                               std::size_t m) {
    if (records.empty()) throw Error("experience retrieval over an empty database");
    if (k == 0 || m == 0 || m > k) throw Error("experience retrieval needs 1 <= m <= k");

    std::vector<ScoredExperience> scored;
    scored.reserve(records.size());
    for (const auto& r : records) {
        const double sim = dense_score(query.humans, r.sections.humans) + dense_score(query.robots, r.sections.robots) +
                           dense_score(query.tasks, r.sections.tasks);
        scored.push_back({&r, sim, 0.0});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredExperience& a, const ScoredExperience& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.record->id < b.record->id;
    });
    scored.resize(std::min(k, scored.size()));

    std::vector<PerformanceRecord> batch;
    for (const auto& s : scored) batch.push_back(s.record->performance);
    const auto bounds = NormalizationBounds::empirical(batch);
    for (auto& s : scored) s.aggregate = aggregate_objective(s.record->performance, prefs, bounds);
    std::sort(scored.begin(), scored.end(), [](const ScoredExperience& a, const ScoredExperience& b) {
        if (a.aggregate != b.aggregate) return a.aggregate > b.aggregate;
        return a.record->id < b.record->id;
    });
    scored.resize(std::min(m, scored.size()));
    return scored;
}

std::vector<ExperienceRecord> retrieve_experiences(const MissionScenario& scenario, const PreferenceVector& prefs,
                                                   const ExperienceDatabase& db, std::size_t k, std::size_t m,
                                                   Embedder& embedder) {
    const auto records = db.snapshot();
    const auto query = embed_scenario_sections(scenario, embedder);
    std::vector<ExperienceRecord> out;
    for (const auto& s : rank_experiences(query, prefs, records, k, m)) out.push_back(*s.record);
    return out;
}

}  // namespace rebel::retrieval
