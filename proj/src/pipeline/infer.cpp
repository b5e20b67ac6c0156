#include "rebel/pipeline.hpp"
#include "rebel/prompt.hpp"

namespace rebel::pipeline {

Inference infer(const MissionScenario& scenario, const PreferenceVector& prefs,
                const retrieval::RulesDatabase& rules, const retrieval::ExperienceDatabase& experiences,
                llm::Provider& provider, retrieval::Embedder& embedder, const RetrievalConfig& retrieval_cfg,
                const std::string& model, const sim::SimConfig& fallback_model) {
    if (!is_runnable(scenario)) {
        const auto problems = scenario_problems(scenario);
        throw Error("scenario is not runnable: " + (problems.empty() ? std::string("no robots") : problems.front()));
    }
    Inference out;
    prompt::SpfPrompt p;
    p.scenario = scenario;
    p.goal = prompt::kAllocationGoal;
    p.objectives = prompt::objective_lines(prefs);

    for (std::size_t i = 0; i < p.objectives.size(); ++i) out.rule_query += (i ? "\n" : "") + p.objectives[i];

    if (rules.empty()) {
        out.warnings.push_back("rules database is empty; prompting without rules");
    } else {
        for (const auto& r : retrieval::ensemble_retrieve(out.rule_query, rules, retrieval_cfg.rules_k,
                                                          retrieval_cfg.fusion, retrieval_cfg.bm25, embedder)) {
            out.rule_ids.push_back(r.id);
            p.rules.push_back(r.text);
        }
    }
    if (experiences.empty()) {
        out.warnings.push_back("experience database is empty; prompting without prior experience");
    } else {
        for (const auto& e : retrieval::retrieve_experiences(scenario, prefs, experiences, retrieval_cfg.experiences_k,
                                                             retrieval_cfg.experiences_m, embedder)) {
            out.experience_ids.push_back(e.id);
            p.prior_experience.push_back({e.scenario, e.plan, e.performance});
        }
    }

    out.prompt = prompt::build_prompt(p);
    auto attempt = plan_from_model(out.prompt, scenario, prefs, provider, model, fallback_model, true);
    out.plan = std::move(attempt.plan);
    out.fallback = attempt.fallback;
    for (auto& w : attempt.warnings) out.warnings.push_back(std::move(w));
    return out;
}

}  // namespace rebel::pipeline
