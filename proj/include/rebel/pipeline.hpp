#pragma once

// Knowledge acquisition (rule generation, experience generation with rule
// refinement) and deployment-time inference.

#include <cstdint>
#include <string>
#include <vector>

#include "rebel/core.hpp"
#include "rebel/llm.hpp"
#include "rebel/retrieval.hpp"
#include "rebel/scenario_gen.hpp"
#include "rebel/sim.hpp"

namespace rebel::pipeline {

struct RetrievalConfig {
    std::size_t rules_k = 5;
    std::size_t experiences_k = 3;  // similarity shortlist
    std::size_t experiences_m = 2;  // kept after performance re-ranking
    retrieval::FusionParams fusion;
    retrieval::Bm25Params bm25;
};

struct KnowledgeAcquisitionConfig {
    std::vector<Objective> objectives{kAllObjectives.begin(), kAllObjectives.end()};
    std::size_t missions_per_objective = 10;
    std::size_t refine_every = 0;  // 0 means once per objective, after its last mission
    bench::TeamSpec team{{1, 3}, {2, 4}, {3, 8}};
    std::uint64_t seed = 0;
    std::string model;

    void check() const;
    std::size_t cadence() const { return refine_every == 0 ? missions_per_objective : refine_every; }
};

/// One rule per non-empty line, with bullet or numbering markers removed.
std::vector<std::string> split_rules(std::string_view response);

struct RuleGenerationReport {
    std::vector<retrieval::RuleEntry> stored;  // one per accepted line, with its database id
    std::size_t added = 0;                     // not previously present
    std::vector<std::string> warnings;
    bool aborted = false;
    std::string error;
};

RuleGenerationReport generate_rules(const std::vector<Objective>& objectives, llm::Provider& provider,
                                    retrieval::RulesDatabase& rules, retrieval::Embedder& embedder,
                                    const std::string& model = {});

/// A plan obtained from the model, or from heuristic_allocate after the
/// retry also failed.
struct PlanAttempt {
    ItaPlan plan;
    bool fallback = false;
    std::vector<std::string> warnings;
};

/// Sends `prompt_text`, parses the reply, retries once on ParseFailure or
/// PlanInvalid, then falls back. Provider errors propagate unless
/// `fallback_on_provider_error` is set.
PlanAttempt plan_from_model(const std::string& prompt_text, const MissionScenario& scenario,
                            const PreferenceVector& prefs, llm::Provider& provider, const std::string& model,
                            const sim::SimConfig& fallback_model, bool fallback_on_provider_error);

struct ExperienceGenerationReport {
    std::vector<retrieval::ExperienceRecord> stored;
    std::size_t fallbacks = 0;
    std::size_t refinements = 0;  // rule sets actually changed
    std::vector<std::string> warnings;
    bool aborted = false;
    std::string error;
};

/// Mission i of objective O uses scenario seed mix(seed, O, i). Provider
/// failures abort with the records stored so far.
ExperienceGenerationReport generate_experiences(const KnowledgeAcquisitionConfig& cfg, llm::Provider& provider,
                                                retrieval::RulesDatabase& rules,
                                                retrieval::ExperienceDatabase& experiences,
                                                retrieval::Embedder& embedder, const sim::SimConfig& sim_cfg);

std::uint64_t mission_seed(std::uint64_t seed, Objective o, std::size_t index);

struct Inference {
    ItaPlan plan;
    std::vector<std::uint64_t> rule_ids;
    std::vector<std::uint64_t> experience_ids;
    bool fallback = false;
    std::vector<std::string> warnings;
    std::string rule_query;
    std::string prompt;
};

/// Retrieves rules and exemplars, prompts the model and returns a validated
/// plan. Empty databases drop the matching prompt section with a warning.
Inference infer(const MissionScenario& scenario, const PreferenceVector& prefs,
                const retrieval::RulesDatabase& rules, const retrieval::ExperienceDatabase& experiences,
                llm::Provider& provider, retrieval::Embedder& embedder, const RetrievalConfig& retrieval_cfg = {},
                const std::string& model = {}, const sim::SimConfig& fallback_model = {});

}  // namespace rebel::pipeline
