#include <cctype>

#include "rebel/prompt.hpp"
#include "rebel/rng.hpp"
#include "rebel/text_format.hpp"
#include "rebel/pipeline.hpp"

namespace rebel::pipeline {
namespace {

std::string strip_marker(std::string_view line) {
    auto s = text::trim(line);
    if (!s.empty() && (s.front() == '-' || s.front() == '*' || s.front() == '+')) {
        s.remove_prefix(1);
    } else if (s.starts_with("•")) {
        s.remove_prefix(3);
    } else {
        std::size_t i = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) s.remove_prefix(i + 1);
    }
    return std::string(text::trim(s));
}

std::vector<retrieval::RuleEntry> embed_rules(Objective o, const std::vector<std::string>& texts,
                                              retrieval::Embedder& embedder) {
    std::vector<retrieval::RuleEntry> out;
    for (const auto& t : texts) out.push_back({0, o, t, embedder.embed(t)});
    return out;
}

std::vector<std::string> texts_of(const std::vector<retrieval::RuleEntry>& rules) {
    std::vector<std::string> out;
    for (const auto& r : rules) out.push_back(r.text);
    return out;
}

}  // namespace

void KnowledgeAcquisitionConfig::check() const {
    if (objectives.empty()) throw Error("knowledge acquisition needs at least one objective");
    if (missions_per_objective < 1) throw Error("missions per objective must be at least 1");
    team.check();
}

std::vector<std::string> split_rules(std::string_view response) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= response.size()) {
        auto end = response.find('\n', pos);
        if (end == std::string_view::npos) end = response.size();
        auto rule = strip_marker(response.substr(pos, end - pos));
        if (!rule.empty()) out.push_back(std::move(rule));
        pos = end + 1;
    }
    return out;
}

std::uint64_t mission_seed(std::uint64_t seed, Objective o, std::size_t index) {
    return mix_seed(mix_seed(seed, fnv1a(objective_code(o))), index);
}

RuleGenerationReport generate_rules(const std::vector<Objective>& objectives, llm::Provider& provider,
                                    retrieval::RulesDatabase& rules, retrieval::Embedder& embedder,
                                    const std::string& model) {
    if (objectives.empty()) throw Error("rule generation needs at least one objective");
    RuleGenerationReport report;
    for (const Objective o : objectives) {
        prompt::SpfPrompt p;
        p.goal = prompt::kRuleGenerationGoal;
        p.objectives = {prompt::objective_line(o)};
        std::string response;
        try {
            response = provider.complete({prompt::build_prompt(p), llm::kRuleTemperature, 1024, model});
        } catch (const llm::LlmError& e) {
            report.aborted = true;
            report.error = std::string(objective_code(o)) + ": " + std::string(llm::llm_error_label(e.kind())) +
                           ": " + e.what();
            return report;
        }
        const auto texts = split_rules(response);
        if (texts.empty()) {
            report.warnings.push_back(std::string(objective_code(o)) + ": provider returned no rules");
            continue;
        }
        const auto before = rules.size();
        for (auto entry : embed_rules(o, texts, embedder)) {
            entry.id = rules.store(entry);
            report.stored.push_back(std::move(entry));
        }
        report.added += rules.size() - before;
    }
    return report;
}

PlanAttempt plan_from_model(const std::string& prompt_text, const MissionScenario& scenario,
                            const PreferenceVector& prefs, llm::Provider& provider, const std::string& model,
                            const sim::SimConfig& fallback_model, bool fallback_on_provider_error) {
    PlanAttempt out;
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            const auto reply = provider.complete({prompt_text, llm::kInferenceTemperature, 2048, model});
            out.plan = prompt::parse_ita_plan(reply, scenario);
            return out;
        } catch (const prompt::PlanParseError& e) {
            out.warnings.push_back("attempt " + std::to_string(attempt + 1) + ": " + e.what());
        } catch (const llm::LlmError& e) {
            if (!fallback_on_provider_error) throw;
            out.warnings.push_back("attempt " + std::to_string(attempt + 1) + ": " +
                                   std::string(llm::llm_error_label(e.kind())) + ": " + e.what());
            break;
        }
    }
    out.plan = llm::heuristic_allocate(scenario, prefs, fallback_model);
    out.fallback = true;
    out.warnings.push_back("fell back to the heuristic allocator");
    return out;
}

ExperienceGenerationReport generate_experiences(const KnowledgeAcquisitionConfig& cfg, llm::Provider& provider,
                                                retrieval::RulesDatabase& rules,
                                                retrieval::ExperienceDatabase& experiences,
                                                retrieval::Embedder& embedder, const sim::SimConfig& sim_cfg) {
    cfg.check();
    for (const Objective o : cfg.objectives) {
        if (rules.active(o).empty()) {
            throw Error(std::string("rules database has no rules for ") + std::string(objective_code(o)) +
                        "; run gen-rules first");
        }
    }

    ExperienceGenerationReport report;
    for (const Objective o : cfg.objectives) {
        const auto code = std::string(objective_code(o));
        const auto prefs = PreferenceVector::single(o);
        std::vector<prompt::Exemplar> batch;

        for (std::size_t i = 0; i < cfg.missions_per_objective; ++i) {
            const auto seed = mission_seed(cfg.seed, o, i);
            const auto scenario = bench::random_scenario(cfg.team, seed);

            prompt::SpfPrompt p;
            p.scenario = scenario;
            p.goal = prompt::kAllocationGoal;
            p.objectives = {prompt::objective_line(o)};
            p.rules = texts_of(rules.active(o));

            try {
                auto attempt = plan_from_model(prompt::build_prompt(p), scenario, prefs, provider, cfg.model,
                                               sim_cfg, false);
                for (auto& w : attempt.warnings) report.warnings.push_back(code + " mission " + std::to_string(i) + ": " + w);

                auto mission_cfg = sim_cfg;
                mission_cfg.seed = seed;
                retrieval::ExperienceRecord record;
                try {
                    record.performance = sim::run_mission(scenario, attempt.plan, mission_cfg).performance;
                } catch (const Error& e) {
                    report.warnings.push_back(code + " mission " + std::to_string(i) + " skipped: " + e.what());
                    continue;
                }
                record.scenario = scenario;
                record.plan = attempt.plan;
                record.objective = o;
                record.sections = retrieval::embed_scenario_sections(scenario, embedder);
                record.fallback = attempt.fallback;
                record.id = experiences.store(record);
                if (record.fallback) ++report.fallbacks;
                batch.push_back({record.scenario, record.plan, record.performance});
                report.stored.push_back(std::move(record));
            } catch (const llm::LlmError& e) {
                report.aborted = true;
                report.error = code + " mission " + std::to_string(i) + ": " +
                               std::string(llm::llm_error_label(e.kind())) + ": " + e.what();
                return report;
            }

            const bool last = i + 1 == cfg.missions_per_objective;
            if (batch.empty() || ((i + 1) % cfg.cadence() != 0 && !last)) continue;

            prompt::SpfPrompt refine;
            refine.goal = prompt::kRefinementGoal;
            refine.objectives = {prompt::objective_line(o)};
            refine.rules = texts_of(rules.active(o));
            refine.prior_experience = std::move(batch);
            batch.clear();
            std::string response;
            try {
                response = provider.complete({prompt::build_prompt(refine), llm::kRuleTemperature, 1024, cfg.model});
            } catch (const llm::LlmError& e) {
                report.aborted = true;
                report.error = code + " refinement: " + std::string(llm::llm_error_label(e.kind())) + ": " + e.what();
                return report;
            }
            const auto texts = split_rules(response);
            if (texts.empty()) {
                report.warnings.push_back(code + " refinement returned no rules; keeping the current set");
                continue;
            }
            if (rules.replace_objective(o, embed_rules(o, texts, embedder))) ++report.refinements;
        }
    }
    return report;
}

}  // namespace rebel::pipeline
