// Command-line front end: knowledge acquisition, inference, simulation and
// the experiment harness.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rebel/bench.hpp"
#include "rebel/pipeline.hpp"
#include "rebel/prompt.hpp"
#include "rebel/text_format.hpp"

namespace {

using namespace rebel;

struct Common {
    std::string rules_db = "rules.jsonl";
    std::string exp_db = "experiences.jsonl";
    bool hermetic = false;
    std::string stub_mode = "heuristic";
    std::string endpoint = "http://127.0.0.1:8000";
    std::string model = "gpt-4o-mini";
    std::string embedding_model = "text-embedding-3-small";
    std::string api_key_env = "OPENAI_API_KEY";
    std::string embedder = "hashed";
    double timeout_s = 60.0;
    int retries = 2;
    std::size_t concurrency = 4;
    std::string record;
    std::string replay;
    std::string sim_config;
    std::uint64_t seed = 0;
};

struct Services {
    std::unique_ptr<llm::Provider> base;
    std::unique_ptr<llm::Provider> recorder;
    std::unique_ptr<retrieval::Embedder> embedder;
    sim::SimConfig sim;

    llm::Provider& provider() { return recorder ? *recorder : *base; }
};

llm::ProviderConfig provider_config(const Common& c) {
    llm::ProviderConfig cfg;
    cfg.endpoint = c.endpoint;
    cfg.model = c.model;
    cfg.embedding_model = c.embedding_model;
    cfg.api_key_env = c.api_key_env;
    cfg.timeout_s = c.timeout_s;
    cfg.retries = c.retries;
    cfg.max_concurrency = c.concurrency;
    return cfg;
}

Services make_services(const Common& c) {
    Services s;
    if (!c.sim_config.empty()) s.sim = sim::load_sim_config(c.sim_config);
    if (!c.replay.empty()) {
        s.base = std::make_unique<llm::ReplayProvider>(c.replay);
    } else if (c.hermetic) {
        llm::StubProvider::Mode mode = llm::StubProvider::Mode::Heuristic;
        if (c.stub_mode == "copy") mode = llm::StubProvider::Mode::CopyExemplar;
        else if (c.stub_mode == "prose") mode = llm::StubProvider::Mode::Prose;
        else if (c.stub_mode == "empty") mode = llm::StubProvider::Mode::Empty;
        else if (c.stub_mode != "heuristic") throw Error("unknown stub mode '" + c.stub_mode + "'");
        s.base = std::make_unique<llm::StubProvider>(mode, s.sim);
    } else {
        s.base = std::make_unique<llm::HttpChatProvider>(provider_config(c));
    }
    if (!c.record.empty()) s.recorder = std::make_unique<llm::RecordingProvider>(*s.base, c.record);
    if (c.hermetic || c.embedder == "hashed") {
        s.embedder = std::make_unique<retrieval::HashedEmbedder>();
    } else if (c.embedder == "http") {
        s.embedder = std::make_unique<llm::HttpEmbedder>(provider_config(c));
    } else {
        throw Error("unknown embedder '" + c.embedder + "'");
    }
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::vector<Objective> parse_objectives(const std::string& list) {
    std::vector<Objective> out;
    for (const auto& piece : text::split_top_level(list)) {
        if (!piece.empty()) out.push_back(parse_objective(piece));
    }
    if (out.empty()) throw Error("no objectives given");
    return out;
}

bench::CountRange parse_range(const std::string& s) {
    const auto dash = s.find('-');
    if (dash == std::string::npos) {
        const auto n = std::stoul(s);
        return {n, n};
    }
    return {std::stoul(s.substr(0, dash)), std::stoul(s.substr(dash + 1))};
}

MissionScenario scenario_from_options(const std::string& path, const std::string& team, std::uint64_t seed) {
    if (!path.empty()) return text::parse_scenario(read_file(path));
    const auto parts = text::split_top_level(team);
    if (parts.size() != 3) throw Error("--team expects humans,robots,tasks");
    return bench::random_scenario(
        bench::TeamSpec::fixed(std::stoul(parts[0]), std::stoul(parts[1]), std::stoul(parts[2])), seed);
}

void add_common(CLI::App* app, Common& c) {
    app->add_option("--rules-db", c.rules_db, "Rules database (JSON Lines)");
    app->add_option("--exp-db", c.exp_db, "Experience database (JSON Lines)");
    app->add_flag("--hermetic", c.hermetic, "Use the offline stub provider and hashed embedder");
    app->add_option("--stub-mode", c.stub_mode, "Stub behaviour: heuristic, copy, prose, empty");
    app->add_option("--endpoint", c.endpoint, "OpenAI-compatible base URL");
    app->add_option("--model", c.model, "Chat model name");
    app->add_option("--embedding-model", c.embedding_model, "Embedding model name");
    app->add_option("--api-key-env", c.api_key_env, "Environment variable holding the API key");
    app->add_option("--embedder", c.embedder, "hashed or http");
    app->add_option("--timeout", c.timeout_s, "Request timeout in seconds");
    app->add_option("--retries", c.retries, "Retries for transient provider failures");
    app->add_option("--concurrency", c.concurrency, "Maximum in-flight provider requests");
    app->add_option("--record", c.record, "Append every exchange to this transcript");
    app->add_option("--replay", c.replay, "Answer from a recorded transcript");
    app->add_option("--sim-config", c.sim_config, "Simulator constants (JSON)");
    app->add_option("--seed", c.seed, "Seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rule- and experience-guided initial task allocation for human-robot teams"};
    app.require_subcommand(1);

    Common common;

    auto* gen_rules = app.add_subcommand("gen-rules", "Generate the rules database");
    add_common(gen_rules, common);
    std::string objectives = "TP,MT,HW";
    gen_rules->add_option("--objectives", objectives, "Comma-separated objective codes");

    auto* gen_exp = app.add_subcommand("gen-exp", "Generate the experience database and refine rules");
    add_common(gen_exp, common);
    gen_exp->add_option("--objectives", objectives, "Comma-separated objective codes");
    std::size_t missions = 10, refine_every = 0;
    std::string humans = "1-3", robots = "2-4", tasks = "3-8";
    gen_exp->add_option("--missions", missions, "Missions per objective");
    gen_exp->add_option("--refine-every", refine_every, "Refine rules every N missions (0: once per objective)");
    gen_exp->add_option("--humans", humans, "Human count or range lo-hi");
    gen_exp->add_option("--robots", robots, "Robot count or range lo-hi");
    gen_exp->add_option("--tasks", tasks, "Task count or range lo-hi");

    auto* infer = app.add_subcommand("infer", "Allocate tasks for one mission");
    add_common(infer, common);
    std::string scenario_path, team = "5,7,30", prefs_text = "TP", plan_out, provenance_out;
    std::size_t rules_k = 5, exp_k = 3, exp_m = 2;
    infer->add_option("--scenario", scenario_path, "Scenario text file (otherwise a random team)");
    infer->add_option("--team", team, "Random team size humans,robots,tasks");
    infer->add_option("--prefs", prefs_text, "Preferences, e.g. TP=0.5,MT=0.25,HW=0.25");
    infer->add_option("--rules-k", rules_k, "Rules retrieved");
    infer->add_option("--exp-k", exp_k, "Experiences shortlisted by similarity");
    infer->add_option("--exp-m", exp_m, "Experiences kept after re-ranking");
    infer->add_option("--out", plan_out, "Write the plan here");
    infer->add_option("--provenance", provenance_out, "Write provenance JSON here");

    auto* simulate = app.add_subcommand("simulate", "Run one mission");
    add_common(simulate, common);
    std::string plan_path, trace_out;
    simulate->add_option("--scenario", scenario_path, "Scenario text file")->required();
    simulate->add_option("--plan", plan_path, "Plan text file")->required();
    simulate->add_option("--trace", trace_out, "Write the event trace here");

    auto* bench_cmd = app.add_subcommand("bench", "Run an experiment");
    add_common(bench_cmd, common);
    std::string spec_path, out_dir = "report", mode, methods;
    std::size_t trials = 0;
    bench_cmd->add_option("--spec", spec_path, "Experiment spec (JSON)");
    bench_cmd->add_option("--mode", mode, "SOO, MOO or SA (overrides the spec)");
    bench_cmd->add_option("--methods", methods, "Comma-separated methods (overrides the spec)");
    bench_cmd->add_option("--trials", trials, "Trials per cell (overrides the spec)");
    bench_cmd->add_option("--out-dir", out_dir, "Directory for cells.csv, trials.csv and summary.json");

    CLI11_PARSE(app, argc, argv);

    try {
        auto services = make_services(common);

        if (*gen_rules) {
            retrieval::RulesDatabase rules(common.rules_db);
            const auto report =
                pipeline::generate_rules(parse_objectives(objectives), services.provider(), rules, *services.embedder, common.model);
            for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
            std::cout << report.stored.size() << " rules returned, " << report.added << " new, " << rules.size()
                      << " active\n";
            if (report.aborted) {
                std::cerr << "aborted: " << report.error << "\n";
                return 2;
            }
            return 0;
        }

        if (*gen_exp) {
            retrieval::RulesDatabase rules(common.rules_db);
            retrieval::ExperienceDatabase experiences(common.exp_db);
            pipeline::KnowledgeAcquisitionConfig cfg;
            cfg.objectives = parse_objectives(objectives);
            cfg.missions_per_objective = missions;
            cfg.refine_every = refine_every;
            cfg.team.humans = parse_range(humans);
            cfg.team.robots = parse_range(robots);
            cfg.team.tasks = parse_range(tasks);
            cfg.seed = common.seed;
            cfg.model = common.model;
            const auto report = pipeline::generate_experiences(cfg, services.provider(), rules, experiences,
                                                               *services.embedder, services.sim);
            for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
            std::cout << report.stored.size() << " experiences stored, " << report.fallbacks << " fallbacks, "
                      << report.refinements << " rule sets refined\n";
            if (report.aborted) {
                std::cerr << "aborted: " << report.error << "\n";
                return 2;
            }
            return 0;
        }

        if (*infer) {
            const retrieval::RulesDatabase rules(common.rules_db);
            const retrieval::ExperienceDatabase experiences(common.exp_db);
            const auto scenario = scenario_from_options(scenario_path, team, common.seed);
            pipeline::RetrievalConfig rcfg;
            rcfg.rules_k = rules_k;
            rcfg.experiences_k = exp_k;
            rcfg.experiences_m = exp_m;
            const auto result = pipeline::infer(scenario, PreferenceVector::parse(prefs_text), rules, experiences,
                                                services.provider(), *services.embedder, rcfg, common.model,
                                                services.sim);
            for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
            const auto plan_text = text::render_plan(result.plan);
            if (plan_out.empty()) {
                std::cout << plan_text;
            } else {
                write_file(plan_out, plan_text);
            }
            if (!provenance_out.empty()) {
                const nlohmann::json prov{{"rule_ids", result.rule_ids},
                                          {"experience_ids", result.experience_ids},
                                          {"fallback", result.fallback},
                                          {"warnings", result.warnings},
                                          {"rule_query", result.rule_query},
                                          {"prompt", result.prompt}};
                write_file(provenance_out, prov.dump(2) + "\n");
            }
            return 0;
        }

        if (*simulate) {
            const auto scenario = text::parse_scenario(read_file(scenario_path));
            const auto plan = text::parse_plan(read_file(plan_path), scenario);
            auto cfg = services.sim;
            cfg.seed = common.seed;
            const auto result = sim::run_mission(scenario, plan, cfg);
            std::cout << text::render_performance(result.performance) << "\n";
            if (!trace_out.empty()) write_file(trace_out, sim::render_trace(result.trace));
            return 0;
        }

        if (*bench_cmd) {
            auto spec = spec_path.empty() ? bench::ExperimentSpec{} : bench::load_experiment_spec(spec_path);
            if (!mode.empty()) spec.mode = bench::parse_mode(mode);
            if (!methods.empty()) {
                spec.methods.clear();
                for (const auto& m : text::split_top_level(methods)) spec.methods.push_back(bench::parse_method(m));
            }
            if (trials > 0) spec.trials = trials;
            if (spec_path.empty() || common.seed != 0) spec.seed = common.seed;
            spec.check();

            std::unique_ptr<retrieval::RulesDatabase> rules;
            std::unique_ptr<retrieval::ExperienceDatabase> experiences;
            if (std::find(spec.methods.begin(), spec.methods.end(), bench::Method::Rebel) != spec.methods.end()) {
                rules = std::make_unique<retrieval::RulesDatabase>(common.rules_db);
                experiences = std::make_unique<retrieval::ExperienceDatabase>(common.exp_db);
            }
            bench::ExperimentDeps deps;
            deps.provider = &services.provider();
            deps.embedder = services.embedder.get();
            deps.rules = rules.get();
            deps.experiences = experiences.get();
            deps.sim = services.sim;
            deps.model = common.model;
            const auto report = bench::run_experiment(spec, deps);
            const std::filesystem::path dir(out_dir);
            write_file(dir / "cells.csv", report.cells_csv());
            write_file(dir / "trials.csv", report.trials_csv());
            write_file(dir / "summary.json", report.summary_json());
            std::cout << report.table();
            return report.all_invariants_ok() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
