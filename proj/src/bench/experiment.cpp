#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rebel/bench.hpp"
#include "rebel/rng.hpp"
#include "rebel/text_format.hpp"

namespace rebel::bench {
namespace {

using nlohmann::json;

constexpr double kAlignTolerance = 1e-12;

std::string prefs_label(const PreferenceVector& p) {
    auto s = p.to_string();
    std::replace(s.begin(), s.end(), ',', ';');
    return s;
}

std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

CountRange range_from(const json& j) {
    if (j.is_array()) return {j.at(0).get<std::size_t>(), j.at(1).get<std::size_t>()};
    const auto n = j.get<std::size_t>();
    return {n, n};
}

std::vector<double> metric_column(const std::vector<TrialOutcome>& trials, Objective o, bool adapted) {
    std::vector<double> out;
    for (const auto& t : trials) {
        if (adapted) {
            if (t.adapted) out.push_back(t.adapted->metric(o));
        } else {
            out.push_back(t.performance.metric(o));
        }
    }
    return out;
}

struct Planner {
    const ExperimentSpec& spec;
    const ExperimentDeps& deps;
    const retrieval::RulesDatabase empty_rules;
    const retrieval::ExperienceDatabase empty_experiences;

    ItaPlan plan(Method m, const MissionScenario& s, const PreferenceVector& prefs, std::uint64_t seed,
                 bool& fallback) const {
        switch (m) {
            case Method::Rebel:
            case Method::ZeroShot: {
                const bool with_knowledge = m == Method::Rebel;
                auto r = pipeline::infer(s, prefs, with_knowledge ? *deps.rules : empty_rules,
                                         with_knowledge ? *deps.experiences : empty_experiences, *deps.provider,
                                         *deps.embedder, deps.retrieval, deps.model, deps.sim);
                fallback = r.fallback;
                return std::move(r.plan);
            }
            case Method::Heuristic: return llm::heuristic_allocate(s, prefs, deps.sim);
            case Method::Random: return random_allocate(s, mix_seed(seed, 2));
            case Method::BruteForce:
                return brute_force_optimal(s, prefs, deps.sim,
                                           {spec.brute_force_samples, mix_seed(seed, 1), spec.brute_force_cap, false})
                    .best;
        }
        throw Error("unknown method");
    }

    TrialOutcome trial(Method m, const PreferenceVector& prefs, std::size_t index) const {
        const auto seed = trial_seed(spec.seed, index);
        const auto scenario = random_scenario(spec.team, seed);
        auto sim_cfg = deps.sim;
        sim_cfg.seed = mix_seed(seed, 1);

        TrialOutcome out;
        ItaPlan plan;
        if (m == Method::BruteForce) {
            const auto bf = brute_force_optimal(scenario, prefs, deps.sim,
                                                {spec.brute_force_samples, sim_cfg.seed, spec.brute_force_cap, false});
            plan = bf.best;
            // The other baselines are candidates in the same table, scored on the same samples.
            for (const auto& other : {llm::heuristic_allocate(scenario, prefs, deps.sim),
                                      random_allocate(scenario, mix_seed(seed, 2))}) {
                const auto* c = bf.find(other);
                if (c == nullptr || c->mean_j > bf.best_j) out.dominance_ok = false;
            }
        } else {
            plan = this->plan(m, scenario, prefs, seed, out.fallback);
        }
        out.valid = validate_plan(plan, scenario).ok();
        if (out.valid) out.performance = sim::run_mission(scenario, plan, sim_cfg).performance;

        if (spec.mode == Mode::SituationalAwareness && can_replan(m)) {
            const auto change = random_removal(scenario, spec.remove_agents, mix_seed(seed, 3));
            const auto changed = apply_composition_change(scenario, plan, change);
            bool ignored = false;
            const auto replanned = this->plan(m, changed.scenario, prefs, seed, ignored);
            out.adapted_valid = validate_plan(replanned, changed.scenario).ok();
            if (out.adapted_valid) out.adapted = sim::run_mission(changed.scenario, replanned, sim_cfg).performance;
        }
        return out;
    }
};

}  // namespace

std::string_view mode_label(Mode m) {
    switch (m) {
        case Mode::SOO: return "SOO";
        case Mode::MOO: return "MOO";
        case Mode::SituationalAwareness: return "SA";
    }
    return "?";
}

Mode parse_mode(std::string_view text) {
    if (text == "SOO" || text == "soo") return Mode::SOO;
    if (text == "MOO" || text == "moo") return Mode::MOO;
    if (text == "SA" || text == "sa" || text == "SituationalAwareness" || text == "situational_awareness") {
        return Mode::SituationalAwareness;
    }
    throw Error("unknown experiment mode '" + std::string(text) + "'");
}

std::string_view method_label(Method m) {
    switch (m) {
        case Method::Rebel: return "rebel";
        case Method::ZeroShot: return "zero_shot";
        case Method::Heuristic: return "heuristic";
        case Method::Random: return "random";
        case Method::BruteForce: return "brute_force";
    }
    return "?";
}

Method parse_method(std::string_view text) {
    for (auto m : {Method::Rebel, Method::ZeroShot, Method::Heuristic, Method::Random, Method::BruteForce}) {
        if (method_label(m) == text) return m;
    }
    throw Error("unknown method '" + std::string(text) + "'");
}

bool can_replan(Method m) { return m == Method::Rebel || m == Method::ZeroShot; }

std::vector<PreferenceVector> default_preferences(Mode m) {
    std::vector<PreferenceVector> out;
    for (const auto o : kAllObjectives) {
        if (m == Mode::MOO) {
            std::vector<std::pair<Objective, double>> w;
            for (const auto other : kAllObjectives) w.emplace_back(other, other == o ? 0.5 : 0.25);
            out.emplace_back(std::move(w));
        } else {
            out.push_back(PreferenceVector::single(o));
        }
    }
    return out;
}

void ExperimentSpec::check() const {
    if (trials < 1) throw Error("experiment needs at least one trial per cell");
    if (methods.empty()) throw Error("experiment needs at least one method");
    team.check();
    for (const auto& p : preferences) {
        if (p.empty()) throw Error("empty preference vector in experiment spec");
    }
    if (mode == Mode::SituationalAwareness) {
        if (remove_agents < 1) throw Error("situational awareness needs at least one agent removed");
        if (remove_agents >= team.humans.lo + team.robots.lo) {
            throw Error("cannot remove that many agents and keep a robot");
        }
    }
    if (std::find(methods.begin(), methods.end(), Method::BruteForce) != methods.end()) {
        MissionScenario largest;
        largest.humans.resize(team.humans.hi);
        largest.robots.resize(team.robots.hi);
        largest.tasks.resize(team.tasks.hi);
        if (search_space_size(largest) > brute_force_cap) {
            throw Error("brute_force search space exceeds the cap for this team size; use a smaller team");
        }
        if (brute_force_samples < 1) throw Error("brute_force needs at least one sample");
    }
}

std::vector<PreferenceVector> ExperimentSpec::cells() const {
    return preferences.empty() ? default_preferences(mode) : preferences;
}

ExperimentSpec experiment_spec_from_json(std::string_view json_text) {
    ExperimentSpec spec;
    try {
        const auto j = json::parse(json_text);
        if (j.contains("mode")) spec.mode = parse_mode(j.at("mode").get<std::string>());
        if (j.contains("team")) {
            const auto& t = j.at("team");
            if (t.contains("humans")) spec.team.humans = range_from(t.at("humans"));
            if (t.contains("robots")) spec.team.robots = range_from(t.at("robots"));
            if (t.contains("tasks")) spec.team.tasks = range_from(t.at("tasks"));
            if (t.contains("arena_side")) spec.team.arena_side = t.at("arena_side").get<double>();
            if (t.contains("speed")) {
                spec.team.speed_min = t.at("speed").at(0).get<int>();
                spec.team.speed_max = t.at("speed").at(1).get<int>();
            }
        }
        if (j.contains("trials")) spec.trials = j.at("trials").get<std::size_t>();
        if (j.contains("preferences")) {
            for (const auto& p : j.at("preferences")) spec.preferences.push_back(PreferenceVector::parse(p.get<std::string>()));
        }
        if (j.contains("methods")) {
            spec.methods.clear();
            for (const auto& m : j.at("methods")) spec.methods.push_back(parse_method(m.get<std::string>()));
        }
        if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("composition")) spec.remove_agents = j.at("composition").at("remove").get<std::size_t>();
        if (j.contains("brute_force")) {
            const auto& b = j.at("brute_force");
            if (b.contains("samples")) spec.brute_force_samples = b.at("samples").get<std::size_t>();
            if (b.contains("cap")) spec.brute_force_cap = b.at("cap").get<double>();
        }
        if (j.contains("workers")) spec.workers = j.at("workers").get<std::size_t>();
    } catch (const json::exception& e) {
        throw Error(std::string("invalid experiment spec: ") + e.what());
    }
    spec.check();
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read experiment spec " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return experiment_spec_from_json(ss.str());
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) { return mix_seed(seed, 0x7E57ULL + trial); }

ExperimentReport run_experiment(const ExperimentSpec& spec, const ExperimentDeps& deps) {
    spec.check();
    const bool needs_provider = std::any_of(spec.methods.begin(), spec.methods.end(), can_replan);
    if (needs_provider && (deps.provider == nullptr || deps.embedder == nullptr)) {
        throw Error("rebel and zero_shot need a provider and an embedder");
    }
    if (std::find(spec.methods.begin(), spec.methods.end(), Method::Rebel) != spec.methods.end()) {
        if (deps.rules == nullptr || deps.rules->empty() || deps.experiences == nullptr || deps.experiences->empty()) {
            throw Error("the rebel method needs populated databases; run `rebel gen-rules` then `rebel gen-exp` first");
        }
    }

    ExperimentReport report;
    report.spec = spec;
    const auto prefs_list = spec.cells();
    Planner planner{spec, deps, {}, {}};

    for (const auto m : spec.methods) {
        const auto start = std::chrono::steady_clock::now();
        for (const auto& prefs : prefs_list) {
            CellReport cell;
            cell.method = m;
            cell.prefs = prefs;
            cell.priority = prefs.dominant();
            cell.trials = run_trials(spec.trials, [&](std::size_t i) { return planner.trial(m, prefs, i); },
                                     spec.workers);
            report.cells.push_back(std::move(cell));
        }
        report.runtime_s.emplace_back(
            m, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }

    // Per-cell statistics.
    for (auto& cell : report.cells) {
        const auto a = metric_column(cell.trials, Objective::TaskPerformance, false);
        const auto t = metric_column(cell.trials, Objective::MissionTime, false);
        const auto u = metric_column(cell.trials, Objective::HumanWorkload, false);
        cell.accuracy = summarize(a);
        cell.time = summarize(t);
        cell.utilization = summarize(u);
        std::size_t fallbacks = 0;
        for (const auto& tr : cell.trials) {
            fallbacks += tr.fallback ? 1 : 0;
            cell.invalid_plans += tr.valid ? 0 : 1;
        }
        cell.fallback_rate = static_cast<double>(fallbacks) / static_cast<double>(cell.trials.size());

        if (spec.mode == Mode::SituationalAwareness) {
            if (!can_replan(cell.method)) {
                cell.not_applicable = true;
            } else {
                for (const auto& tr : cell.trials) cell.invalid_replans += tr.adapted_valid ? 0 : 1;
                const auto aa = metric_column(cell.trials, Objective::TaskPerformance, true);
                cell.adapted_accuracy = summarize(aa);
                cell.adapted_time = summarize(metric_column(cell.trials, Objective::MissionTime, true));
                cell.adapted_utilization = summarize(metric_column(cell.trials, Objective::HumanWorkload, true));
                if (cell.accuracy.mean > 0.0) cell.degradation = 1.0 - cell.adapted_accuracy->mean / cell.accuracy.mean;
            }
        }
    }

    // Per-trial J, bounds over every trial in the same preference column.
    for (const auto& prefs : prefs_list) {
        std::vector<PerformanceRecord> column;
        for (const auto& cell : report.cells) {
            if (!(cell.prefs == prefs)) continue;
            for (const auto& tr : cell.trials) column.push_back(tr.performance);
        }
        const auto bounds = NormalizationBounds::empirical(column);
        for (auto& cell : report.cells) {
            if (!(cell.prefs == prefs)) continue;
            for (const auto& tr : cell.trials) cell.aggregate.push_back(aggregate_objective(tr.performance, prefs, bounds));
            cell.j = summarize(cell.aggregate);
        }
    }

    // Normalized alignment: each objective's cell means min-max scaled over the method's cells.
    for (const auto m : spec.methods) {
        std::vector<PerformanceRecord> means;
        for (const auto& cell : report.cells) {
            if (cell.method == m) means.push_back({cell.accuracy.mean, cell.time.mean, cell.utilization.mean});
        }
        const auto bounds = NormalizationBounds::empirical(means);
        for (auto& cell : report.cells) {
            if (cell.method != m) continue;
            const PerformanceRecord mean{cell.accuracy.mean, cell.time.mean, cell.utilization.mean};
            for (const auto o : kAllObjectives) {
                cell.normalized[static_cast<std::size_t>(o)] = normalize_objective(mean.metric(o), *bounds.find(o));
            }
            if (cell.priority) {
                const double best = *std::max_element(cell.normalized.begin(), cell.normalized.end());
                cell.aligned = cell.normalized[static_cast<std::size_t>(*cell.priority)] >= best - kAlignTolerance;
            }
        }
    }

    // Method-vs-random Welch tests on the prioritized metric.
    for (auto& cell : report.cells) {
        if (cell.method == Method::Random || !cell.priority || spec.trials < 2) continue;
        const auto* random = report.find(Method::Random, cell.prefs);
        if (random == nullptr) continue;
        cell.vs_random = welch_test(metric_column(cell.trials, *cell.priority, false),
                                    metric_column(random->trials, *cell.priority, false));
    }

    // Invariants.
    auto check = [&](std::string name, bool ok, std::string detail) {
        report.invariants.push_back({std::move(name), ok, std::move(detail)});
    };
    {
        bool ok = report.cells.size() == spec.methods.size() * prefs_list.size();
        for (const auto& c : report.cells) ok = ok && c.trials.size() == spec.trials;
        check("cell_counts", ok, std::to_string(report.cells.size()) + " cells of " + std::to_string(spec.trials) + " trials");
    }
    {
        const double cap = deps.sim.points_per_correct * static_cast<double>(spec.team.tasks.hi);
        bool acc = true, util = true;
        for (const auto& c : report.cells) {
            acc = acc && c.accuracy.mean <= cap;
            for (const auto& tr : c.trials) {
                acc = acc && tr.performance.accuracy_points <= cap;
                util = util && tr.performance.human_utilization >= 0.0 && tr.performance.human_utilization <= 1.0;
                if (tr.adapted) {
                    acc = acc && tr.adapted->accuracy_points <= cap;
                    util = util && tr.adapted->human_utilization >= 0.0 && tr.adapted->human_utilization <= 1.0;
                }
            }
        }
        check("accuracy_bound", acc, "A_m <= " + text::format_number(cap) + " points");
        check("utilization_range", util, "U_h in [0, 1]");
    }
    {
        std::size_t invalid = 0;
        for (const auto& c : report.cells) invalid += c.invalid_plans;
        check("plans_validate", invalid == 0, std::to_string(invalid) + " invalid plans");
    }
    {
        bool ok = true;
        for (const auto m : spec.methods) {
            for (const auto o : kAllObjectives) {
                double lo = 2.0, hi = -1.0;
                for (const auto& c : report.cells) {
                    if (c.method != m) continue;
                    const double v = c.normalized[static_cast<std::size_t>(o)];
                    ok = ok && v >= 0.0 && v <= 1.0;
                    lo = std::min(lo, v), hi = std::max(hi, v);
                }
                // A constant column sits at 0.5 throughout (up to the rounding of
                // the widened bounds); otherwise both ends are reached.
                const bool constant = std::fabs(lo - 0.5) <= 1e-12 && std::fabs(hi - 0.5) <= 1e-12;
                ok = ok && (constant || (lo == 0.0 && hi == 1.0));
            }
        }
        check("normalized_range", ok, "per-method columns span [0, 1]");
    }
    if (std::find(spec.methods.begin(), spec.methods.end(), Method::BruteForce) != spec.methods.end()) {
        bool ok = true;
        for (const auto& c : report.cells) {
            for (const auto& tr : c.trials) ok = ok && tr.dominance_ok;
        }
        check("brute_force_dominance", ok, "optimal J >= heuristic and random J on common samples");
    }
    if (spec.mode == Mode::SituationalAwareness) {
        std::size_t invalid = 0;
        for (const auto& c : report.cells) invalid += c.invalid_replans;
        check("replans_validate", invalid == 0, std::to_string(invalid) + " invalid re-plans");
    }
    return report;
}

bool ExperimentReport::all_invariants_ok() const {
    return std::all_of(invariants.begin(), invariants.end(), [](const InvariantCheck& c) { return c.ok; });
}

const CellReport* ExperimentReport::find(Method m, const PreferenceVector& prefs) const {
    for (const auto& c : cells) {
        if (c.method == m && c.prefs == prefs) return &c;
    }
    return nullptr;
}

std::string ExperimentReport::cells_csv() const {
    std::string out =
        "mode,method,preferences,trials,A_m_points_mean,A_m_points_std,T_m_s_mean,T_m_s_std,U_h_mean,U_h_std,"
        "J_mean,J_std,norm_TP,norm_MT,norm_HW,priority,aligned,p_vs_random,fallback_rate,invalid_plans,"
        "adapted_A_m_points_mean,adapted_T_m_s_mean,adapted_U_h_mean,degradation\n";
    auto num = [](double v) { return text::format_number(v); };
    for (const auto& c : cells) {
        out += std::string(mode_label(spec.mode)) + "," + std::string(method_label(c.method)) + "," +
               prefs_label(c.prefs) + "," + std::to_string(c.trials.size()) + "," + num(c.accuracy.mean) + "," +
               num(c.accuracy.stddev) + "," + num(c.time.mean) + "," + num(c.time.stddev) + "," +
               num(c.utilization.mean) + "," + num(c.utilization.stddev) + "," + num(c.j.mean) + "," +
               num(c.j.stddev) + "," + num(c.normalized[0]) + "," + num(c.normalized[1]) + "," +
               num(c.normalized[2]) + "," + (c.priority ? std::string(objective_code(*c.priority)) : "") + "," +
               (c.priority ? (c.aligned ? "1" : "0") : "") + "," + (c.vs_random ? num(c.vs_random->p) : "") + "," +
               num(c.fallback_rate) + "," + std::to_string(c.invalid_plans);
        if (spec.mode != Mode::SituationalAwareness) {
            out += ",,,,\n";
        } else if (c.not_applicable) {
            out += ",N/A,N/A,N/A,N/A\n";
        } else {
            out += "," + num(c.adapted_accuracy->mean) + "," + num(c.adapted_time->mean) + "," +
                   num(c.adapted_utilization->mean) + "," + (c.degradation ? num(*c.degradation) : "") + "\n";
        }
    }
    return out;
}

std::string ExperimentReport::trials_csv() const {
    std::string out = "method,preferences,trial,A_m_points,T_m_s,U_h,J,valid,fallback,adapted_A_m_points,adapted_T_m_s,adapted_U_h\n";
    for (const auto& c : cells) {
        for (std::size_t i = 0; i < c.trials.size(); ++i) {
            const auto& t = c.trials[i];
            out += std::string(method_label(c.method)) + "," + prefs_label(c.prefs) + "," + std::to_string(i) + "," +
                   text::format_number(t.performance.accuracy_points) + "," +
                   text::format_number(t.performance.mission_seconds) + "," +
                   text::format_number(t.performance.human_utilization) + "," + text::format_number(c.aggregate[i]) +
                   "," + (t.valid ? "1" : "0") + "," + (t.fallback ? "1" : "0");
            if (t.adapted) {
                out += "," + text::format_number(t.adapted->accuracy_points) + "," +
                       text::format_number(t.adapted->mission_seconds) + "," +
                       text::format_number(t.adapted->human_utilization) + "\n";
            } else {
                const bool na = spec.mode == Mode::SituationalAwareness && c.not_applicable;
                out += na ? ",N/A,N/A,N/A\n" : ",,,\n";
            }
        }
    }
    return out;
}

std::string ExperimentReport::summary_json() const {
    json j;
    j["mode"] = std::string(mode_label(spec.mode));
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    j["team"] = {{"humans", {spec.team.humans.lo, spec.team.humans.hi}},
                 {"robots", {spec.team.robots.lo, spec.team.robots.hi}},
                 {"tasks", {spec.team.tasks.lo, spec.team.tasks.hi}}};
    j["accuracy_unit"] = "points";
    j["cells"] = json::array();
    for (const auto& c : cells) {
        json cell{{"method", std::string(method_label(c.method))},
                  {"preferences", c.prefs.to_string()},
                  {"A_m_points", {{"mean", c.accuracy.mean}, {"std", c.accuracy.stddev}}},
                  {"T_m_s", {{"mean", c.time.mean}, {"std", c.time.stddev}}},
                  {"U_h", {{"mean", c.utilization.mean}, {"std", c.utilization.stddev}}},
                  {"J", {{"mean", c.j.mean}, {"std", c.j.stddev}}},
                  {"normalized", {{"TP", c.normalized[0]}, {"MT", c.normalized[1]}, {"HW", c.normalized[2]}}},
                  {"fallback_rate", c.fallback_rate},
                  {"invalid_plans", c.invalid_plans}};
        if (c.priority) {
            cell["priority"] = std::string(objective_code(*c.priority));
            cell["aligned"] = c.aligned;
        }
        if (c.vs_random) cell["welch_vs_random"] = {{"t", c.vs_random->t}, {"df", c.vs_random->df}, {"p", c.vs_random->p}};
        if (spec.mode == Mode::SituationalAwareness) {
            if (c.not_applicable) {
                cell["adapted"] = "N/A";
            } else {
                cell["adapted"] = {{"A_m_points", c.adapted_accuracy->mean},
                                   {"T_m_s", c.adapted_time->mean},
                                   {"U_h", c.adapted_utilization->mean},
                                   {"invalid_replans", c.invalid_replans}};
                if (c.degradation) cell["adapted"]["degradation"] = *c.degradation;
            }
        }
        j["cells"].push_back(std::move(cell));
    }
    j["invariants"] = json::array();
    for (const auto& inv : invariants) j["invariants"].push_back({{"name", inv.name}, {"ok", inv.ok}, {"detail", inv.detail}});
    j["all_invariants_ok"] = all_invariants_ok();
    return j.dump(2) + "\n";
}

std::string ExperimentReport::table() const {
    std::ostringstream os;
    os << "mode " << mode_label(spec.mode) << ", " << spec.trials << " trials per cell, A_m in points\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %-22s %16s %18s %14s %6s %6s %6s %4s %8s\n", "method", "preferences",
                  "A_m", "T_m (s)", "U_h", "nTP", "nMT", "nHW", "ok", "p(rand)");
    os << line;
    for (const auto& c : cells) {
        const auto pm = [](const Summary& s, int d) { return fixed(s.mean, d) + "±" + fixed(s.stddev, d); };
        std::snprintf(line, sizeof line, "%-12s %-22s %16s %18s %14s %6s %6s %6s %4s %8s\n",
                      std::string(method_label(c.method)).c_str(), c.prefs.to_string().c_str(),
                      pm(c.accuracy, 1).c_str(), pm(c.time, 1).c_str(), pm(c.utilization, 3).c_str(),
                      fixed(c.normalized[0], 2).c_str(), fixed(c.normalized[1], 2).c_str(),
                      fixed(c.normalized[2], 2).c_str(), c.priority ? (c.aligned ? "[x]" : "[ ]") : "-",
                      c.vs_random ? fixed(c.vs_random->p, 4).c_str() : "-");
        os << line;
        if (spec.mode == Mode::SituationalAwareness) {
            if (c.not_applicable) {
                os << "    after composition change: N/A (method cannot re-plan)\n";
            } else {
                os << "    after composition change: A_m " << fixed(c.adapted_accuracy->mean, 1) << ", T_m "
                   << fixed(c.adapted_time->mean, 1) << ", U_h " << fixed(c.adapted_utilization->mean, 3)
                   << ", degradation " << (c.degradation ? fixed(100.0 * *c.degradation, 1) + "%" : "-") << "\n";
            }
        }
    }
    for (const auto& [m, secs] : runtime_s) os << "runtime " << method_label(m) << ": " << fixed(secs, 2) << " s\n";
    for (const auto& inv : invariants) os << (inv.ok ? "ok   " : "FAIL ") << inv.name << ": " << inv.detail << "\n";
    return os.str();
}

}  // namespace rebel::bench
