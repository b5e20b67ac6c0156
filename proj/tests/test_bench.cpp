#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "rebel/bench.hpp"
#include "rebel/rng.hpp"
#include "rebel/text_format.hpp"

using namespace rebel;
using namespace rebel::bench;

namespace {

MissionScenario micro(std::uint64_t seed) { return random_scenario(TeamSpec::fixed(2, 2, 2), seed); }

ExperimentSpec small_spec(Mode mode, std::size_t trials) {
    ExperimentSpec spec;
    spec.mode = mode;
    spec.trials = trials;
    spec.team = TeamSpec::fixed(3, 4, 12);
    spec.seed = 5;
    return spec;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("random scenarios: determinism, sizes, distinctness") {
    CHECK(random_scenario(TeamSpec{}, 7) == random_scenario(TeamSpec{}, 7));
    const auto s = random_scenario(TeamSpec::fixed(5, 7, 30), 1);
    CHECK(s.humans.size() == 5);
    CHECK(s.robots.size() == 7);
    CHECK(s.tasks.size() == 30);
    CHECK(is_runnable(s));
    std::set<std::string> seen;
    for (std::uint64_t seed = 0; seed < 100; ++seed) seen.insert(text::render_scenario(random_scenario(TeamSpec{}, seed)));
    CHECK(seen.size() == 100);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto r = random_scenario(TeamSpec{{0, 3}, {1, 4}, {2, 5}}, seed);
        CHECK(r.humans.size() <= 3);
        CHECK(r.robots.size() >= 1);
        CHECK(r.tasks.size() >= 2);
        CHECK(scenario_problems(r).empty());
    }
    TeamSpec bad;
    bad.robots = {0, 0};
    CHECK_THROWS_AS(random_scenario(bad, 0), Error);
}

TEST_CASE("task options") {
    const auto s = fixtures::paper_scenario();
    const auto opts = task_options(s);
    CHECK(opts.size() == 2 * (1 + 2 * 2));
    CHECK(opts[0].traveler == "UAV_0");
    CHECK_FALSE(opts[0].analyst.has_value());
    CHECK(opts[1].analyst == std::optional<std::string>("H_0"));
    CHECK_FALSE(opts[1].operator_.has_value());
    CHECK(opts[3].operator_ == std::optional<std::string>("H_0"));
}

TEST_CASE("random allocation") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = random_scenario(TeamSpec{{0, 5}, {1, 7}, {0, 30}}, seed);
        const auto plan = random_allocate(s, seed);
        CHECK(validate_plan(plan, s).ok());
        CHECK(random_allocate(s, seed) == plan);
    }
    MissionScenario one;
    one.robots = {{"UGV_0", RobotKind::UGV, 5.0, Tier::Med}};
    one.tasks = {{"T_0", {1, 1}, Tier::Med}};
    CHECK(random_allocate(one, 3).roles("T_0")->traveler == "UGV_0");
}

TEST_CASE("brute force picks the faster robot for mission time") {
    MissionScenario s;
    s.robots = {{"UAV_0", RobotKind::UAV, 13.0, Tier::Med}, {"UGV_0", RobotKind::UGV, 6.0, Tier::Med}};
    s.tasks = {{"T_0", {300.0, 1700.0}, Tier::Med}};
    const auto r = brute_force_optimal(s, PreferenceVector::single(Objective::MissionTime), {});
    CHECK(r.table.size() == 2);
    CHECK(r.best.roles("T_0")->traveler == "UAV_0");
    CHECK(r.best_j == 1.0);
}

TEST_CASE("brute force under workload priority is all-autonomous") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = micro(seed);
        const auto r = brute_force_optimal(s, PreferenceVector::single(Objective::HumanWorkload), {});
        for (const auto& [task, entries] : r.best.assignments) {
            CHECK(entries.size() == 1);
            CHECK(entries[0].pattern.kind == CollaborationPattern::Kind::RobotAutonomous);
        }
    }
}

TEST_CASE("brute force table matches an independent re-enumeration") {
    const auto s = micro(11);
    const auto prefs = PreferenceVector::parse("TP=0.5,MT=0.25,HW=0.25");
    sim::SimConfig cfg;
    BruteForceOptions opt;
    opt.samples = 6;
    opt.seed = 99;
    const auto r = brute_force_optimal(s, prefs, cfg, opt);
    CHECK(search_space_size(s) == 100.0);
    REQUIRE(r.table.size() == 100);

    // Rebuild every role set by hand.
    std::vector<TaskRoles> roles;
    for (const auto& robot : s.robots) {
        roles.push_back({robot.id, std::nullopt, std::nullopt});
        for (const auto& h : s.humans) roles.push_back({robot.id, std::nullopt, h.id});
        for (const auto& h : s.humans) roles.push_back({robot.id, h.id, h.id});
    }
    const auto seeds = common_seeds(opt.seed, opt.samples);
    std::vector<ItaPlan> plans;
    std::vector<std::vector<PerformanceRecord>> records;
    std::vector<PerformanceRecord> everything;
    for (const auto& a : roles) {
        for (const auto& b : roles) {
            ItaPlan p;
            p.assign(s.tasks[0].id, a);
            p.assign(s.tasks[1].id, b);
            std::vector<PerformanceRecord> recs;
            for (auto seed : seeds) {
                auto c = cfg;
                c.seed = seed;
                recs.push_back(sim::run_mission(s, p, c).performance);
            }
            everything.insert(everything.end(), recs.begin(), recs.end());
            plans.push_back(p);
            records.push_back(recs);
        }
    }
    const auto bounds = NormalizationBounds::empirical(everything);
    double best = -1;
    std::string best_encoding;
    for (std::size_t i = 0; i < plans.size(); ++i) {
        double j = 0;
        for (const auto& rec : records[i]) j += aggregate_objective(rec, prefs, bounds);
        j /= static_cast<double>(records[i].size());
        const auto* entry = r.find(plans[i]);
        REQUIRE(entry != nullptr);
        CHECK(std::fabs(entry->mean_j - j) <= 1e-12);
        const auto enc = text::render_plan(plans[i]);
        if (j > best + 1e-15 || (std::fabs(j - best) <= 1e-15 && enc < best_encoding)) {
            best = j;
            best_encoding = enc;
        }
    }
    CHECK(text::render_plan(r.best) == best_encoding);
    CHECK(std::fabs(r.best_j - best) <= 1e-12);
}

TEST_CASE("brute force dominates the baselines on shared random numbers") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto s = micro(seed);
        for (const auto o : kAllObjectives) {
            const auto prefs = PreferenceVector::single(o);
            BruteForceOptions opt;
            opt.seed = seed;
            const auto r = brute_force_optimal(s, prefs, {}, opt);
            CHECK(r.find(llm::heuristic_allocate(s, prefs))->mean_j <= r.best_j);
            CHECK(r.find(random_allocate(s, seed))->mean_j <= r.best_j);
        }
    }
}

TEST_CASE("brute force cap and parallel agreement") {
    const auto big = random_scenario(TeamSpec::fixed(5, 7, 30), 1);
    CHECK_THROWS_AS(brute_force_optimal(big, PreferenceVector::single(Objective::MissionTime), {}), Error);
    BruteForceOptions tight;
    tight.cap = 50;
    CHECK_THROWS_AS(brute_force_optimal(micro(0), PreferenceVector::single(Objective::MissionTime), {}, tight), Error);

    const auto s = micro(3);
    const auto prefs = PreferenceVector::parse("TP=0.25,MT=0.5,HW=0.25");
    BruteForceOptions par, ser;
    ser.parallel = false;
    const auto a = brute_force_optimal(s, prefs, {}, par);
    const auto b = brute_force_optimal(s, prefs, {}, ser);
    CHECK(a.best == b.best);
    CHECK(a.best_j == b.best_j);
    REQUIRE(a.table.size() == b.table.size());
    for (std::size_t i = 0; i < a.table.size(); ++i) {
        CHECK(a.table[i].encoding == b.table[i].encoding);
        CHECK(a.table[i].mean_j == b.table[i].mean_j);
    }
}

TEST_CASE("composition changes") {
    const auto s = fixtures::paper_scenario();
    const auto plan = fixtures::paper_plan();
    const auto removed = apply_composition_change(s, plan, {{"H_1"}, {}, {}});
    CHECK(removed.orphaned_tasks == std::vector<std::string>{"T_0"});
    CHECK(removed.scenario.humans.size() == 1);

    const auto added = apply_composition_change(s, plan, {{}, {}, {{"UGV_1", RobotKind::UGV, 7.0, Tier::High}}});
    CHECK(added.scenario.robots.size() == 3);
    CHECK(added.orphaned_tasks.empty());
    CHECK(validate_plan(plan, added.scenario).ok());

    auto with_idle = s;
    with_idle.humans.push_back({"H_2", Tier::Med, Tier::Med});
    CHECK(apply_composition_change(with_idle, plan, {{"H_2"}, {}, {}}).orphaned_tasks.empty());

    CHECK_THROWS_AS(apply_composition_change(s, plan, {{"UAV_0", "UGV_0"}, {}, {}}), Error);
    CHECK_THROWS_AS(apply_composition_change(s, plan, {{"H_9"}, {}, {}}), Error);
    CHECK_THROWS_AS(apply_composition_change(s, plan, {{}, {{"H_0", Tier::Med, Tier::Med}}, {}}), Error);
}

TEST_CASE("random removal keeps a robot") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto s = random_scenario(TeamSpec{{0, 2}, {1, 3}, {1, 3}}, seed);
        const auto total = s.humans.size() + s.robots.size();
        if (total < 3) continue;
        const auto change = random_removal(s, 2, seed);
        CHECK(change.remove.size() == 2);
        CHECK(random_removal(s, 2, seed).remove == change.remove);
        const auto out = apply_composition_change(s, random_allocate(s, seed), change);
        CHECK_FALSE(out.scenario.robots.empty());
    }
}

TEST_CASE("summaries and the Welch test") {
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> b{2.5, 3.5, 4.5, 6, 7.5, 9};
    const auto sa = summarize(a);
    CHECK(sa.mean == 3.0);
    CHECK(sa.stddev == doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
    CHECK(sa.n == 5);
    CHECK(summarize(std::vector<double>{4.0}).stddev == 0.0);
    // Frozen from scipy.stats.ttest_ind(a, b, equal_var=False).
    const auto w = welch_test(a, b);
    CHECK(w.t == doctest::Approx(-2.029994857352875).epsilon(1e-12));
    CHECK(w.df == doctest::Approx(8.544160132067685).epsilon(1e-12));
    CHECK(w.p == doctest::Approx(0.07460807914358498).epsilon(1e-10));
    CHECK(welch_test(b, a).p == doctest::Approx(w.p).epsilon(1e-14));

    const std::vector<double> c{2, 2, 2}, d{3, 3, 3};
    CHECK(welch_test(c, c).p == 1.0);
    CHECK(welch_test(c, d).p == 0.0);
    CHECK_THROWS_AS(welch_test(std::vector<double>{1.0}, a), Error);
}

TEST_CASE("parallel trials equal serial trials") {
    const TrialFn fn = [](std::size_t i) {
        const auto s = random_scenario(TeamSpec::fixed(2, 3, 8), i);
        sim::SimConfig cfg;
        cfg.seed = i;
        TrialOutcome t;
        t.performance = sim::run_mission(s, random_allocate(s, i), cfg).performance;
        return t;
    };
    CHECK(run_trials(40, fn) == run_trials_serial(40, fn));
    CHECK(run_trials(40, fn, 3) == run_trials_serial(40, fn));
    CHECK(run_trials(0, fn).empty());

    const TrialFn throwing = [](std::size_t i) -> TrialOutcome {
        if (i == 5 || i == 9) throw Error("trial " + std::to_string(i));
        return {};
    };
    try {
        run_trials(12, throwing);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()) == "trial 5");
    }
}

TEST_CASE("labels and spec parsing") {
    CHECK(parse_method("zero_shot") == Method::ZeroShot);
    CHECK(method_label(Method::BruteForce) == "brute_force");
    CHECK(parse_mode("SA") == Mode::SituationalAwareness);
    CHECK(can_replan(Method::Rebel));
    CHECK_FALSE(can_replan(Method::Random));
    CHECK(default_preferences(Mode::SOO).size() == 3);
    CHECK(default_preferences(Mode::MOO)[0].weight(Objective::TaskPerformance) == 0.5);

    const auto spec = experiment_spec_from_json(R"({
        "mode": "MOO", "team": {"humans": [2, 3], "robots": 4, "tasks": [5, 9]},
        "trials": 7, "methods": ["heuristic", "random"], "seed": 3,
        "preferences": ["TP=0.5,MT=0.5"], "brute_force": {"samples": 2}})");
    CHECK(spec.mode == Mode::MOO);
    CHECK(spec.team.humans.lo == 2);
    CHECK(spec.team.humans.hi == 3);
    CHECK(spec.team.robots.lo == 4);
    CHECK(spec.team.robots.hi == 4);
    CHECK(spec.trials == 7);
    CHECK(spec.methods == std::vector<Method>{Method::Heuristic, Method::Random});
    CHECK(spec.cells().size() == 1);
    CHECK(spec.brute_force_samples == 2);
    CHECK_THROWS_AS(experiment_spec_from_json(R"({"trials": 0})"), Error);
    CHECK_THROWS_AS(experiment_spec_from_json(R"({"methods": []})"), Error);
    CHECK_THROWS_AS(experiment_spec_from_json(R"({"methods": ["oracle"]})"), Error);
}

TEST_CASE("SOO experiment: shape, ordering and determinism") {
    const auto spec = small_spec(Mode::SOO, 30);
    const auto report = run_experiment(spec, {});
    CHECK(report.cells.size() == spec.methods.size() * 3);
    CHECK(report.all_invariants_ok());
    const auto mt = PreferenceVector::single(Objective::MissionTime);
    CHECK(report.find(Method::Heuristic, mt)->time.mean <= report.find(Method::Random, mt)->time.mean);
    for (const auto& c : report.cells) {
        CHECK(c.trials.size() == 30);
        CHECK(c.accuracy.mean <= 5.0 * 12);
        CHECK(c.utilization.mean >= 0.0);
        CHECK(c.utilization.mean <= 1.0);
    }
    const auto again = run_experiment(spec, {});
    CHECK(again.cells_csv() == report.cells_csv());
    CHECK(again.trials_csv() == report.trials_csv());
    CHECK(again.summary_json() == report.summary_json());
}

TEST_CASE("MOO experiment: workload priority reaches the top normalized value") {
    const auto report = run_experiment(small_spec(Mode::MOO, 20), {});
    const auto hw = PreferenceVector::parse("TP=0.25,MT=0.25,HW=0.5");
    const auto* cell = report.find(Method::Heuristic, hw);
    REQUIRE(cell != nullptr);
    CHECK(cell->normalized[static_cast<std::size_t>(Objective::HumanWorkload)] == 1.0);
    CHECK(cell->aligned);
    for (const auto& c : report.cells) {
        for (double v : c.normalized) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("situational awareness marks fixed methods N/A") {
    const auto report = run_experiment(small_spec(Mode::SituationalAwareness, 10), {});
    for (const auto& c : report.cells) {
        CHECK(c.not_applicable);
        CHECK_FALSE(c.degradation.has_value());
    }
    CHECK(report.cells_csv().find("N/A") != std::string::npos);
}

TEST_CASE("rebel without databases names the commands to run") {
    auto spec = small_spec(Mode::SOO, 2);
    spec.methods = {Method::Rebel};
    llm::StubProvider stub;
    retrieval::HashedEmbedder e;
    retrieval::RulesDatabase rules;
    retrieval::ExperienceDatabase exp;
    ExperimentDeps deps;
    deps.provider = &stub;
    deps.embedder = &e;
    deps.rules = &rules;
    deps.experiences = &exp;
    try {
        run_experiment(spec, deps);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("gen-rules") != std::string::npos);
    }
}

}  // TEST_SUITE
