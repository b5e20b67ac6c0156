#pragma once

// Experiment harness: baselines, the exhaustive oracle, team composition
// changes, trial execution and report assembly.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rebel/core.hpp"
#include "rebel/llm.hpp"
#include "rebel/pipeline.hpp"
#include "rebel/retrieval.hpp"
#include "rebel/scenario_gen.hpp"
#include "rebel/sim.hpp"

namespace rebel::bench {

// ---------------------------------------------------------------------------
// Allocation options and baselines

/// Every feasible role set for one task, in a fixed order: per robot (id
/// order) autonomous, then analysis by each human, then shared control by
/// each human. Size m * (1 + 2n).
std::vector<TaskRoles> task_options(const MissionScenario& scenario);

/// Uniform over task_options independently per task; deterministic in seed.
ItaPlan random_allocate(const MissionScenario& scenario, std::uint64_t seed);

/// Per-sample mission seeds shared by every plan under comparison.
std::vector<std::uint64_t> common_seeds(std::uint64_t seed, std::size_t samples);

std::vector<PerformanceRecord> evaluate_plan(const MissionScenario& scenario, const ItaPlan& plan,
                                             const sim::SimConfig& cfg, std::span<const std::uint64_t> seeds);

double mean_aggregate(std::span<const PerformanceRecord> records, const PreferenceVector& prefs,
                      const NormalizationBounds& bounds);

inline constexpr double kDefaultSearchCap = 1e5;

struct BruteForceOptions {
    std::size_t samples = 8;
    std::uint64_t seed = 0;
    double cap = kDefaultSearchCap;
    bool parallel = true;
};

struct CandidateScore {
    std::string encoding;  // rendered plan text
    ItaPlan plan;
    std::vector<PerformanceRecord> records;
    double mean_j = 0.0;
};

struct BruteForceResult {
    ItaPlan best;
    double best_j = 0.0;
    std::vector<CandidateScore> table;  // enumeration order
    NormalizationBounds bounds;         // over every sample of every candidate
    std::vector<std::uint64_t> seeds;

    const CandidateScore* find(const ItaPlan& plan) const;
};

/// Number of candidate plans, as a double so oversized spaces do not wrap.
double search_space_size(const MissionScenario& scenario);

/// Exhaustive search with common random numbers. Ties go to the
/// lexicographically smallest encoding. Throws Error above the cap.
BruteForceResult brute_force_optimal(const MissionScenario& scenario, const PreferenceVector& prefs,
                                     const sim::SimConfig& cfg, const BruteForceOptions& options = {});

// ---------------------------------------------------------------------------
// Team composition changes

struct CompositionChange {
    std::vector<std::string> remove;
    std::vector<HumanProfile> add_humans;
    std::vector<RobotProfile> add_robots;
};

struct CompositionResult {
    MissionScenario scenario;
    std::vector<std::string> orphaned_tasks;  // assignments that referenced a removed agent
};

CompositionResult apply_composition_change(const MissionScenario& scenario, const ItaPlan& plan,
                                           const CompositionChange& change);

/// `count` distinct agents chosen uniformly, never taking the last robot.
CompositionChange random_removal(const MissionScenario& scenario, std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Statistics

struct Summary {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for n < 2
    std::size_t n = 0;
};
Summary summarize(std::span<const double> xs);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;  // two-sided
};
/// Needs at least two observations per group.
WelchResult welch_test(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Trials

struct TrialOutcome {
    PerformanceRecord performance;
    bool valid = true;
    bool fallback = false;
    std::optional<PerformanceRecord> adapted;  // after a composition change
    bool adapted_valid = true;
    bool dominance_ok = true;                   // brute force only
    friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

using TrialFn = std::function<TrialOutcome(std::size_t trial)>;

/// Runs trials 0..n-1 across OpenMP threads (workers = 0 uses the runtime
/// default). Results are in trial order; the lowest-index exception is rethrown.
std::vector<TrialOutcome> run_trials(std::size_t n, const TrialFn& fn, std::size_t workers = 0);
std::vector<TrialOutcome> run_trials_serial(std::size_t n, const TrialFn& fn);

// ---------------------------------------------------------------------------
// Experiments

enum class Mode { SOO, MOO, SituationalAwareness };
enum class Method { Rebel, ZeroShot, Heuristic, Random, BruteForce };

std::string_view mode_label(Mode m);
Mode parse_mode(std::string_view text);
std::string_view method_label(Method m);
Method parse_method(std::string_view text);
/// Methods that can re-plan for a changed team.
bool can_replan(Method m);

/// SOO and situational awareness: one cell per objective. MOO: the
/// (0.5, 0.25, 0.25) rotations.
std::vector<PreferenceVector> default_preferences(Mode m);

struct ExperimentSpec {
    Mode mode = Mode::SOO;
    TeamSpec team = TeamSpec::fixed(5, 7, 30);
    std::size_t trials = 100;
    std::vector<PreferenceVector> preferences;  // empty means default_preferences(mode)
    std::vector<Method> methods{Method::Heuristic, Method::Random};
    std::uint64_t seed = 0;
    std::size_t remove_agents = 2;
    std::size_t brute_force_samples = 4;
    double brute_force_cap = kDefaultSearchCap;
    std::size_t workers = 0;

    void check() const;
    std::vector<PreferenceVector> cells() const;
};

ExperimentSpec experiment_spec_from_json(std::string_view json_text);
ExperimentSpec load_experiment_spec(const std::string& path);

struct ExperimentDeps {
    llm::Provider* provider = nullptr;
    retrieval::Embedder* embedder = nullptr;
    const retrieval::RulesDatabase* rules = nullptr;
    const retrieval::ExperienceDatabase* experiences = nullptr;
    sim::SimConfig sim;
    pipeline::RetrievalConfig retrieval;
    std::string model;
};

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

struct CellReport {
    Method method = Method::Heuristic;
    PreferenceVector prefs;
    std::vector<TrialOutcome> trials;
    std::vector<double> aggregate;  // per-trial J, bounds over the preference column
    Summary accuracy, time, utilization, j;
    double fallback_rate = 0.0;
    std::size_t invalid_plans = 0;

    std::array<double, 3> normalized{};  // by objective, min-max over the method's cells
    std::optional<Objective> priority;
    bool aligned = false;

    std::optional<WelchResult> vs_random;  // on the prioritized metric

    bool not_applicable = false;  // composition change the method cannot handle
    std::optional<Summary> adapted_accuracy, adapted_time, adapted_utilization;
    std::size_t invalid_replans = 0;
    std::optional<double> degradation;  // 1 - adapted A_m / static A_m
};

struct InvariantCheck {
    std::string name;
    bool ok = true;
    std::string detail;
};

struct ExperimentReport {
    ExperimentSpec spec;
    std::vector<CellReport> cells;  // method-major, preferences in spec order
    std::vector<InvariantCheck> invariants;
    std::vector<std::pair<Method, double>> runtime_s;  // wall clock, excluded from csv/json

    bool all_invariants_ok() const;
    const CellReport* find(Method m, const PreferenceVector& prefs) const;

    std::string cells_csv() const;
    std::string trials_csv() const;
    std::string summary_json() const;
    std::string table() const;
};

ExperimentReport run_experiment(const ExperimentSpec& spec, const ExperimentDeps& deps);

}  // namespace rebel::bench
