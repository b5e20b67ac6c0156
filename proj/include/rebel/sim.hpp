#pragma once

// Seedable surveillance-mission simulator. Robots fly/drive to their POIs in
// plan order; captures are classified onboard or queued to a human analyst
// who works through a FIFO queue. Every random decision is keyed on
// (seed, agent id, task id), so a task's draw does not depend on which other
// tasks exist.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rebel/core.hpp"

namespace rebel::sim {

struct SimConfig {
    // Human model, indexed by tier (Low, Med, High).
    std::array<double, 3> human_base_accuracy{0.70, 0.80, 0.90};  // by cognition
    std::array<double, 3> skill_adjustment{0.90, 1.00, 1.10};     // by operational skill
    double fatigue_floor = 0.6;
    double fatigue_horizon_s = 3600.0;
    double workload_penalty = 0.05;  // workload factor = 1 / (1 + penalty * queue_load)
    double complexity_steepness = 1.0;
    double complexity_midpoint = 0.0;  // difficulty axis: Low=-1, Med=0, High=+1

    // Robot model.
    std::array<double, 3> robot_base_accuracy{0.55, 0.70, 0.85};  // by camera
    std::array<double, 3> difficulty_penalty{0.0, 0.15, 0.30};     // by task difficulty
    std::array<double, 3> shared_speed_multiplier{0.70, 0.85, 1.00};    // by operator skill
    std::array<double, 3> shared_quality_multiplier{1.00, 1.10, 1.20};  // by operator skill

    std::array<double, 3> analysis_service_s{20.0, 40.0, 60.0};  // by task difficulty
    double points_per_correct = 5.0;

    /// Robot start position; the arena centre when unset.
    std::optional<Point> depot;
    std::uint64_t seed = 0;

    /// Throws Error if a horizon is non-positive or a probability constant
    /// lies outside [0,1].
    void check() const;
};

SimConfig sim_config_from_json(std::string_view json_text);
std::string sim_config_to_json(const SimConfig& cfg);
SimConfig load_sim_config(const std::string& path);

inline constexpr double kMinProbability = 0.05;
inline constexpr double kMaxProbability = 0.99;

double travel_time(Point from, Point to, double speed);

/// Position of a difficulty tier on the complexity axis (-1, 0, +1).
double difficulty_axis(Tier difficulty);

double fatigue_factor(double elapsed_s, const SimConfig& cfg);

double human_accuracy_probability(const HumanProfile& profile, double elapsed_s, int queue_load, Tier difficulty,
                                  const SimConfig& cfg);

double robot_accuracy_probability(Tier camera, Tier difficulty, std::optional<Tier> shared_operator_skill,
                                  const SimConfig& cfg);

/// Uniform draw for the classification of `task` by `agent`.
double decision_draw(std::uint64_t seed, std::string_view agent, std::string_view task);

enum class Activity { Travel, SharedControl, Analysis };
std::string_view activity_label(Activity a);

struct BusyInterval {
    double start = 0.0;
    double end = 0.0;
    std::string task;
    Activity activity = Activity::Travel;
    friend bool operator==(const BusyInterval&, const BusyInterval&) = default;
};

struct TaskOutcome {
    std::string task;
    std::string classifier;  // robot id (onboard) or human id
    bool by_human = false;
    bool correct = false;
    double capture_s = 0.0;
    double completion_s = 0.0;
    double probability = 0.0;
    friend bool operator==(const TaskOutcome&, const TaskOutcome&) = default;
};

struct SimTrace {
    std::vector<TaskOutcome> outcomes;  // natural task order
    std::map<std::string, std::vector<BusyInterval>, IdLess> busy;
    friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

struct MissionResult {
    PerformanceRecord performance;
    SimTrace trace;
};

/// Throws Error naming the first violation if the plan does not validate.
MissionResult run_mission(const MissionScenario& scenario, const ItaPlan& plan, const SimConfig& cfg);

/// Max over robots of summed leg length / effective leg speed.
double travel_lower_bound(const MissionScenario& scenario, const ItaPlan& plan, const SimConfig& cfg);

/// One line per event: "<seconds>\t<agent>\t<event>\t<task>[\t<detail>]".
std::string render_trace(const SimTrace& trace);

}  // namespace rebel::sim
