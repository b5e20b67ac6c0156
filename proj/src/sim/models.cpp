#include <algorithm>
#include <cmath>

#include "rebel/rng.hpp"
#include "rebel/sim.hpp"

namespace rebel::sim {

double travel_time(Point from, Point to, double speed) {
    if (!(speed > 0.0)) throw Error("travel speed must be positive");
    return distance(from, to) / speed;
}

double difficulty_axis(Tier difficulty) { return static_cast<double>(tier_index(difficulty)) - 1.0; }

double fatigue_factor(double elapsed_s, const SimConfig& cfg) {
    // Saturate explicitly so the floor is hit exactly at T_f * (1 - floor).
    if (elapsed_s >= cfg.fatigue_horizon_s * (1.0 - cfg.fatigue_floor)) return cfg.fatigue_floor;
    return std::max(cfg.fatigue_floor, 1.0 - elapsed_s / cfg.fatigue_horizon_s);
}

double human_accuracy_probability(const HumanProfile& profile, double elapsed_s, int queue_load, Tier difficulty,
                                  const SimConfig& cfg) {
    const double base = cfg.human_base_accuracy[tier_index(profile.cognition)];
    const double skill = cfg.skill_adjustment[tier_index(profile.skill)];
    const double fatigue = fatigue_factor(std::max(0.0, elapsed_s), cfg);
    const double workload = 1.0 / (1.0 + cfg.workload_penalty * std::max(0, queue_load));
    const double z = cfg.complexity_steepness * (difficulty_axis(difficulty) - cfg.complexity_midpoint);
    const double complexity = 1.0 - 0.5 / (1.0 + std::exp(-z));
    return std::clamp(base * skill * fatigue * workload * complexity, kMinProbability, kMaxProbability);
}

double robot_accuracy_probability(Tier camera, Tier difficulty, std::optional<Tier> shared_operator_skill,
                                  const SimConfig& cfg) {
    double quality = cfg.robot_base_accuracy[tier_index(camera)];
    if (shared_operator_skill) quality *= cfg.shared_quality_multiplier[tier_index(*shared_operator_skill)];
    return std::clamp(quality - cfg.difficulty_penalty[tier_index(difficulty)], kMinProbability, kMaxProbability);
}

double decision_draw(std::uint64_t seed, std::string_view agent, std::string_view task) {
    const std::uint64_t key = fnv1a(task, fnv1a("\x1f", fnv1a(agent)));
    return unit_interval(splitmix64(mix_seed(seed, key)));
}

std::string_view activity_label(Activity a) {
    switch (a) {
        case Activity::Travel: return "travel";
        case Activity::SharedControl: return "shared_control";
        case Activity::Analysis: return "analysis";
    }
    return "?";
}

}  // namespace rebel::sim
