#include <fstream>
#include <sstream>

#include "json.hpp"

#include "rebel/sim.hpp"

namespace rebel::sim {
namespace {

using nlohmann::json;

void check_probabilities(const std::array<double, 3>& v, const char* name) {
    for (double p : v) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error(std::string(name) + " entries must lie in [0,1]");
    }
}

void check_positive(const std::array<double, 3>& v, const char* name) {
    for (double x : v) {
        if (!(x > 0.0)) throw Error(std::string(name) + " entries must be positive");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void SimConfig::check() const {
    check_probabilities(human_base_accuracy, "human_base_accuracy");
    check_probabilities(robot_base_accuracy, "robot_base_accuracy");
    check_probabilities(difficulty_penalty, "difficulty_penalty");
    check_positive(skill_adjustment, "skill_adjustment");
    check_positive(shared_speed_multiplier, "shared_speed_multiplier");
    check_positive(shared_quality_multiplier, "shared_quality_multiplier");
    check_positive(analysis_service_s, "analysis_service_s");
    if (!(fatigue_floor >= 0.0 && fatigue_floor <= 1.0)) throw Error("fatigue_floor must lie in [0,1]");
    if (!(fatigue_horizon_s > 0.0)) throw Error("fatigue_horizon_s must be positive");
    if (!(workload_penalty >= 0.0)) throw Error("workload_penalty must be non-negative");
    if (!(points_per_correct >= 0.0)) throw Error("points_per_correct must be non-negative");
}

SimConfig sim_config_from_json(std::string_view json_text) {
    SimConfig c;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("sim config: ") + e.what());
    }
    read(j, "human_base_accuracy", c.human_base_accuracy);
    read(j, "skill_adjustment", c.skill_adjustment);
    read(j, "fatigue_floor", c.fatigue_floor);
    read(j, "fatigue_horizon_s", c.fatigue_horizon_s);
    read(j, "workload_penalty", c.workload_penalty);
    read(j, "complexity_steepness", c.complexity_steepness);
    read(j, "complexity_midpoint", c.complexity_midpoint);
    read(j, "robot_base_accuracy", c.robot_base_accuracy);
    read(j, "difficulty_penalty", c.difficulty_penalty);
    read(j, "shared_speed_multiplier", c.shared_speed_multiplier);
    read(j, "shared_quality_multiplier", c.shared_quality_multiplier);
    read(j, "analysis_service_s", c.analysis_service_s);
    read(j, "points_per_correct", c.points_per_correct);
    read(j, "seed", c.seed);
    if (j.contains("depot") && !j.at("depot").is_null()) {
        const auto& d = j.at("depot");
        c.depot = Point{d.at(0).get<double>(), d.at(1).get<double>()};
    }
    c.check();
    return c;
}

std::string sim_config_to_json(const SimConfig& c) {
    json j;
    j["human_base_accuracy"] = c.human_base_accuracy;
    j["skill_adjustment"] = c.skill_adjustment;
    j["fatigue_floor"] = c.fatigue_floor;
    j["fatigue_horizon_s"] = c.fatigue_horizon_s;
    j["workload_penalty"] = c.workload_penalty;
    j["complexity_steepness"] = c.complexity_steepness;
    j["complexity_midpoint"] = c.complexity_midpoint;
    j["robot_base_accuracy"] = c.robot_base_accuracy;
    j["difficulty_penalty"] = c.difficulty_penalty;
    j["shared_speed_multiplier"] = c.shared_speed_multiplier;
    j["shared_quality_multiplier"] = c.shared_quality_multiplier;
    j["analysis_service_s"] = c.analysis_service_s;
    j["points_per_correct"] = c.points_per_correct;
    j["seed"] = c.seed;
    j["depot"] = c.depot ? json::array({c.depot->x, c.depot->y}) : json(nullptr);
    return j.dump(2) + "\n";
}

SimConfig load_sim_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open sim config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return sim_config_from_json(ss.str());
}

}  // namespace rebel::sim
