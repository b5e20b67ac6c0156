#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "rebel/core.hpp"
#include "rebel/text_format.hpp"

namespace fixtures {

// Two humans, two robots, two POIs, as in the worked prompt example.
inline rebel::MissionScenario paper_scenario() {
    using rebel::Tier;
    rebel::MissionScenario s;
    s.humans = {{"H_0", Tier::Med, Tier::Low}, {"H_1", Tier::Low, Tier::High}};
    s.robots = {{"UAV_0", rebel::RobotKind::UAV, 13.0, Tier::Low}, {"UGV_0", rebel::RobotKind::UGV, 6.0, Tier::Med}};
    s.tasks = {{"T_0", {9.0, 5.0}, Tier::High}, {"T_1", {2.0, 7.0}, Tier::Low}};
    return s;
}

inline rebel::ItaPlan paper_plan() {
    rebel::ItaPlan plan;
    plan.assign("T_0", {"UAV_0", std::string("H_1"), std::string("H_1")});
    plan.assign("T_1", {"UGV_0", std::string("H_0"), std::string("H_0")});
    return plan;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("rebel_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixtures
