#pragma once

#include <cstdint>

#include "rebel/core.hpp"

namespace rebel::bench {

struct CountRange {
    std::size_t lo = 1;
    std::size_t hi = 1;
};

/// Team and mission size ranges for randomized scenarios. Sizes are drawn
/// uniformly from each inclusive range, tiers uniformly over Low/Med/High,
/// robot speeds uniformly over integer m/s and POIs uniformly over the arena
/// (integer metres).
struct TeamSpec {
    CountRange humans{5, 5};
    CountRange robots{7, 7};
    CountRange tasks{30, 30};
    double arena_side = kDefaultArenaSide;
    int speed_min = 4;
    int speed_max = 15;

    static TeamSpec fixed(std::size_t humans, std::size_t robots, std::size_t tasks) {
        TeamSpec t;
        t.humans = {humans, humans};
        t.robots = {robots, robots};
        t.tasks = {tasks, tasks};
        return t;
    }
    void check() const;
};

/// Deterministic in (spec, seed). Robot kind is a fair coin; robots are
/// numbered per kind (UAV_0, UAV_1, UGV_0, ...).
MissionScenario random_scenario(const TeamSpec& spec, std::uint64_t seed);

}  // namespace rebel::bench
