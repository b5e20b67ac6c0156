#include <cmath>

#include "rebel/rng.hpp"
#include "rebel/scenario_gen.hpp"

namespace rebel::bench {

void TeamSpec::check() const {
    for (const auto* r : {&humans, &robots, &tasks}) {
        if (r->lo > r->hi) throw Error("team range lower bound exceeds upper bound");
    }
    if (robots.lo < 1) throw Error("team spec must include at least one robot");
    if (!(arena_side > 0.0)) throw Error("arena side must be positive");
    if (speed_min < 1 || speed_min > speed_max) throw Error("robot speed range must be positive and ordered");
}

MissionScenario random_scenario(const TeamSpec& spec, std::uint64_t seed) {
    spec.check();
    SplitMix rng(mix_seed(seed, fnv1a("scenario")));
    auto count = [&](const CountRange& r) {
        return r.lo + static_cast<std::size_t>(rng.below(r.hi - r.lo + 1));
    };
    auto tier = [&] { return static_cast<Tier>(rng.below(3)); };

    MissionScenario s;
    s.arena_side = spec.arena_side;
    const auto n = count(spec.humans);
    const auto m = count(spec.robots);
    const auto k = count(spec.tasks);

    for (std::size_t i = 0; i < n; ++i) {
        HumanProfile h;
        h.id = "H_" + std::to_string(i);
        h.skill = tier();
        h.cognition = tier();
        s.humans.push_back(std::move(h));
    }
    std::size_t uavs = 0, ugvs = 0;
    for (std::size_t i = 0; i < m; ++i) {
        RobotProfile r;
        r.kind = rng.below(2) == 0 ? RobotKind::UAV : RobotKind::UGV;
        const auto index = r.kind == RobotKind::UAV ? uavs++ : ugvs++;
        r.id = std::string(robot_kind_label(r.kind)) + "_" + std::to_string(index);
        r.speed = rng.between(spec.speed_min, spec.speed_max);
        r.camera = tier();
        s.robots.push_back(std::move(r));
    }
    const int side = static_cast<int>(std::floor(spec.arena_side));
    for (std::size_t i = 0; i < k; ++i) {
        TaskSpec t;
        t.id = "T_" + std::to_string(i);
        t.location = {static_cast<double>(rng.between(0, side)), static_cast<double>(rng.between(0, side))};
        t.difficulty = tier();
        s.tasks.push_back(std::move(t));
    }
    s.canonicalize();
    return s;
}

}  // namespace rebel::bench
