#include <algorithm>
#include <set>

#include "rebel/bench.hpp"
#include "rebel/rng.hpp"

namespace rebel::bench {

CompositionResult apply_composition_change(const MissionScenario& scenario, const ItaPlan& plan,
                                           const CompositionChange& change) {
    std::set<std::string, IdLess> removed;
    for (const auto& id : change.remove) {
        if (!scenario.find_human(id) && !scenario.find_robot(id)) throw Error("cannot remove unknown agent " + id);
        if (!removed.insert(id).second) throw Error("agent " + id + " listed twice for removal");
    }
    CompositionResult out;
    out.scenario = scenario;
    auto& s = out.scenario;
    std::erase_if(s.humans, [&](const HumanProfile& h) { return removed.contains(h.id); });
    std::erase_if(s.robots, [&](const RobotProfile& r) { return removed.contains(r.id); });
    if (s.robots.empty() && change.add_robots.empty()) throw Error("composition change would remove every robot");

    for (const auto& h : change.add_humans) {
        if (s.find_human(h.id) || s.find_robot(h.id)) throw Error("added agent " + h.id + " already exists");
        s.humans.push_back(h);
    }
    for (const auto& r : change.add_robots) {
        if (s.find_human(r.id) || s.find_robot(r.id)) throw Error("added agent " + r.id + " already exists");
        s.robots.push_back(r);
    }
    s.canonicalize();

    for (const auto& [task, entries] : plan.assignments) {
        const bool orphan = std::any_of(entries.begin(), entries.end(),
                                        [&](const Assignment& a) { return removed.contains(a.agent); });
        if (orphan) out.orphaned_tasks.push_back(task);
    }
    return out;
}

CompositionChange random_removal(const MissionScenario& scenario, std::size_t count, std::uint64_t seed) {
    MissionScenario s = scenario;
    s.canonicalize();
    std::vector<std::string> pool;
    for (const auto& h : s.humans) pool.push_back(h.id);
    for (const auto& r : s.robots) pool.push_back(r.id);
    if (count >= pool.size()) throw Error("cannot remove that many agents and keep a robot");

    SplitMix rng(mix_seed(seed, fnv1a("composition")));
    CompositionChange change;
    std::size_t robots_left = s.robots.size();
    while (change.remove.size() < count) {
        const auto i = static_cast<std::size_t>(rng.below(pool.size()));
        const bool is_robot = s.find_robot(pool[i]) != nullptr;
        if (is_robot && robots_left == 1) {
            bool humans_left = std::any_of(pool.begin(), pool.end(), [&](const auto& id) { return s.find_human(id); });
            if (!humans_left) throw Error("cannot remove that many agents and keep a robot");
            continue;
        }
        if (is_robot) --robots_left;
        change.remove.push_back(pool[i]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return change;
}

}  // namespace rebel::bench
