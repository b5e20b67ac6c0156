#include <set>

#include "rebel/core.hpp"

namespace rebel {

PlanVerdict validate_plan(const ItaPlan& plan, const MissionScenario& scenario) {
    PlanVerdict v;
    auto add = [&](const std::string& task, const std::string& what) { v.violations.push_back(task + " " + what); };

    for (const auto& t : scenario.tasks) {
        if (!plan.assignments.contains(t.id)) add(t.id, "unassigned");
    }
    for (const auto& [task, entries] : plan.assignments) {
        if (scenario.find_task(task) == nullptr) {
            add(task, "unknown task");
            continue;
        }
        if (entries.empty()) {
            add(task, "unassigned");
            continue;
        }
        int travelers = 0;
        int analysts = 0;
        std::set<std::string, std::less<>> agents;
        std::set<std::string, std::less<>> analyst_ids;
        std::set<std::string, std::less<>> operator_ids;
        for (const auto& a : entries) {
            if (!agents.insert(a.agent).second) add(task, "lists agent " + a.agent + " twice");
            const bool is_robot = scenario.find_robot(a.agent) != nullptr;
            const bool is_human = scenario.find_human(a.agent) != nullptr;
            if (!is_robot && !is_human) {
                add(task, "unknown agent " + a.agent);
                continue;
            }
            switch (a.pattern.kind) {
                case CollaborationPattern::Kind::RobotAutonomous:
                    if (!is_robot) add(task, "human " + a.agent + " cannot travel autonomously");
                    ++travelers;
                    break;
                case CollaborationPattern::Kind::SharedControl:
                    if (!is_robot) add(task, "human " + a.agent + " cannot be shared-control traveler");
                    ++travelers;
                    if (scenario.find_human(a.pattern.human) == nullptr) {
                        add(task, "shared control by unknown human " + a.pattern.human);
                    } else {
                        operator_ids.insert(a.pattern.human);
                    }
                    break;
                case CollaborationPattern::Kind::HumanAnalysis:
                    if (!is_human) {
                        add(task, "robot " + a.agent + " cannot be a human analyst");
                    } else if (a.pattern.human != a.agent) {
                        add(task, "analysis entry for " + a.agent + " names " + a.pattern.human);
                    }
                    ++analysts;
                    analyst_ids.insert(a.agent);
                    break;
            }
        }
        if (travelers == 0) add(task, "has no travel-responsible robot");
        if (travelers > 1) add(task, "has more than one travel-responsible robot");
        if (analysts > 1) add(task, "has more than one analyst");
        for (const auto& op : operator_ids) {
            if (!analyst_ids.contains(op) && analysts == 0) {
                add(task, "shared-control operator " + op + " has no analysis entry");
            }
        }
    }
    return v;
}

}  // namespace rebel
