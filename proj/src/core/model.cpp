#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "rebel/core.hpp"
#include "rebel/text_format.hpp"

namespace rebel {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
    auto it = std::find_if(items.begin(), items.end(), [&](const T& x) { return x.id == id; });
    return it == items.end() ? nullptr : &*it;
}

template <typename T>
void sort_by_id(std::vector<T>& items) {
    std::stable_sort(items.begin(), items.end(), [](const T& a, const T& b) { return compare_ids(a.id, b.id) < 0; });
}

}  // namespace

std::string_view tier_label(Tier t) {
    switch (t) {
        case Tier::Low: return "Lo";
        case Tier::Med: return "Med";
        case Tier::High: return "Hi";
    }
    return "?";
}

Tier parse_tier(std::string_view text) {
    const auto s = lower(text::trim(text));
    if (s == "lo" || s == "low") return Tier::Low;
    if (s == "med" || s == "medium") return Tier::Med;
    if (s == "hi" || s == "high") return Tier::High;
    throw Error("unknown tier '" + std::string(text) + "'");
}

std::string_view robot_kind_label(RobotKind k) { return k == RobotKind::UAV ? "UAV" : "UGV"; }

std::optional<RobotKind> robot_kind_from_id(std::string_view id) {
    if (id.starts_with("UAV")) return RobotKind::UAV;
    if (id.starts_with("UGV")) return RobotKind::UGV;
    return std::nullopt;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

const HumanProfile* MissionScenario::find_human(std::string_view id) const { return find_by_id(humans, id); }
const RobotProfile* MissionScenario::find_robot(std::string_view id) const { return find_by_id(robots, id); }
const TaskSpec* MissionScenario::find_task(std::string_view id) const { return find_by_id(tasks, id); }

void MissionScenario::canonicalize() {
    sort_by_id(humans);
    sort_by_id(robots);
    sort_by_id(tasks);
}

std::vector<std::string> scenario_problems(const MissionScenario& s) {
    std::vector<std::string> out;
    std::set<std::string, std::less<>> seen;
    auto check_id = [&](const std::string& id) {
        if (id.empty()) {
            out.push_back("empty id");
        } else if (!seen.insert(id).second) {
            out.push_back("duplicate id " + id);
        }
    };
    if (!(s.arena_side > 0.0) || !std::isfinite(s.arena_side)) out.push_back("arena side must be positive");
    for (const auto& h : s.humans) check_id(h.id);
    for (const auto& r : s.robots) {
        check_id(r.id);
        if (!(r.speed > 0.0) || !std::isfinite(r.speed)) out.push_back(r.id + ": speed must be positive");
        auto kind = robot_kind_from_id(r.id);
        if (!kind || *kind != r.kind) out.push_back(r.id + ": id prefix must name the robot kind (UAV/UGV)");
    }
    for (const auto& t : s.tasks) {
        check_id(t.id);
        const auto [x, y] = t.location;
        if (!(x >= 0.0 && x <= s.arena_side && y >= 0.0 && y <= s.arena_side)) {
            out.push_back(t.id + ": location outside arena");
        }
    }
    return out;
}

bool is_runnable(const MissionScenario& s) { return !s.robots.empty() && scenario_problems(s).empty(); }

std::optional<TaskRoles> ItaPlan::roles(std::string_view task) const {
    auto it = assignments.find(task);
    if (it == assignments.end()) return std::nullopt;
    std::optional<TaskRoles> roles;
    std::optional<std::string> analyst;
    for (const auto& a : it->second) {
        switch (a.pattern.kind) {
            case CollaborationPattern::Kind::RobotAutonomous:
            case CollaborationPattern::Kind::SharedControl:
                if (roles) return std::nullopt;
                roles = TaskRoles{a.agent, std::nullopt, std::nullopt};
                if (a.pattern.kind == CollaborationPattern::Kind::SharedControl) roles->operator_ = a.pattern.human;
                break;
            case CollaborationPattern::Kind::HumanAnalysis:
                if (analyst) return std::nullopt;
                analyst = a.agent;
                break;
        }
    }
    if (roles) roles->analyst = analyst;
    return roles;
}

void ItaPlan::assign(const std::string& task, const TaskRoles& roles) {
    std::vector<Assignment> entries;
    entries.push_back({roles.traveler, roles.operator_ ? CollaborationPattern::shared(*roles.operator_)
                                                       : CollaborationPattern::autonomous()});
    if (roles.analyst) entries.push_back({*roles.analyst, CollaborationPattern::analysis(*roles.analyst)});
    assignments[task] = std::move(entries);
}

}  // namespace rebel
