#include "rebel/text_format.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace rebel::text {
namespace {

constexpr std::string_view kWhitespace = " \t\r\n";

std::string_view after_label(std::string_view line, std::string_view label) {
    line = trim(line);
    if (!line.starts_with(label)) return {};
    line.remove_prefix(label.size());
    line = trim(line);
    if (line.empty() || line.front() != ':') return {};
    line.remove_prefix(1);
    return trim(line);
}

std::string_view strip_brackets(std::string_view s, char open, char close, std::string_view what) {
    s = trim(s);
    if (s.size() < 2 || s.front() != open || s.back() != close) {
        throw Error("expected " + std::string(what) + " in '" + std::string(s) + "'");
    }
    return trim(s.substr(1, s.size() - 2));
}

/// Parses "{K: [a, b], ...}" into (key, values) pairs.
std::vector<std::pair<std::string, std::vector<std::string>>> parse_dict(std::string_view body) {
    std::vector<std::pair<std::string, std::vector<std::string>>> out;
    const auto inner = strip_brackets(body, '{', '}', "{...}");
    for (const auto& entry : split_top_level(inner)) {
        if (entry.empty()) continue;
        const auto colon = entry.find(':');
        if (colon == std::string::npos) throw Error("dictionary entry without ':' in '" + entry + "'");
        std::string key(trim(std::string_view(entry).substr(0, colon)));
        auto values = split_top_level(strip_brackets(std::string_view(entry).substr(colon + 1), '[', ']', "[...]"));
        out.emplace_back(std::move(key), std::move(values));
    }
    return out;
}

Point parse_point(std::string_view s) {
    const auto parts = split_top_level(strip_brackets(s, '(', ')', "(x, y)"));
    if (parts.size() != 2) throw Error("point needs two coordinates: '" + std::string(s) + "'");
    return {parse_number(parts[0]), parse_number(parts[1])};
}

}  // namespace

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(kWhitespace);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(kWhitespace);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_top_level(std::string_view text, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == sep && depth == 0) {
            out.emplace_back(trim(text.substr(start, i - start)));
            start = i + 1;
        }
    }
    auto last = trim(text.substr(start));
    if (!last.empty() || !out.empty()) out.emplace_back(last);
    return out;
}

std::string format_number(double v) {
    if (!std::isfinite(v)) throw Error("cannot format a non-finite number");
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_number(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw Error("not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::string render_humans(const MissionScenario& s) {
    auto sorted = s;
    sorted.canonicalize();
    std::string out(kHumanSection);
    out += ": {";
    for (std::size_t i = 0; i < sorted.humans.size(); ++i) {
        const auto& h = sorted.humans[i];
        if (i) out += ", ";
        out += h.id + ": [" + std::string(tier_label(h.skill)) + ", " + std::string(tier_label(h.cognition)) + "]";
    }
    return out + "}";
}

std::string render_robots(const MissionScenario& s) {
    auto sorted = s;
    sorted.canonicalize();
    std::string out(kRobotSection);
    out += ": {";
    for (std::size_t i = 0; i < sorted.robots.size(); ++i) {
        const auto& r = sorted.robots[i];
        if (i) out += ", ";
        out += r.id + ": [" + format_number(r.speed) + ", " + std::string(tier_label(r.camera)) + "]";
    }
    return out + "}";
}

std::string render_tasks(const MissionScenario& s) {
    auto sorted = s;
    sorted.canonicalize();
    std::string out(kTaskSection);
    out += ": {";
    for (std::size_t i = 0; i < sorted.tasks.size(); ++i) {
        const auto& t = sorted.tasks[i];
        if (i) out += ", ";
        out += t.id + ": [(" + format_number(t.location.x) + ", " + format_number(t.location.y) + "), " +
               std::string(tier_label(t.difficulty)) + "]";
    }
    return out + "}";
}

std::string render_scenario(const MissionScenario& s) {
    return render_humans(s) + "\n" + render_robots(s) + "\n" + render_tasks(s) + "\n" + std::string(kArenaLine) +
           ": " + format_number(s.arena_side) + "\n";
}

MissionScenario parse_scenario(std::string_view text) {
    MissionScenario s;
    bool have_h = false, have_r = false, have_t = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (line.empty()) continue;
        if (auto body = after_label(line, kHumanSection); !body.empty()) {
            for (auto& [id, v] : parse_dict(body)) {
                if (v.size() != 2) throw Error("human " + id + " needs [Skill, Cognition]");
                s.humans.push_back({id, parse_tier(v[1]), parse_tier(v[0])});
            }
            have_h = true;
        } else if (auto body = after_label(line, kRobotSection); !body.empty()) {
            for (auto& [id, v] : parse_dict(body)) {
                if (v.size() != 2) throw Error("robot " + id + " needs [Speed, Camera Quality]");
                auto kind = robot_kind_from_id(id);
                if (!kind) throw Error("robot id " + id + " must start with UAV or UGV");
                s.robots.push_back({id, *kind, parse_number(v[0]), parse_tier(v[1])});
            }
            have_r = true;
        } else if (auto body = after_label(line, kTaskSection); !body.empty()) {
            for (auto& [id, v] : parse_dict(body)) {
                if (v.size() != 2) throw Error("task " + id + " needs [(x, y), Difficulty]");
                s.tasks.push_back({id, parse_point(v[0]), parse_tier(v[1])});
            }
            have_t = true;
        } else if (auto body = after_label(line, kArenaLine); !body.empty()) {
            s.arena_side = parse_number(body);
        } else {
            throw Error("unrecognized scenario line '" + std::string(line) + "'");
        }
    }
    if (!have_h || !have_r || !have_t) throw Error("scenario text needs human, robot and task sections");
    s.canonicalize();
    return s;
}

std::string render_tuple(const TaskRoles& roles) {
    std::string out = "(";
    if (roles.operator_) out += *roles.operator_ + ", ";
    out += roles.traveler;
    if (roles.analyst && roles.analyst != roles.operator_) out += ", " + *roles.analyst;
    return out + ")";
}

std::string render_plan(const ItaPlan& plan) {
    std::string out;
    for (const auto& [task, entries] : plan.assignments) {
        out += task + ": ";
        if (auto roles = plan.roles(task)) {
            out += render_tuple(*roles);
        } else {
            out += "(";
            for (std::size_t i = 0; i < entries.size(); ++i) {
                if (i) out += ", ";
                out += entries[i].agent;
            }
            out += ")";
        }
        out += "\n";
    }
    return out;
}

std::string render_performance(const PerformanceRecord& p) {
    return "Performance: {A_m: " + format_number(p.accuracy_points) + ", T_m: " + format_number(p.mission_seconds) +
           ", U_h: " + format_number(p.human_utilization) + "}";
}

PerformanceRecord parse_performance(std::string_view text) {
    auto body = after_label(text, "Performance");
    if (body.empty()) throw Error("expected 'Performance: {...}'");
    PerformanceRecord p;
    int seen = 0;
    for (const auto& entry : split_top_level(strip_brackets(body, '{', '}', "{...}"))) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos) throw Error("performance entry without ':'");
        const auto key = trim(std::string_view(entry).substr(0, colon));
        const double v = parse_number(std::string_view(entry).substr(colon + 1));
        if (key == "A_m") {
            p.accuracy_points = v;
        } else if (key == "T_m") {
            p.mission_seconds = v;
        } else if (key == "U_h") {
            p.human_utilization = v;
        } else {
            throw Error("unknown performance field '" + std::string(key) + "'");
        }
        ++seen;
    }
    if (seen != 3) throw Error("performance needs A_m, T_m and U_h");
    return p;
}

}  // namespace rebel::text

namespace rebel::text {

std::optional<TaskRoles> roles_from_tuple(const std::vector<std::string>& agents, const MissionScenario& scenario,
                                          std::string& problem) {
    std::vector<std::string> before, after;
    std::optional<std::string> robot;
    for (const auto& a : agents) {
        if (scenario.find_robot(a) != nullptr) {
            if (robot) {
                problem = "more than one robot (" + *robot + ", " + a + ")";
                return std::nullopt;
            }
            robot = a;
        } else if (scenario.find_human(a) != nullptr) {
            (robot ? after : before).push_back(a);
        } else {
            problem = "unknown agent " + a;
            return std::nullopt;
        }
    }
    if (!robot) {
        problem = "no robot";
        return std::nullopt;
    }
    if (before.size() > 1) {
        problem = "more than one shared-control operator";
        return std::nullopt;
    }
    if (after.size() > 1) {
        problem = "more than one analyst";
        return std::nullopt;
    }
    TaskRoles roles{*robot, std::nullopt, std::nullopt};
    if (!before.empty()) roles.operator_ = before.front();
    if (!after.empty()) {
        roles.analyst = after.front();
    } else if (roles.operator_) {
        roles.analyst = roles.operator_;
    }
    return roles;
}

ItaPlan parse_plan(std::string_view text, const MissionScenario& scenario) {
    ItaPlan plan;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw Error("plan line without ':' in '" + std::string(line) + "'");
        std::string task(trim(line.substr(0, colon)));
        auto body = trim(line.substr(colon + 1));
        if (body.size() < 2 || body.front() != '(' || body.back() != ')') {
            throw Error("plan line needs an agent tuple: '" + std::string(line) + "'");
        }
        std::string problem;
        auto roles = roles_from_tuple(split_top_level(body.substr(1, body.size() - 2)), scenario, problem);
        if (!roles) throw Error(task + ": " + problem);
        if (plan.assignments.contains(task)) throw Error(task + " assigned twice");
        plan.assign(task, *roles);
    }
    return plan;
}

}  // namespace rebel::text
