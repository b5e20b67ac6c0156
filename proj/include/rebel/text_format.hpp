#pragma once

// Line-oriented text forms for scenarios, plans and performance records.
// The same rendering is embedded in prompts and persisted in the databases;
// numbers use the shortest round-trip decimal form, so parse(render(x))
// reproduces x bit for bit.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rebel/core.hpp"

namespace rebel::text {

inline constexpr std::string_view kHumanSection = "Human Attributes";
inline constexpr std::string_view kRobotSection = "Robot Details";
inline constexpr std::string_view kTaskSection = "Task Info";
inline constexpr std::string_view kArenaLine = "Arena Side";

std::string format_number(double v);
double parse_number(std::string_view text);

/// "Human Attributes: {H_0: [Lo, Med], ...}" with [Skill, Cognition].
std::string render_humans(const MissionScenario& s);
/// "Robot Details: {UAV_0: [13, Lo], ...}" with [Speed, Camera Quality].
std::string render_robots(const MissionScenario& s);
/// "Task Info: {T_0: [(9, 5), Hi], ...}" with [(x, y), Difficulty].
std::string render_tasks(const MissionScenario& s);

/// Three section lines plus "Arena Side: <m>", newline-terminated, ids sorted.
std::string render_scenario(const MissionScenario& s);
/// Accepts the output of render_scenario (leading indentation allowed,
/// the arena line optional). Result is canonicalized.
MissionScenario parse_scenario(std::string_view text);

/// Agent tuple for one task, e.g. "(H_1, UAV_0)".
/// Humans before the robot share control; a human after the robot analyzes;
/// a lone controlling human also analyzes.
std::string render_tuple(const TaskRoles& roles);
/// One "T_i: (...)" line per task, in natural task order.
std::string render_plan(const ItaPlan& plan);

/// Interprets an agent tuple against the scenario's human and robot ids.
/// Exactly one robot travels; at most one human may precede it (shared
/// control) and at most one may follow it (analysis). On failure returns
/// nullopt and sets `problem`.
std::optional<TaskRoles> roles_from_tuple(const std::vector<std::string>& agents, const MissionScenario& scenario,
                                          std::string& problem);

/// Strict inverse of render_plan: every non-blank line must be "T_i: (...)".
ItaPlan parse_plan(std::string_view text, const MissionScenario& scenario);

/// "Performance: {A_m: 120, T_m: 1502.5, U_h: 0.14}"
std::string render_performance(const PerformanceRecord& p);
PerformanceRecord parse_performance(std::string_view text);

/// Splits "a, b , c" on commas at bracket depth 0 and trims each piece.
std::vector<std::string> split_top_level(std::string_view text, char sep = ',');
std::string_view trim(std::string_view s);

}  // namespace rebel::text
