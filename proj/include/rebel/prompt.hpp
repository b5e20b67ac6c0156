#pragma once

// Structured prompt layout shared by all three stages, and recovery of an
// allocation plan from free-form model output.
//
// Section order is fixed: Background | Mission Scenario, Goal, Mission
// Objectives, Rules, Prior Experience. Headings sit at column 0, content is
// indented by two spaces, and absent sections are omitted.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rebel/core.hpp"

namespace rebel::prompt {

inline constexpr std::string_view kBackgroundHeading = "Background";
inline constexpr std::string_view kScenarioHeading = "Mission Scenario";
inline constexpr std::string_view kGoalHeading = "Goal";
inline constexpr std::string_view kObjectivesHeading = "Mission Objectives";
inline constexpr std::string_view kRulesHeading = "Rules";
inline constexpr std::string_view kExperienceHeading = "Prior Experience";

/// Describes the scenario dictionaries without concrete values.
inline constexpr std::string_view kBackground =
    "Human Attributes: {H_#: [Skill, Cognition], ...}\n"
    "Robot Details: {R_#: [Speed, Camera Quality], ...}\n"
    "Task Info: {T_#: [(x, y), Difficulty], ...}";

inline constexpr std::string_view kRuleGenerationGoal = "Generate a set of rules to follow during ITA.";
inline constexpr std::string_view kAllocationGoal =
    "Perform ITA for the provided mission. Answer with one line per task in the form T_i: (agent, ...).";
inline constexpr std::string_view kRefinementGoal =
    "Refine the rules using the prior experience. Answer with one rule per line.";

struct Exemplar {
    MissionScenario scenario;
    ItaPlan plan;
    std::optional<PerformanceRecord> performance;
    friend bool operator==(const Exemplar&, const Exemplar&) = default;
};

struct SpfPrompt {
    std::optional<MissionScenario> scenario;  // when absent the Background section is rendered
    std::string background{kBackground};
    std::string goal;
    std::vector<std::string> objectives;  // one line each
    std::vector<std::string> rules;
    std::vector<Exemplar> prior_experience;
};

/// "Minimize the overall mission time." style line for a single objective.
std::string objective_line(Objective o);
/// "Minimize mission time (weight = 0.55)" lines, heaviest first, zero weights dropped.
std::vector<std::string> objective_lines(const PreferenceVector& prefs);

/// Throws Error if goal or objectives are empty.
std::string build_prompt(const SpfPrompt& components);

/// Section-wise inverse of build_prompt. Objective lines are kept as text.
SpfPrompt parse_prompt(std::string_view text);

/// Recovers the preference vector from objective lines of either style.
PreferenceVector preferences_from_lines(const std::vector<std::string>& lines);

// ---------------------------------------------------------------------------
// Plan parsing

class PlanParseError : public Error {
public:
    enum class Kind { ParseFailure, PlanInvalid };
    PlanParseError(Kind kind, std::string message, std::vector<std::string> violations = {})
        : Error(std::move(message)), kind_(kind), violations_(std::move(violations)) {}
    Kind kind() const { return kind_; }
    const std::vector<std::string>& violations() const { return violations_; }

private:
    Kind kind_;
    std::vector<std::string> violations_;
};

struct ParseOptions {
    /// Reject output that contains anything besides assignment lines.
    bool strict = false;
};

/// Extracts every "T_<id>: (<agent>[, <agent>]*)" line, ignoring prose.
/// Duplicate identical lines collapse; conflicting ones are violations.
ItaPlan parse_ita_plan(std::string_view text, const MissionScenario& scenario, const ParseOptions& options = {});

}  // namespace rebel::prompt
