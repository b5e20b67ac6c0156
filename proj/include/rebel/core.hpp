#pragma once

// Domain types for mixed human/robot teams, allocation plans, objectives and
// the aggregate-objective / plan-feasibility math.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rebel {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Identifiers

/// Natural ordering for agent/task ids: "T_2" < "T_10" < "UAV_0".
/// Digit runs compare numerically, everything else bytewise.
int compare_ids(std::string_view a, std::string_view b);

struct IdLess {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const { return compare_ids(a, b) < 0; }
};

// ---------------------------------------------------------------------------
// Attribute tiers

enum class Tier { Low = 0, Med = 1, High = 2 };
inline constexpr std::array<Tier, 3> kAllTiers{Tier::Low, Tier::Med, Tier::High};

/// Short label used in scenario text: "Lo", "Med", "Hi".
std::string_view tier_label(Tier t);
/// Accepts Lo/Low, Med/Medium, Hi/High (case-insensitive).
Tier parse_tier(std::string_view text);
inline constexpr std::size_t tier_index(Tier t) { return static_cast<std::size_t>(t); }

enum class RobotKind { UAV, UGV };
std::string_view robot_kind_label(RobotKind k);
/// Robot kind is carried by the id prefix ("UAV_3", "UGV_0").
std::optional<RobotKind> robot_kind_from_id(std::string_view id);

// ---------------------------------------------------------------------------
// Team and mission

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

struct HumanProfile {
    std::string id;
    Tier cognition = Tier::Med;
    Tier skill = Tier::Med;
    friend bool operator==(const HumanProfile&, const HumanProfile&) = default;
};

struct RobotProfile {
    std::string id;
    RobotKind kind = RobotKind::UAV;
    double speed = 1.0;  // m/s
    Tier camera = Tier::Med;
    friend bool operator==(const RobotProfile&, const RobotProfile&) = default;
};

struct TaskSpec {
    std::string id;
    Point location;
    Tier difficulty = Tier::Med;
    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

inline constexpr double kDefaultArenaSide = 2000.0;

struct MissionScenario {
    std::vector<HumanProfile> humans;
    std::vector<RobotProfile> robots;
    std::vector<TaskSpec> tasks;
    double arena_side = kDefaultArenaSide;

    const HumanProfile* find_human(std::string_view id) const;
    const RobotProfile* find_robot(std::string_view id) const;
    const TaskSpec* find_task(std::string_view id) const;

    /// Sorts every list by natural id order. Rendering always emits this order.
    void canonicalize();

    friend bool operator==(const MissionScenario&, const MissionScenario&) = default;
};

/// Structural problems with a scenario (duplicate ids, bad speeds, tasks
/// outside the arena, robot id/kind mismatch). Empty means well-formed.
std::vector<std::string> scenario_problems(const MissionScenario& s);

/// Well-formed and has at least one robot.
bool is_runnable(const MissionScenario& s);

// ---------------------------------------------------------------------------
// Plans

struct CollaborationPattern {
    enum class Kind { RobotAutonomous, SharedControl, HumanAnalysis };
    Kind kind = Kind::RobotAutonomous;
    std::string human;  // operator / analyst for SharedControl and HumanAnalysis

    static CollaborationPattern autonomous() { return {Kind::RobotAutonomous, {}}; }
    static CollaborationPattern shared(std::string h) { return {Kind::SharedControl, std::move(h)}; }
    static CollaborationPattern analysis(std::string h) { return {Kind::HumanAnalysis, std::move(h)}; }

    friend bool operator==(const CollaborationPattern&, const CollaborationPattern&) = default;
};

struct Assignment {
    std::string agent;
    CollaborationPattern pattern;
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Resolved roles of one task's assignment list.
struct TaskRoles {
    std::string traveler;                 // the robot that flies/drives to the POI
    std::optional<std::string> operator_;  // shared-control human, if any
    std::optional<std::string> analyst;   // human classifying the capture, if any
};

struct ItaPlan {
    std::map<std::string, std::vector<Assignment>, IdLess> assignments;

    /// Roles for a task; nullopt if the task is missing or has no single robot.
    std::optional<TaskRoles> roles(std::string_view task) const;

    /// Convenience builders used by allocators.
    void assign(const std::string& task, const TaskRoles& roles);

    friend bool operator==(const ItaPlan&, const ItaPlan&) = default;
};

struct PlanVerdict {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Coverage and structural feasibility. Violation strings start with the task id.
PlanVerdict validate_plan(const ItaPlan& plan, const MissionScenario& scenario);

// ---------------------------------------------------------------------------
// Objectives

enum class Objective { TaskPerformance = 0, MissionTime = 1, HumanWorkload = 2 };
inline constexpr std::array<Objective, 3> kAllObjectives{Objective::TaskPerformance, Objective::MissionTime,
                                                         Objective::HumanWorkload};

enum class Direction { Maximize, Minimize };

std::string_view objective_code(Objective o);  // "TP", "MT", "HW"
Objective parse_objective(std::string_view text);
Direction objective_direction(Objective o);

class PreferenceVector {
public:
    PreferenceVector() = default;
    /// Weights must lie in [0,1] with a positive sum; they are rescaled to sum to 1.
    explicit PreferenceVector(std::vector<std::pair<Objective, double>> weights);

    static PreferenceVector single(Objective o) { return PreferenceVector({{o, 1.0}}); }
    /// "TP=0.5,MT=0.25,HW=0.25" or a bare objective code.
    static PreferenceVector parse(std::string_view text);

    const std::vector<std::pair<Objective, double>>& weights() const { return weights_; }
    double weight(Objective o) const;
    /// Objective whose weight is >= 0.5 and strictly larger than every other.
    std::optional<Objective> dominant() const;
    bool empty() const { return weights_.empty(); }

    std::string to_string() const;

    friend bool operator==(const PreferenceVector&, const PreferenceVector&) = default;

private:
    std::vector<std::pair<Objective, double>> weights_;
};

struct PerformanceRecord {
    double accuracy_points = 0.0;    // A_m
    double mission_seconds = 0.0;    // T_m
    double human_utilization = 0.0;  // U_h

    double metric(Objective o) const;
    friend bool operator==(const PerformanceRecord&, const PerformanceRecord&) = default;
};

struct ObjectiveBounds {
    double min = 0.0;
    double max = 1.0;
    Direction direction = Direction::Maximize;
};

class NormalizationBounds {
public:
    void set(Objective o, ObjectiveBounds b);
    const ObjectiveBounds* find(Objective o) const;

    /// Observed min/max of each objective over a batch. A constant column
    /// is widened to [v - 0.5, v + 0.5] so every member normalizes to 0.5.
    static NormalizationBounds empirical(std::span<const PerformanceRecord> batch);

private:
    std::map<Objective, ObjectiveBounds> bounds_;
};

/// Unit score in [0,1], larger is better regardless of direction.
double normalize_objective(double value, const ObjectiveBounds& bounds);

/// J = sum_j lambda_j * normalize(O_j).
double aggregate_objective(const PerformanceRecord& record, const PreferenceVector& prefs,
                           const NormalizationBounds& bounds);

}  // namespace rebel
