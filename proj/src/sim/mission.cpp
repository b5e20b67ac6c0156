#include <algorithm>
#include <tuple>

#include "rebel/sim.hpp"
#include "rebel/text_format.hpp"

namespace rebel::sim {
namespace {

struct Job {
    double arrival = 0.0;
    std::string task;
    Tier difficulty = Tier::Med;
};

double union_length(std::vector<BusyInterval> intervals) {
    std::sort(intervals.begin(), intervals.end(),
              [](const BusyInterval& a, const BusyInterval& b) { return a.start < b.start; });
    double total = 0.0;
    double cur_start = 0.0, cur_end = -1.0;
    bool open = false;
    for (const auto& iv : intervals) {
        if (!open || iv.start > cur_end) {
            if (open) total += cur_end - cur_start;
            cur_start = iv.start;
            cur_end = iv.end;
            open = true;
        } else {
            cur_end = std::max(cur_end, iv.end);
        }
    }
    if (open) total += cur_end - cur_start;
    return total;
}

Point depot_for(const MissionScenario& s, const SimConfig& cfg) {
    return cfg.depot.value_or(Point{s.arena_side / 2.0, s.arena_side / 2.0});
}

}  // namespace

MissionResult run_mission(const MissionScenario& scenario, const ItaPlan& plan, const SimConfig& cfg) {
    cfg.check();
    if (auto problems = scenario_problems(scenario); !problems.empty()) {
        throw Error("invalid scenario: " + problems.front());
    }
    if (auto verdict = validate_plan(plan, scenario); !verdict.ok()) {
        throw Error("invalid plan: " + verdict.violations.front());
    }

    const Point depot = depot_for(scenario, cfg);
    MissionResult result;
    auto& trace = result.trace;
    std::map<std::string, TaskOutcome, IdLess> outcomes;
    std::map<std::string, std::vector<Job>, IdLess> queues;

    for (const auto& h : scenario.humans) trace.busy[h.id];
    for (const auto& robot : scenario.robots) {
        auto& robot_busy = trace.busy[robot.id];
        Point pos = depot;
        double t = 0.0;
        for (const auto& [task_id, entries] : plan.assignments) {
            const auto roles = plan.roles(task_id);
            if (roles->traveler != robot.id) continue;
            const TaskSpec& task = *scenario.find_task(task_id);

            double speed = robot.speed;
            if (roles->operator_) {
                speed *= cfg.shared_speed_multiplier[tier_index(scenario.find_human(*roles->operator_)->skill)];
            }
            const double leg = travel_time(pos, task.location, speed);
            robot_busy.push_back({t, t + leg, task_id, Activity::Travel});
            if (roles->operator_) trace.busy[*roles->operator_].push_back({t, t + leg, task_id, Activity::SharedControl});
            t += leg;
            pos = task.location;

            TaskOutcome out;
            out.task = task_id;
            out.capture_s = t;
            if (roles->analyst) {
                queues[*roles->analyst].push_back({t, task_id, task.difficulty});
            } else {
                out.classifier = robot.id;
                out.probability = robot_accuracy_probability(robot.camera, task.difficulty, std::nullopt, cfg);
                out.correct = decision_draw(cfg.seed, robot.id, task_id) < out.probability;
                out.completion_s = t;
            }
            outcomes.emplace(task_id, std::move(out));
        }
    }

    for (auto& [human_id, jobs] : queues) {
        const HumanProfile& human = *scenario.find_human(human_id);
        std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
            if (a.arrival != b.arrival) return a.arrival < b.arrival;
            return compare_ids(a.task, b.task) < 0;
        });
        auto& busy = trace.busy[human_id];
        std::vector<BusyInterval> controls;
        for (const auto& iv : busy) {
            if (iv.activity == Activity::SharedControl) controls.push_back(iv);
        }
        double free_at = 0.0;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const auto& job = jobs[i];
            const double start = std::max(job.arrival, free_at);
            const double end = start + cfg.analysis_service_s[tier_index(job.difficulty)];
            int load = 0;
            for (std::size_t k = i + 1; k < jobs.size(); ++k) {
                if (jobs[k].arrival <= end) ++load;
            }
            for (const auto& c : controls) {
                if (c.start <= end && end < c.end) ++load;
            }
            auto& out = outcomes.at(job.task);
            out.classifier = human_id;
            out.by_human = true;
            out.probability = human_accuracy_probability(human, end, load, job.difficulty, cfg);
            out.correct = decision_draw(cfg.seed, human_id, job.task) < out.probability;
            out.completion_s = end;
            busy.push_back({start, end, job.task, Activity::Analysis});
            free_at = end;
        }
    }

    auto& perf = result.performance;
    int correct = 0;
    for (auto& [id, out] : outcomes) {
        correct += out.correct ? 1 : 0;
        perf.mission_seconds = std::max(perf.mission_seconds, out.completion_s);
        trace.outcomes.push_back(std::move(out));
    }
    perf.accuracy_points = cfg.points_per_correct * correct;
    for (auto& [agent, intervals] : trace.busy) {
        std::stable_sort(intervals.begin(), intervals.end(),
                         [](const BusyInterval& a, const BusyInterval& b) { return a.start < b.start; });
    }
    if (perf.mission_seconds > 0.0 && !scenario.humans.empty()) {
        double sum = 0.0;
        for (const auto& h : scenario.humans) {
            sum += std::min(1.0, union_length(trace.busy.at(h.id)) / perf.mission_seconds);
        }
        perf.human_utilization = sum / static_cast<double>(scenario.humans.size());
    }
    return result;
}

double travel_lower_bound(const MissionScenario& scenario, const ItaPlan& plan, const SimConfig& cfg) {
    const Point depot = depot_for(scenario, cfg);
    double bound = 0.0;
    for (const auto& robot : scenario.robots) {
        Point pos = depot;
        double t = 0.0;
        for (const auto& [task_id, entries] : plan.assignments) {
            const auto roles = plan.roles(task_id);
            if (!roles || roles->traveler != robot.id) continue;
            const TaskSpec* task = scenario.find_task(task_id);
            if (task == nullptr) continue;
            double speed = robot.speed;
            if (roles->operator_) {
                if (const auto* op = scenario.find_human(*roles->operator_)) {
                    speed *= cfg.shared_speed_multiplier[tier_index(op->skill)];
                }
            }
            t += travel_time(pos, task->location, speed);
            pos = task->location;
        }
        bound = std::max(bound, t);
    }
    return bound;
}

std::string render_trace(const SimTrace& trace) {
    struct Event {
        double t;
        int order;
        std::string line;
    };
    std::vector<Event> events;
    int order = 0;
    for (const auto& [agent, intervals] : trace.busy) {
        for (const auto& iv : intervals) {
            const std::string what(activity_label(iv.activity));
            events.push_back({iv.start, order++, agent + "\t" + what + "_start\t" + iv.task});
            events.push_back({iv.end, order++, agent + "\t" + what + "_end\t" + iv.task});
        }
    }
    for (const auto& o : trace.outcomes) {
        events.push_back({o.completion_s, order++,
                          o.classifier + "\tclassified\t" + o.task + "\tcorrect=" + (o.correct ? "1" : "0") +
                              " p=" + text::format_number(o.probability)});
    }
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return std::tie(a.t, a.order) < std::tie(b.t, b.order);
    });
    std::string out;
    for (const auto& e : events) out += text::format_number(e.t) + "\t" + e.line + "\n";
    return out;
}

}  // namespace rebel::sim
