#include <algorithm>
#include <limits>
#include <numeric>

#include "rebel/llm.hpp"

namespace rebel::llm {
namespace {

struct Option {
    std::size_t robot = 0;
    std::optional<std::size_t> human;
    bool shared = false;

    double probability = 0.0;
    double arrival = 0.0;     // robot clock after the leg
    double completion = 0.0;  // classification done
    double human_s = 0.0;     // human seconds spent on the task
};

struct Job {
    double arrival;
    double end;
};

class Planner {
public:
    Planner(const MissionScenario& s, const sim::SimConfig& cfg) : s_(s), cfg_(cfg) {
        const Point depot = cfg.depot.value_or(Point{s.arena_side / 2.0, s.arena_side / 2.0});
        pos_.assign(s.robots.size(), depot);
        clock_.assign(s.robots.size(), 0.0);
        free_.assign(s.humans.size(), 0.0);
        jobs_.resize(s.humans.size());
    }

    Option autonomous(const TaskSpec& task, std::size_t r) const {
        const auto& robot = s_.robots[r];
        Option o;
        o.robot = r;
        o.arrival = clock_[r] + sim::travel_time(pos_[r], task.location, robot.speed);
        o.completion = o.arrival;
        o.probability = sim::robot_accuracy_probability(robot.camera, task.difficulty, std::nullopt, cfg_);
        return o;
    }

    Option with_human(const TaskSpec& task, std::size_t r, std::size_t h, bool shared) const {
        const auto& robot = s_.robots[r];
        const auto& human = s_.humans[h];
        double speed = robot.speed;
        if (shared) speed *= cfg_.shared_speed_multiplier[tier_index(human.skill)];
        Option o;
        o.robot = r;
        o.human = h;
        o.shared = shared;
        const double leg = sim::travel_time(pos_[r], task.location, speed);
        o.arrival = clock_[r] + leg;
        const double service = cfg_.analysis_service_s[tier_index(task.difficulty)];
        o.completion = std::max(o.arrival, free_[h]) + service;
        int load = 0;
        for (const auto& j : jobs_[h]) {
            if (j.arrival > o.arrival && j.arrival <= o.completion) ++load;
        }
        o.probability = sim::human_accuracy_probability(human, o.completion, load, task.difficulty, cfg_);
        o.human_s = service + (shared ? leg : 0.0);
        return o;
    }

    std::vector<Option> options(const TaskSpec& task, bool humans) const {
        std::vector<Option> out;
        for (std::size_t r = 0; r < s_.robots.size(); ++r) {
            out.push_back(autonomous(task, r));
            if (!humans) continue;
            for (std::size_t h = 0; h < s_.humans.size(); ++h) out.push_back(with_human(task, r, h, false));
            for (std::size_t h = 0; h < s_.humans.size(); ++h) out.push_back(with_human(task, r, h, true));
        }
        return out;
    }

    double makespan_after(const Option& o) const { return std::max(makespan_, o.completion); }

    void commit(const TaskSpec& task, const Option& o, ItaPlan& plan) {
        pos_[o.robot] = task.location;
        clock_[o.robot] = o.arrival;
        makespan_ = std::max(makespan_, o.completion);
        TaskRoles roles{s_.robots[o.robot].id, std::nullopt, std::nullopt};
        if (o.human) {
            free_[*o.human] = std::max(free_[*o.human], o.completion);
            jobs_[*o.human].push_back({o.arrival, o.completion});
            roles.analyst = s_.humans[*o.human].id;
            if (o.shared) roles.operator_ = roles.analyst;
        }
        plan.assign(task.id, roles);
    }

private:
    const MissionScenario& s_;
    const sim::SimConfig& cfg_;
    std::vector<Point> pos_;
    std::vector<double> clock_;
    std::vector<double> free_;
    std::vector<std::vector<Job>> jobs_;
    double makespan_ = 0.0;
};

// Weighted sum of min-max normalized proxies; the first maximum wins.
std::size_t best_weighted(const std::vector<Option>& opts, const Planner& planner, double w_tp, double w_mt,
                          double w_hw) {
    auto unit = [](double v, double lo, double hi, bool larger_better) {
        if (hi - lo <= 0.0) return 1.0;
        const double x = (v - lo) / (hi - lo);
        return larger_better ? x : 1.0 - x;
    };
    double p_lo = 1e300, p_hi = -1e300, t_lo = 1e300, t_hi = -1e300, h_lo = 1e300, h_hi = -1e300;
    for (const auto& o : opts) {
        const double t = planner.makespan_after(o);
        p_lo = std::min(p_lo, o.probability), p_hi = std::max(p_hi, o.probability);
        t_lo = std::min(t_lo, t), t_hi = std::max(t_hi, t);
        h_lo = std::min(h_lo, o.human_s), h_hi = std::max(h_hi, o.human_s);
    }
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < opts.size(); ++i) {
        const auto& o = opts[i];
        const double score = w_tp * unit(o.probability, p_lo, p_hi, true) +
                             w_mt * unit(planner.makespan_after(o), t_lo, t_hi, false) +
                             w_hw * unit(o.human_s, h_lo, h_hi, false);
        if (score > best_score) best = i, best_score = score;
    }
    return best;
}

std::size_t soonest(const std::vector<Option>& opts) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < opts.size(); ++i) {
        if (opts[i].completion < opts[best].completion) best = i;
    }
    return best;
}

}  // namespace

ItaPlan heuristic_allocate(const MissionScenario& input, const PreferenceVector& prefs, const sim::SimConfig& model) {
    if (input.robots.empty()) throw Error("heuristic allocation needs at least one robot");
    if (!is_runnable(input)) throw Error("scenario is not runnable: " + scenario_problems(input).front());
    if (prefs.empty()) throw Error("heuristic allocation needs a preference vector");

    MissionScenario s = input;
    s.canonicalize();
    Planner planner(s, model);
    ItaPlan plan;
    const auto dominant = prefs.dominant();
    const double w_tp = prefs.weight(Objective::TaskPerformance);
    const double w_mt = prefs.weight(Objective::MissionTime);
    const double w_hw = prefs.weight(Objective::HumanWorkload);

    if (dominant == Objective::TaskPerformance) {
        // Hardest first so the strongest analysts are still fresh for them.
        std::vector<const TaskSpec*> order;
        for (const auto& t : s.tasks) order.push_back(&t);
        std::stable_sort(order.begin(), order.end(),
                         [](const TaskSpec* a, const TaskSpec* b) { return a->difficulty > b->difficulty; });
        for (const TaskSpec* task : order) {
            const auto opts = planner.options(*task, false);
            std::size_t r_best = 0;
            for (std::size_t i = 1; i < opts.size(); ++i) {
                const auto& a = opts[i];
                const auto& b = opts[r_best];
                if (a.probability > b.probability || (a.probability == b.probability && a.arrival < b.arrival)) {
                    r_best = i;
                }
            }
            Option pick = opts[r_best];
            // Shared control rides on a best-camera robot; compare the best human against onboard.
            for (std::size_t h = 0; h < s.humans.size(); ++h) {
                const auto candidate = planner.with_human(*task, opts[r_best].robot, h, true);
                if (candidate.probability > pick.probability) pick = candidate;
            }
            planner.commit(*task, pick, plan);
        }
        return plan;
    }

    for (const auto& task : s.tasks) {
        std::vector<Option> opts;
        std::size_t pick = 0;
        if (dominant == Objective::MissionTime) {
            opts = planner.options(task, false);
            pick = soonest(opts);
        } else if (dominant == Objective::HumanWorkload) {
            opts = planner.options(task, false);
            pick = (w_tp + w_mt > 0.0) ? best_weighted(opts, planner, w_tp, w_mt, 0.0) : soonest(opts);
        } else {
            opts = planner.options(task, true);
            pick = best_weighted(opts, planner, w_tp, w_mt, w_hw);
        }
        planner.commit(task, opts[pick], plan);
    }
    return plan;
}

}  // namespace rebel::llm
