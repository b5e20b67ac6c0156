#include "rebel/llm.hpp"
#include "rebel/prompt.hpp"
#include "rebel/text_format.hpp"

namespace rebel::llm {
namespace {

std::string bullets(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) out += "- " + l + "\n";
    return out;
}

Objective leading_objective(const PreferenceVector& prefs) {
    if (auto d = prefs.dominant()) return *d;
    auto best = prefs.weights().front();
    for (const auto& w : prefs.weights()) {
        if (w.second > best.second) best = w;
    }
    return best.first;
}

}  // namespace

const std::vector<std::string>& canned_rules(Objective o) {
    static const std::vector<std::string> tp{
        "To maximize mission accuracy, assign skilled humans to difficult tasks.",
        "To maximize mission accuracy, pair high-cognition analysts with hard captures and keep their queues short.",
        "To maximize mission accuracy, let robots with the best cameras classify easy tasks onboard.",
    };
    static const std::vector<std::string> mt{
        "To minimize mission time, assign each task to the robot that can reach it soonest.",
        "To minimize mission time, balance route lengths so no single robot finishes last.",
        "To minimize mission time, prefer onboard classification over waiting in analyst queues.",
    };
    static const std::vector<std::string> hw{
        "To minimize human workload, prefer robot-autonomous classification for every task.",
        "To minimize human workload, avoid shared control unless accuracy cannot be met otherwise.",
        "To minimize human workload, spread any human analysis evenly across the team.",
    };
    switch (o) {
        case Objective::TaskPerformance: return tp;
        case Objective::MissionTime: return mt;
        case Objective::HumanWorkload: return hw;
    }
    return tp;
}

StubProvider::StubProvider(Mode mode, sim::SimConfig model) : mode_(mode), model_(std::move(model)) {}

std::string StubProvider::name() const {
    switch (mode_) {
        case Mode::Heuristic: return "stub-heuristic";
        case Mode::CopyExemplar: return "stub-copy";
        case Mode::Prose: return "stub-prose";
        case Mode::Empty: return "stub-empty";
    }
    return "stub";
}

std::size_t StubProvider::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

std::string StubProvider::complete(const CompletionRequest& request) {
    request.check();
    {
        std::lock_guard lock(mutex_);
        ++calls_;
    }
    if (mode_ == Mode::Empty) return {};

    prompt::SpfPrompt p;
    try {
        p = prompt::parse_prompt(request.prompt);
    } catch (const Error&) {
        return {};
    }

    if (p.goal == prompt::kRefinementGoal) return bullets(p.rules);
    if (p.goal == prompt::kRuleGenerationGoal) {
        return bullets(canned_rules(leading_objective(prompt::preferences_from_lines(p.objectives))));
    }
    if (!p.scenario) return {};
    if (mode_ == Mode::Prose) {
        return "Considering the team, I would split the points of interest between the robots "
               "and keep the operators available for the harder captures.";
    }
    if (mode_ == Mode::CopyExemplar) {
        for (const auto& e : p.prior_experience) {
            if (e.scenario == *p.scenario) return text::render_plan(e.plan);
        }
    }
    const auto prefs = prompt::preferences_from_lines(p.objectives);
    return text::render_plan(heuristic_allocate(*p.scenario, prefs, model_));
}

}  // namespace rebel::llm
