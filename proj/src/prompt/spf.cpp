#include <algorithm>
#include <cctype>
#include <cstdio>
#include <regex>

#include "rebel/prompt.hpp"
#include "rebel/text_format.hpp"

namespace rebel::prompt {
namespace {

constexpr std::string_view kExampleLabel = "Example ";
constexpr std::string_view kPlanLabel = "ITA Plan";

void section(std::string& out, std::string_view heading, const std::vector<std::string>& lines) {
    out += heading;
    out += '\n';
    for (const auto& l : lines) {
        out += "  ";
        out += l;
        out += '\n';
    }
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.emplace_back(line);
        pos = end + 1;
    }
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

std::size_t indent_of(std::string_view line) {
    std::size_t n = 0;
    while (n < line.size() && line[n] == ' ') ++n;
    return n;
}

std::string_view phrase(Objective o) {
    switch (o) {
        case Objective::TaskPerformance: return "mission accuracy";
        case Objective::MissionTime: return "mission time";
        case Objective::HumanWorkload: return "human workload";
    }
    return "";
}

std::string_view verb(Objective o) { return objective_direction(o) == Direction::Maximize ? "Maximize" : "Minimize"; }

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<Exemplar> parse_exemplars(const std::vector<std::string>& lines) {
    std::vector<Exemplar> out;
    std::string scenario_text, plan_text;
    std::optional<PerformanceRecord> perf;
    bool in_example = false, in_plan = false;
    auto flush = [&] {
        if (!in_example) return;
        Exemplar e;
        e.scenario = text::parse_scenario(scenario_text);
        e.plan = text::parse_plan(plan_text, e.scenario);
        e.performance = perf;
        out.push_back(std::move(e));
        scenario_text.clear();
        plan_text.clear();
        perf.reset();
        in_plan = false;
    };
    for (const auto& raw : lines) {
        const auto line = text::trim(raw);
        if (line.empty()) continue;
        const auto indent = indent_of(raw);
        if (indent <= 2 && line.starts_with(kExampleLabel)) {
            flush();
            in_example = true;
        } else if (!in_example) {
            throw Error("prior experience content outside an example: '" + std::string(line) + "'");
        } else if (line == kPlanLabel) {
            in_plan = true;
        } else if (line.starts_with("Performance:")) {
            perf = text::parse_performance(line);
        } else if (in_plan && indent > 4) {
            plan_text += std::string(line) + "\n";
        } else {
            in_plan = false;
            scenario_text += std::string(line) + "\n";
        }
    }
    flush();
    return out;
}

}  // namespace

std::string objective_line(Objective o) {
    return std::string(verb(o)) + " the overall " + std::string(phrase(o)) + ".";
}

std::vector<std::string> objective_lines(const PreferenceVector& prefs) {
    auto weights = prefs.weights();
    std::stable_sort(weights.begin(), weights.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> out;
    for (const auto& [o, w] : weights) {
        if (w == 0.0) continue;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", w);
        out.push_back(std::string(verb(o)) + " " + std::string(phrase(o)) + " (weight = " + buf + ")");
    }
    return out;
}

std::string build_prompt(const SpfPrompt& c) {
    if (text::trim(c.goal).empty()) throw Error("prompt goal must be non-empty");
    if (c.objectives.empty()) throw Error("prompt objectives must be non-empty");

    std::string out;
    if (c.scenario) {
        section(out, kScenarioHeading, split_lines(text::render_scenario(*c.scenario)));
    } else {
        section(out, kBackgroundHeading, split_lines(c.background));
    }
    section(out, kGoalHeading, split_lines(c.goal));
    section(out, kObjectivesHeading, c.objectives);
    if (!c.rules.empty()) section(out, kRulesHeading, c.rules);
    if (!c.prior_experience.empty()) {
        out += kExperienceHeading;
        out += '\n';
        for (std::size_t i = 0; i < c.prior_experience.size(); ++i) {
            const auto& e = c.prior_experience[i];
            out += "  " + std::string(kExampleLabel) + std::to_string(i + 1) + "\n";
            for (const auto& l : split_lines(text::render_scenario(e.scenario))) out += "    " + l + "\n";
            out += "    " + std::string(kPlanLabel) + "\n";
            for (const auto& l : split_lines(text::render_plan(e.plan))) out += "      " + l + "\n";
            if (e.performance) out += "    " + text::render_performance(*e.performance) + "\n";
        }
    }
    return out;
}

SpfPrompt parse_prompt(std::string_view text) {
    static const std::vector<std::string_view> headings{kBackgroundHeading, kScenarioHeading, kGoalHeading,
                                                        kObjectivesHeading, kRulesHeading,    kExperienceHeading};
    std::map<std::string, std::vector<std::string>, std::less<>> sections;
    std::string current;
    for (const auto& line : split_lines(text)) {
        const bool heading = !line.empty() && line.front() != ' ' &&
                             std::find(headings.begin(), headings.end(), std::string_view(line)) != headings.end();
        if (heading) {
            current = line;
            sections[current];
        } else if (!current.empty()) {
            sections[current].push_back(line);
        } else if (!text::trim(line).empty()) {
            throw Error("prompt text before the first section: '" + line + "'");
        }
    }
    auto body = [&](std::string_view heading) {
        std::vector<std::string> out;
        if (auto it = sections.find(heading); it != sections.end()) {
            for (const auto& l : it->second) {
                if (!text::trim(l).empty()) out.emplace_back(l.size() >= 2 ? l.substr(2) : text::trim(l));
            }
        }
        return out;
    };
    auto joined = [&](std::string_view heading) {
        std::string out;
        for (const auto& l : body(heading)) out += (out.empty() ? "" : "\n") + l;
        return out;
    };

    SpfPrompt p;
    if (sections.contains(kScenarioHeading)) {
        p.scenario = text::parse_scenario(joined(kScenarioHeading));
    } else {
        p.background = joined(kBackgroundHeading);
    }
    p.goal = joined(kGoalHeading);
    p.objectives = body(kObjectivesHeading);
    p.rules = body(kRulesHeading);
    if (auto it = sections.find(kExperienceHeading); it != sections.end()) p.prior_experience = parse_exemplars(it->second);
    return p;
}

PreferenceVector preferences_from_lines(const std::vector<std::string>& lines) {
    static const std::regex weight_re(R"(weight\s*=\s*([0-9]*\.?[0-9]+))");
    std::vector<std::pair<Objective, double>> weights;
    for (const auto& raw : lines) {
        const auto l = lower(raw);
        std::optional<Objective> o;
        if (l.find("accuracy") != std::string::npos || l.find("task performance") != std::string::npos) {
            o = Objective::TaskPerformance;
        } else if (l.find("mission time") != std::string::npos) {
            o = Objective::MissionTime;
        } else if (l.find("workload") != std::string::npos) {
            o = Objective::HumanWorkload;
        }
        if (!o) continue;
        double w = 1.0;
        if (std::smatch m; std::regex_search(l, m, weight_re)) w = text::parse_number(m[1].str());
        weights.emplace_back(*o, w);
    }
    if (weights.empty()) throw Error("no recognizable objective lines");
    return PreferenceVector(std::move(weights));
}

}  // namespace rebel::prompt
