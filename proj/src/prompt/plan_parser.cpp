#include <regex>

#include "rebel/prompt.hpp"
#include "rebel/text_format.hpp"

namespace rebel::prompt {

ItaPlan parse_ita_plan(std::string_view text, const MissionScenario& scenario, const ParseOptions& options) {
    // Bullets, numbering and markdown emphasis around the task id are tolerated.
    static const std::regex lenient(R"(^\s*(?:[-*+]\s+|\d+[.)]\s+)?\**\s*(T_[A-Za-z0-9_]+)\s*\**\s*:\s*\**\s*\(([^()]*)\))");
    static const std::regex exact(R"(^\s*(T_[A-Za-z0-9_]+)\s*:\s*\(([^()]*)\)\s*$)");

    std::map<std::string, std::vector<std::string>, IdLess> tuples;
    std::vector<std::string> violations;
    std::size_t matched = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        if (text::trim(line).empty()) continue;

        std::smatch m;
        const bool ok = options.strict ? std::regex_match(line, m, exact) : std::regex_search(line, m, lenient);
        if (!ok) {
            if (options.strict) {
                throw PlanParseError(PlanParseError::Kind::ParseFailure, "not an assignment line: '" + line + "'");
            }
            continue;
        }
        ++matched;
        const std::string task = m[1].str();
        auto agents = text::split_top_level(m[2].str());
        std::erase_if(agents, [](const std::string& a) { return a.empty(); });
        auto [it, inserted] = tuples.emplace(task, agents);
        if (!inserted && it->second != agents) violations.push_back(task + " assigned twice with different agents");
    }
    if (matched == 0) throw PlanParseError(PlanParseError::Kind::ParseFailure, "no assignment lines found");

    ItaPlan plan;
    for (const auto& [task, agents] : tuples) {
        std::string problem;
        if (auto roles = text::roles_from_tuple(agents, scenario, problem)) {
            plan.assign(task, *roles);
        } else {
            violations.push_back(task + " " + problem);
        }
    }
    for (const auto& t : scenario.tasks) {
        if (!tuples.contains(t.id)) violations.push_back(t.id + " unassigned");
    }
    for (auto& v : validate_plan(plan, scenario).violations) {
        if (std::find(violations.begin(), violations.end(), v) == violations.end()) violations.push_back(std::move(v));
    }
    if (!violations.empty()) {
        std::string message = "plan invalid: " + violations.front();
        if (violations.size() > 1) message += " (+" + std::to_string(violations.size() - 1) + " more)";
        throw PlanParseError(PlanParseError::Kind::PlanInvalid, std::move(message), std::move(violations));
    }
    return plan;
}

}  // namespace rebel::prompt
