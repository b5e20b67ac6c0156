#include <fstream>
#include <mutex>

#include "json.hpp"

#include "rebel/retrieval.hpp"
#include "rebel/text_format.hpp"

namespace rebel::retrieval {
namespace {

using nlohmann::json;

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::vector<std::string> lines;
    if (path.empty() || !std::filesystem::exists(path)) return lines;
    std::ifstream in(path);
    if (!in) throw Error("cannot read database " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

void append_to_file(const std::filesystem::path& path, const std::string& line) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::app);
    out << line << '\n';
    out.flush();
    if (!out) throw Error("cannot append to database " + path.string());
}

json embedding_json(const Embedding& e) { return json(e.values()); }

Embedding embedding_from(const json& j) { return Embedding::from_stored(j.get<std::vector<double>>()); }

json parse_json_line(std::string_view line) {
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw Error(std::string("corrupt database line: ") + e.what());
    }
}

}  // namespace

std::string rule_to_line(const RuleEntry& r) {
    json j;
    j["id"] = r.id;
    j["objective"] = std::string(objective_code(r.objective));
    j["text"] = r.text;
    j["embedding"] = embedding_json(r.embedding);
    return j.dump();
}

std::string experience_to_line(const ExperienceRecord& r) {
    json j;
    j["id"] = r.id;
    j["objective"] = std::string(objective_code(r.objective));
    j["fallback"] = r.fallback;
    j["scenario"] = text::render_scenario(r.scenario);
    j["plan"] = text::render_plan(r.plan);
    j["performance"] = {{"A_m", r.performance.accuracy_points},
                        {"T_m", r.performance.mission_seconds},
                        {"U_h", r.performance.human_utilization}};
    j["embeddings"] = {{"h", embedding_json(r.sections.humans)},
                       {"r", embedding_json(r.sections.robots)},
                       {"t", embedding_json(r.sections.tasks)}};
    return j.dump();
}

ExperienceRecord experience_from_line(std::string_view line) {
    const auto j = parse_json_line(line);
    try {
        ExperienceRecord r;
        r.id = j.at("id").get<std::uint64_t>();
        r.objective = parse_objective(j.at("objective").get<std::string>());
        r.fallback = j.at("fallback").get<bool>();
        r.scenario = text::parse_scenario(j.at("scenario").get<std::string>());
        r.plan = text::parse_plan(j.at("plan").get<std::string>(), r.scenario);
        const auto& p = j.at("performance");
        r.performance = {p.at("A_m").get<double>(), p.at("T_m").get<double>(), p.at("U_h").get<double>()};
        const auto& e = j.at("embeddings");
        r.sections = {embedding_from(e.at("h")), embedding_from(e.at("r")), embedding_from(e.at("t"))};
        return r;
    } catch (const json::exception& e) {
        throw Error(std::string("corrupt experience line: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

RulesDatabase::RulesDatabase(std::filesystem::path path) : path_(std::move(path)) {
    for (const auto& line : read_lines(path_)) apply(line);
}

void RulesDatabase::apply(const std::string& line) {
    const auto j = parse_json_line(line);
    try {
        if (j.contains("retire")) {
            const auto objective = parse_objective(j.at("retire").get<std::string>());
            const auto through = j.at("through").get<std::uint64_t>();
            for (std::size_t i = 0; i < rules_.size(); ++i) {
                if (rules_[i].objective == objective && rules_[i].id <= through) retired_[i] = true;
            }
        } else {
            RuleEntry r;
            r.id = j.at("id").get<std::uint64_t>();
            r.objective = parse_objective(j.at("objective").get<std::string>());
            r.text = j.at("text").get<std::string>();
            r.embedding = embedding_from(j.at("embedding"));
            next_id_ = std::max(next_id_, r.id + 1);
            rules_.push_back(std::move(r));
            retired_.push_back(false);
        }
    } catch (const json::exception& e) {
        throw Error(std::string("corrupt rule line: ") + e.what());
    }
    lines_.push_back(line);
}

void RulesDatabase::append_line(const std::string& line) {
    append_to_file(path_, line);
    apply(line);
}

std::uint64_t RulesDatabase::store(const RuleEntry& entry) {
    if (text::trim(entry.text).empty()) throw Error("rule text must be non-empty");
    if (entry.embedding.empty()) throw Error("rule needs an embedding");
    std::unique_lock lock(mutex_);
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (!retired_[i] && rules_[i].objective == entry.objective && rules_[i].text == entry.text) return rules_[i].id;
    }
    RuleEntry stored = entry;
    stored.id = next_id_;
    append_line(rule_to_line(stored));
    return stored.id;
}

bool RulesDatabase::replace_objective(Objective objective, const std::vector<RuleEntry>& replacement) {
    for (const auto& r : replacement) {
        if (text::trim(r.text).empty()) throw Error("rule text must be non-empty");
        if (r.embedding.empty()) throw Error("rule needs an embedding");
    }
    std::unique_lock lock(mutex_);
    std::vector<std::string> current, proposed;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (!retired_[i] && rules_[i].objective == objective) current.push_back(rules_[i].text);
    }
    for (const auto& r : replacement) {
        if (std::find(proposed.begin(), proposed.end(), r.text) == proposed.end()) proposed.push_back(r.text);
    }
    if (current == proposed) return false;

    json retire;
    retire["retire"] = std::string(objective_code(objective));
    retire["through"] = next_id_ - 1;
    append_line(retire.dump());
    std::vector<std::string> written;
    for (const auto& r : replacement) {
        if (std::find(written.begin(), written.end(), r.text) != written.end()) continue;
        RuleEntry stored = r;
        stored.objective = objective;
        stored.id = next_id_;
        append_line(rule_to_line(stored));
        written.push_back(r.text);
    }
    return true;
}

std::vector<RuleEntry> RulesDatabase::active() const {
    std::shared_lock lock(mutex_);
    std::vector<RuleEntry> out;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (!retired_[i]) out.push_back(rules_[i]);
    }
    return out;
}

std::vector<RuleEntry> RulesDatabase::active(Objective objective) const {
    auto all = active();
    std::erase_if(all, [&](const RuleEntry& r) { return r.objective != objective; });
    return all;
}

std::size_t RulesDatabase::size() const { return active().size(); }

std::vector<std::string> RulesDatabase::serialized_lines() const {
    std::shared_lock lock(mutex_);
    return lines_;
}

// ---------------------------------------------------------------------------

ExperienceDatabase::ExperienceDatabase(std::filesystem::path path) : path_(std::move(path)) {
    for (const auto& line : read_lines(path_)) {
        auto record = experience_from_line(line);
        next_id_ = std::max(next_id_, record.id + 1);
        records_.push_back(std::move(record));
        lines_.push_back(line);
    }
}

std::uint64_t ExperienceDatabase::store(ExperienceRecord record) {
    if (auto v = validate_plan(record.plan, record.scenario); !v.ok()) {
        throw Error("experience plan does not validate: " + v.violations.front());
    }
    if (record.sections.humans.empty() || record.sections.robots.empty() || record.sections.tasks.empty()) {
        throw Error("experience needs all three section embeddings");
    }
    std::unique_lock lock(mutex_);
    record.id = next_id_++;
    auto line = experience_to_line(record);
    append_to_file(path_, line);
    lines_.push_back(std::move(line));
    records_.push_back(std::move(record));
    return records_.back().id;
}

std::vector<ExperienceRecord> ExperienceDatabase::snapshot() const {
    std::shared_lock lock(mutex_);
    return records_;
}

std::size_t ExperienceDatabase::size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
}

std::vector<std::string> ExperienceDatabase::serialized_lines() const {
    std::shared_lock lock(mutex_);
    return lines_;
}

}  // namespace rebel::retrieval
