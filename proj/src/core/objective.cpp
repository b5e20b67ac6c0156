#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "rebel/core.hpp"
#include "rebel/text_format.hpp"

namespace rebel {

std::string_view objective_code(Objective o) {
    switch (o) {
        case Objective::TaskPerformance: return "TP";
        case Objective::MissionTime: return "MT";
        case Objective::HumanWorkload: return "HW";
    }
    return "?";
}

Objective parse_objective(std::string_view text) {
    std::string s;
    for (char c : text::trim(text)) {
        if (std::isalnum(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    if (s == "TP" || s == "TASKPERFORMANCE") return Objective::TaskPerformance;
    if (s == "MT" || s == "MISSIONTIME") return Objective::MissionTime;
    if (s == "HW" || s == "HUMANWORKLOAD") return Objective::HumanWorkload;
    throw Error("unknown objective '" + std::string(text) + "'");
}

Direction objective_direction(Objective o) {
    return o == Objective::TaskPerformance ? Direction::Maximize : Direction::Minimize;
}

PreferenceVector::PreferenceVector(std::vector<std::pair<Objective, double>> weights) : weights_(std::move(weights)) {
    std::sort(weights_.begin(), weights_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double w = weights_[i].second;
        if (!std::isfinite(w) || w < 0.0 || w > 1.0) throw Error("preference weight must lie in [0,1]");
        if (i > 0 && weights_[i - 1].first == weights_[i].first) {
            throw Error("objective " + std::string(objective_code(weights_[i].first)) + " listed twice");
        }
        sum += w;
    }
    if (weights_.empty() || !(sum > 0.0)) throw Error("preference weights must have a positive sum");
    if (sum != 1.0) {
        for (auto& [o, w] : weights_) w /= sum;
    }
}

PreferenceVector PreferenceVector::parse(std::string_view text) {
    std::vector<std::pair<Objective, double>> out;
    for (const auto& piece : text::split_top_level(text)) {
        if (piece.empty()) continue;
        const auto eq = piece.find('=');
        if (eq == std::string::npos) {
            out.emplace_back(parse_objective(piece), 1.0);
        } else {
            out.emplace_back(parse_objective(std::string_view(piece).substr(0, eq)),
                             text::parse_number(text::trim(std::string_view(piece).substr(eq + 1))));
        }
    }
    return PreferenceVector(std::move(out));
}

double PreferenceVector::weight(Objective o) const {
    for (const auto& [obj, w] : weights_) {
        if (obj == o) return w;
    }
    return 0.0;
}

std::optional<Objective> PreferenceVector::dominant() const {
    for (const auto& [o, w] : weights_) {
        if (w < 0.5) continue;
        const bool strict = std::all_of(weights_.begin(), weights_.end(),
                                        [&](const auto& other) { return other.first == o || other.second < w; });
        if (strict) return o;
    }
    return std::nullopt;
}

std::string PreferenceVector::to_string() const {
    std::string out;
    for (const auto& [o, w] : weights_) {
        if (!out.empty()) out += ',';
        out += objective_code(o);
        out += '=';
        out += text::format_number(w);
    }
    return out;
}

double PerformanceRecord::metric(Objective o) const {
    switch (o) {
        case Objective::TaskPerformance: return accuracy_points;
        case Objective::MissionTime: return mission_seconds;
        case Objective::HumanWorkload: return human_utilization;
    }
    return 0.0;
}

void NormalizationBounds::set(Objective o, ObjectiveBounds b) {
    if (!(b.min < b.max) || !std::isfinite(b.min) || !std::isfinite(b.max)) {
        throw Error("normalization bounds need finite min < max");
    }
    bounds_[o] = b;
}

const ObjectiveBounds* NormalizationBounds::find(Objective o) const {
    auto it = bounds_.find(o);
    return it == bounds_.end() ? nullptr : &it->second;
}

NormalizationBounds NormalizationBounds::empirical(std::span<const PerformanceRecord> batch) {
    NormalizationBounds out;
    if (batch.empty()) throw Error("cannot derive normalization bounds from an empty batch");
    for (Objective o : kAllObjectives) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& r : batch) {
            lo = std::min(lo, r.metric(o));
            hi = std::max(hi, r.metric(o));
        }
        if (!(lo < hi)) {
            lo -= 0.5;
            hi += 0.5;
        }
        out.set(o, {lo, hi, objective_direction(o)});
    }
    return out;
}

double normalize_objective(double value, const ObjectiveBounds& b) {
    if (!std::isfinite(value)) throw Error("cannot normalize a non-finite value");
    const double span = b.max - b.min;
    const double u = b.direction == Direction::Maximize ? (value - b.min) / span : (b.max - value) / span;
    return std::clamp(u, 0.0, 1.0);
}

double aggregate_objective(const PerformanceRecord& record, const PreferenceVector& prefs,
                           const NormalizationBounds& bounds) {
    double j = 0.0;
    for (const auto& [o, w] : prefs.weights()) {
        if (w == 0.0) continue;
        const auto* b = bounds.find(o);
        if (b == nullptr) throw Error("no normalization bounds for objective " + std::string(objective_code(o)));
        j += w * normalize_objective(record.metric(o), *b);
    }
    return j;
}

}  // namespace rebel
