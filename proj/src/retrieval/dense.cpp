#include <cmath>
#include <numeric>

#include "rebel/rng.hpp"
#include "rebel/retrieval.hpp"
#include "rebel/text_format.hpp"

namespace rebel::retrieval {
namespace {

double norm(const std::vector<double>& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

}  // namespace

Embedding::Embedding(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error("embedding must have positive dimension");
    for (double x : values_) {
        if (!std::isfinite(x)) throw Error("embedding contains a non-finite value");
    }
    const double n = norm(values_);
    if (n == 0.0) {
        values_.front() = 1.0;
        return;
    }
    for (auto& x : values_) x /= n;
}

Embedding Embedding::from_stored(std::vector<double> values) {
    if (values.empty()) throw Error("stored embedding is empty");
    if (std::abs(norm(values) - 1.0) > 1e-9) throw Error("stored embedding is not unit-norm");
    Embedding e;
    e.values_ = std::move(values);
    return e;
}

Embedding HashedEmbedder::embed(std::string_view text) {
    std::vector<double> v(dim_, 0.0);
    for (const auto& token : tokenize(text)) v[fnv1a(token) % dim_] += 1.0;
    return Embedding(std::move(v));
}

double dense_score(const Embedding& q, const Embedding& d) {
    if (q.dim() != d.dim()) {
        throw Error("embedding dimension mismatch (" + std::to_string(q.dim()) + " vs " + std::to_string(d.dim()) + ")");
    }
    const auto& a = q.values();
    const auto& b = d.values();
    const double dot = std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
    return dot / (norm(a) * norm(b));
}

SectionEmbeddings embed_scenario_sections(const MissionScenario& scenario, Embedder& embedder) {
    return {embedder.embed(text::render_humans(scenario)), embedder.embed(text::render_robots(scenario)),
            embedder.embed(text::render_tasks(scenario))};
}

}  // namespace rebel::retrieval
