#include <cmath>
#include <unordered_set>

#include "rebel/retrieval.hpp"

namespace rebel::retrieval {

CorpusStats CorpusStats::build(std::span<const RuleEntry> corpus) {
    CorpusStats stats;
    stats.documents = corpus.size();
    std::size_t total = 0;
    for (const auto& rule : corpus) {
        const auto tokens = tokenize(rule.text);
        total += tokens.size();
        std::unordered_set<std::string> distinct(tokens.begin(), tokens.end());
        for (const auto& t : distinct) ++stats.doc_freq[t];
    }
    if (!corpus.empty()) stats.average_length = static_cast<double>(total) / static_cast<double>(corpus.size());
    return stats;
}

std::size_t CorpusStats::frequency(const std::string& term) const {
    auto it = doc_freq.find(term);
    return it == doc_freq.end() ? 0 : it->second;
}

double idf(const std::string& term, const CorpusStats& stats) {
    const double n = static_cast<double>(stats.frequency(term));
    const double total = static_cast<double>(stats.documents);
    return std::log((total - n + 0.5) / (n + 0.5));
}

double bm25_score(std::span<const std::string> query_tokens, const RuleEntry& rule, const CorpusStats& stats,
                  const Bm25Params& params) {
    if (stats.documents == 0) throw Error("bm25 over an empty corpus");
    const auto doc = tokenize(rule.text);
    const double length = static_cast<double>(doc.size());
    double score = 0.0;
    for (const auto& term : query_tokens) {
        std::size_t tf = 0;
        for (const auto& t : doc) tf += (t == term) ? 1 : 0;
        if (tf == 0) continue;
        const double f = static_cast<double>(tf);
        const double norm = 1.0 - params.b + params.b * length / stats.average_length;
        score += idf(term, stats) * f * (params.k1 + 1.0) / (f + params.k1 * norm);
    }
    return score;
}

}  // namespace rebel::retrieval
