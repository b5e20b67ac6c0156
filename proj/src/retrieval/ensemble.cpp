#include <algorithm>
#include <numeric>

#include "rebel/retrieval.hpp"

namespace rebel::retrieval {
namespace {

/// 1-based rank of each index when ordered by score desc, id asc.
std::vector<std::size_t> ranks_by(const std::vector<double>& scores, std::span<const RuleEntry> corpus) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return corpus[a].id < corpus[b].id;
    });
    std::vector<std::size_t> rank(scores.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos + 1;
    return rank;
}

}  // namespace

double fused_score(std::size_t sparse_rank, std::size_t dense_rank, const FusionParams& params) {
    return params.alpha / (params.c + static_cast<double>(sparse_rank)) +
           (1.0 - params.alpha) / (params.c + static_cast<double>(dense_rank));
}

std::vector<RankedRule> rank_rules(std::string_view query, std::span<const RuleEntry> corpus,
                                   const Embedding& query_embedding, const FusionParams& fusion,
                                   const Bm25Params& bm25) {
    if (corpus.empty()) throw Error("rule retrieval over an empty database");
    if (!(fusion.alpha >= 0.0 && fusion.alpha <= 1.0) || !(fusion.c > 0.0)) {
        throw Error("fusion needs alpha in [0,1] and c > 0");
    }
    const auto stats = CorpusStats::build(corpus);
    const auto query_tokens = tokenize(query);

    std::vector<double> sparse(corpus.size()), dense(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        sparse[i] = bm25_score(query_tokens, corpus[i], stats, bm25);
        dense[i] = dense_score(query_embedding, corpus[i].embedding);
    }
    const auto sparse_rank = ranks_by(sparse, corpus);
    const auto dense_rank = ranks_by(dense, corpus);

    std::vector<RankedRule> out(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        out[i] = {&corpus[i], sparse[i], dense[i], sparse_rank[i], dense_rank[i],
                  fused_score(sparse_rank[i], dense_rank[i], fusion)};
    }
    std::sort(out.begin(), out.end(), [](const RankedRule& a, const RankedRule& b) {
        if (a.fused != b.fused) return a.fused > b.fused;
        return a.rule->id < b.rule->id;
    });
    return out;
}

std::vector<RuleEntry> ensemble_retrieve(std::string_view query, const RulesDatabase& db, std::size_t k,
                                         const FusionParams& fusion, const Bm25Params& bm25, Embedder& embedder) {
    if (k == 0) throw Error("rule retrieval needs k >= 1");
    const auto corpus = db.active();
    if (corpus.empty()) throw Error("rule retrieval over an empty database");
    const auto ranked = rank_rules(query, corpus, embedder.embed(query), fusion, bm25);
    std::vector<RuleEntry> out;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.push_back(*ranked[i].rule);
    return out;
}

}  // namespace rebel::retrieval
