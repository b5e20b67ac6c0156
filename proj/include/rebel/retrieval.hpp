#pragma once

// Rules and experience databases with hybrid rule retrieval (BM25 + dense
// cosine, fused by weighted reciprocal rank) and sectioned experience
// retrieval with performance re-ranking.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rebel/core.hpp"

namespace rebel::retrieval {

/// Lowercased alphanumeric runs.
std::vector<std::string> tokenize(std::string_view text);

// ---------------------------------------------------------------------------
// Embeddings

class Embedding {
public:
    Embedding() = default;
    /// L2-normalizes `values`; an all-zero vector becomes the first basis vector.
    explicit Embedding(std::vector<double> values);
    /// Keeps `values` bit for bit. Throws unless the norm is 1 within 1e-9.
    static Embedding from_stored(std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    std::size_t dim() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    friend bool operator==(const Embedding&, const Embedding&) = default;

private:
    std::vector<double> values_;
};

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual Embedding embed(std::string_view text) = 0;
    virtual std::string name() const = 0;
};

/// Hashed term-frequency vector: each token increments bucket
/// fnv1a(token) mod dim, then the vector is L2-normalized.
class HashedEmbedder final : public Embedder {
public:
    explicit HashedEmbedder(std::size_t dim = 256) : dim_(dim) {}
    Embedding embed(std::string_view text) override;
    std::string name() const override { return "hashed-tf-" + std::to_string(dim_); }

private:
    std::size_t dim_;
};

/// Cosine similarity; throws on dimension mismatch.
double dense_score(const Embedding& q, const Embedding& d);

// ---------------------------------------------------------------------------
// Rules and sparse scoring

struct RuleEntry {
    std::uint64_t id = 0;
    Objective objective = Objective::TaskPerformance;
    std::string text;
    Embedding embedding;
    friend bool operator==(const RuleEntry&, const RuleEntry&) = default;
};

struct CorpusStats {
    std::size_t documents = 0;                              // N
    std::unordered_map<std::string, std::size_t> doc_freq;  // n(t)
    double average_length = 0.0;                            // avg(gamma)

    static CorpusStats build(std::span<const RuleEntry> corpus);
    std::size_t frequency(const std::string& term) const;
};

struct Bm25Params {
    double k1 = 1.5;
    double b = 0.75;
};

struct FusionParams {
    double alpha = 0.5;  // share given to the sparse ranking
    double c = 60.0;
};

/// ln((N - n(t) + 0.5) / (n(t) + 0.5)); may be negative for common terms.
double idf(const std::string& term, const CorpusStats& stats);

/// Sum over query tokens (duplicates included) of the BM25 term contribution.
double bm25_score(std::span<const std::string> query_tokens, const RuleEntry& rule, const CorpusStats& stats,
                  const Bm25Params& params);

struct RankedRule {
    const RuleEntry* rule = nullptr;
    double sparse = 0.0;
    double dense = 0.0;
    std::size_t sparse_rank = 0;  // 1 = best
    std::size_t dense_rank = 0;
    double fused = 0.0;
};

/// alpha / (c + sparse_rank) + (1 - alpha) / (c + dense_rank)
double fused_score(std::size_t sparse_rank, std::size_t dense_rank, const FusionParams& params);

/// Every rule with both ranks and its fused score, best first; all ties by id.
std::vector<RankedRule> rank_rules(std::string_view query, std::span<const RuleEntry> corpus,
                                   const Embedding& query_embedding, const FusionParams& fusion,
                                   const Bm25Params& bm25);

// ---------------------------------------------------------------------------
// Databases

/// Append-only, one JSON object per line. Rule lines carry their embedding;
/// a "supersede" line retires every earlier rule of one objective, which is
/// how a refined rule set replaces its predecessor without rewriting history.
/// With an empty path the database lives in memory only.
class RulesDatabase {
public:
    RulesDatabase() = default;
    explicit RulesDatabase(std::filesystem::path path);

    /// Appends an active rule, or returns the id of an active rule with the
    /// same objective and exact text.
    std::uint64_t store(const RuleEntry& entry);

    /// Retires the objective's current rules and stores `replacement`.
    /// No-op (returns false) if the active texts already equal `replacement`.
    bool replace_objective(Objective objective, const std::vector<RuleEntry>& replacement);

    std::vector<RuleEntry> active() const;
    std::vector<RuleEntry> active(Objective objective) const;
    std::size_t size() const;
    bool empty() const { return size() == 0; }

    const std::filesystem::path& path() const { return path_; }
    /// The exact file lines this database would write for its history.
    std::vector<std::string> serialized_lines() const;

private:
    void append_line(const std::string& line);
    void apply(const std::string& line);

    std::filesystem::path path_;
    mutable std::shared_mutex mutex_;
    std::vector<RuleEntry> rules_;
    std::vector<bool> retired_;
    std::vector<std::string> lines_;
    std::uint64_t next_id_ = 1;
};

struct SectionEmbeddings {
    Embedding humans;
    Embedding robots;
    Embedding tasks;
    friend bool operator==(const SectionEmbeddings&, const SectionEmbeddings&) = default;
};

SectionEmbeddings embed_scenario_sections(const MissionScenario& scenario, Embedder& embedder);

struct ExperienceRecord {
    std::uint64_t id = 0;
    MissionScenario scenario;
    ItaPlan plan;
    PerformanceRecord performance;
    Objective objective = Objective::TaskPerformance;
    SectionEmbeddings sections;
    bool fallback = false;  // plan came from the heuristic fallback, not the model
    friend bool operator==(const ExperienceRecord&, const ExperienceRecord&) = default;
};

class ExperienceDatabase {
public:
    ExperienceDatabase() = default;
    explicit ExperienceDatabase(std::filesystem::path path);

    std::uint64_t store(ExperienceRecord record);
    std::vector<ExperienceRecord> snapshot() const;
    std::size_t size() const;
    bool empty() const { return size() == 0; }

    const std::filesystem::path& path() const { return path_; }
    std::vector<std::string> serialized_lines() const;

private:
    std::filesystem::path path_;
    mutable std::shared_mutex mutex_;
    std::vector<ExperienceRecord> records_;
    std::vector<std::string> lines_;
    std::uint64_t next_id_ = 1;
};

std::string experience_to_line(const ExperienceRecord& r);
ExperienceRecord experience_from_line(std::string_view line);
std::string rule_to_line(const RuleEntry& r);

// ---------------------------------------------------------------------------
// Retrieval operations

/// Top-k active rules for `query` by fused rank.
std::vector<RuleEntry> ensemble_retrieve(std::string_view query, const RulesDatabase& db, std::size_t k,
                                         const FusionParams& fusion, const Bm25Params& bm25, Embedder& embedder);

struct ScoredExperience {
    const ExperienceRecord* record = nullptr;
    double similarity = 0.0;  // sum of the three section cosines
    double aggregate = 0.0;   // J under the query preferences
};

/// Top-k records by summed section similarity, re-ranked by aggregate
/// objective (bounds taken over those k) and truncated to m.
std::vector<ScoredExperience> rank_experiences(const SectionEmbeddings& query, const PreferenceVector& prefs,
                                               std::span<const ExperienceRecord> records, std::size_t k,
                                               std::size_t m);

std::vector<ExperienceRecord> retrieve_experiences(const MissionScenario& scenario, const PreferenceVector& prefs,
                                                   const ExperienceDatabase& db, std::size_t k, std::size_t m,
                                                   Embedder& embedder);

}  // namespace rebel::retrieval
