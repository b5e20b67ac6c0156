#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "rebel/retrieval.hpp"
#include "rebel/rng.hpp"
#include "rebel/scenario_gen.hpp"

using namespace rebel;
using namespace rebel::retrieval;

namespace {

std::vector<RuleEntry> corpus(const std::vector<std::string>& texts, Embedder& embedder,
                              Objective o = Objective::MissionTime) {
    std::vector<RuleEntry> out;
    std::uint64_t id = 1;
    for (const auto& t : texts) out.push_back({id++, o, t, embedder.embed(t)});
    return out;
}

const std::vector<std::string> kToyRules{
    "Assign faster robots to distant tasks.",
    "Skilled humans handle difficult tasks.",
    "Faster robots reduce mission time for faster completion.",
};

// Independent oracle: plain-loop Okapi BM25 from the textbook formula.
double oracle_bm25(const std::string& query, std::size_t doc, const std::vector<std::string>& texts, double k1,
                   double b) {
    std::vector<std::vector<std::string>> docs;
    double total = 0;
    for (const auto& t : texts) {
        docs.push_back(tokenize(t));
        total += static_cast<double>(docs.back().size());
    }
    const double n_docs = static_cast<double>(docs.size());
    const double avg = total / n_docs;
    double score = 0;
    for (const auto& term : tokenize(query)) {
        double n = 0;
        for (const auto& d : docs) n += std::count(d.begin(), d.end(), term) > 0 ? 1 : 0;
        const double tf = static_cast<double>(std::count(docs[doc].begin(), docs[doc].end(), term));
        const double w = std::log((n_docs - n + 0.5) / (n + 0.5));
        score += w * tf * (k1 + 1) / (tf + k1 * (1 - b + b * static_cast<double>(docs[doc].size()) / avg));
    }
    return score;
}

ExperienceRecord record_for(const MissionScenario& s, PerformanceRecord perf, Embedder& e) {
    ExperienceRecord r;
    r.scenario = s;
    for (const auto& t : s.tasks) r.plan.assign(t.id, {s.robots.front().id, std::nullopt, std::nullopt});
    r.performance = perf;
    r.objective = Objective::TaskPerformance;
    r.sections = embed_scenario_sections(s, e);
    return r;
}

}  // namespace

TEST_SUITE("retrieval") {

TEST_CASE("tokenize examples") {
    CHECK(tokenize("Assign faster robots.") == std::vector<std::string>{"assign", "faster", "robots"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("UAV_0, UAV_0") == std::vector<std::string>{"uav", "0", "uav", "0"});
}

TEST_CASE("idf examples and monotonicity") {
    CorpusStats s;
    s.documents = 1;
    s.doc_freq["x"] = 1;
    CHECK(idf("x", s) == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-15));
    s.documents = 3;
    CHECK(idf("x", s) == doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-15));
    for (std::size_t k = 1; k < 20; ++k) {
        s.documents = 2 * k;
        s.doc_freq["x"] = k;
        CHECK(idf("x", s) == 0.0);
    }
    s.documents = 10;
    double prev = INFINITY;
    for (std::size_t n = 0; n <= 10; ++n) {
        s.doc_freq["x"] = n;
        CHECK(idf("x", s) < prev);
        prev = idf("x", s);
    }
}

TEST_CASE("bm25 toy corpus matches the frozen table") {
    HashedEmbedder e;
    const auto rules = corpus(kToyRules, e);
    const auto stats = CorpusStats::build(rules);
    CHECK(stats.documents == 3);
    CHECK(stats.average_length == doctest::Approx(19.0 / 3.0).epsilon(1e-15));
    CHECK(idf("faster", stats) == doctest::Approx(-0.5108256237659907).epsilon(1e-14));
    CHECK(idf("tasks", stats) == doctest::Approx(-0.5108256237659907).epsilon(1e-14));
    CHECK(idf("skilled", stats) == doctest::Approx(0.5108256237659907).epsilon(1e-14));

    struct Row {
        const char* query;
        double scores[3];
    };
    // Frozen from an independent Python evaluation of the formula.
    const Row table[] = {
        {"faster robots", {-1.0464352400597112, 0.0, -1.1295761147654038}},
        {"difficult tasks", {-0.5232176200298556, 0.0, 0.0}},
        {"mission time", {0.0, 0.0, 0.9134764095580069}},
    };
    for (const auto& row : table) {
        const auto q = tokenize(row.query);
        for (std::size_t i = 0; i < 3; ++i) {
            CAPTURE(row.query);
            CAPTURE(i);
            CHECK(std::fabs(bm25_score(q, rules[i], stats, {}) - row.scores[i]) <= 1e-12);
            CHECK(std::fabs(oracle_bm25(row.query, i, kToyRules, 1.5, 0.75) - row.scores[i]) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(bm25_score(tokenize("x"), rules[0], CorpusStats{}, {}), Error);
}

TEST_CASE("bm25 single-term collapse to idf") {
    // Two documents of equal length: |doc| = avg, TF = 1.
    HashedEmbedder e;
    const auto rules = corpus({"alpha beta gamma", "delta epsilon zeta"}, e);
    const auto stats = CorpusStats::build(rules);
    const std::vector<std::string> q{"alpha"};
    CHECK(bm25_score(q, rules[0], stats, {}) == doctest::Approx(idf("alpha", stats)).epsilon(1e-15));
    CHECK(bm25_score(q, rules[1], stats, {}) == 0.0);
}

TEST_CASE("bm25 ignores corpus order") {
    HashedEmbedder e;
    auto rules = corpus({"fast robots go far", "humans analyze images", "robots fly over tasks quickly",
                         "assign skilled humans", "time matters most"},
                        e);
    const auto q = tokenize("robots humans time");
    std::vector<double> base;
    const auto stats = CorpusStats::build(rules);
    for (const auto& r : rules) base.push_back(bm25_score(q, r, stats, {}));
    auto shuffled = rules;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + 2, shuffled.end());
    const auto stats2 = CorpusStats::build(shuffled);
    for (const auto& r : rules) CHECK(bm25_score(q, r, stats2, {}) == base[r.id - 1]);
}

TEST_CASE("an unrelated rule only rescales idf when b = 0") {
    // With b = 0 the saturation term ignores avg length, so a new rule that
    // shares no query token leaves every tf factor alone. The score of a
    // single-term query just rescales by idf_new / idf_old; while the idf
    // keeps its sign the order of the old rules is unchanged.
    HashedEmbedder e;
    const std::vector<std::string> texts{"faster robots save time", "robots robots robots", "humans rest",
                                         "time is short for robots", "robots and humans"};
    auto rules = corpus(texts, e);
    const Bm25Params flat{1.5, 0.0};
    auto scores = [&](const std::vector<RuleEntry>& all, const std::string& term) {
        const auto stats = CorpusStats::build(all);
        std::vector<double> out;
        for (std::size_t i = 0; i < texts.size(); ++i) out.push_back(bm25_score(std::vector<std::string>{term}, all[i], stats, flat) / idf(term, stats));
        return out;
    };
    auto grown = rules;
    grown.push_back({99, Objective::MissionTime, "completely unrelated words here", e.embed("unrelated")});
    for (const std::string term : {"robots", "time", "humans"}) {
        CAPTURE(term);
        const auto before = scores(rules, term);
        const auto after = scores(grown, term);
        for (std::size_t i = 0; i < texts.size(); ++i) CHECK(after[i] == doctest::Approx(before[i]).epsilon(1e-14));

        const double old_idf = idf(term, CorpusStats::build(rules));
        const double new_idf = idf(term, CorpusStats::build(grown));
        if (old_idf * new_idf > 0) {
            for (std::size_t i = 0; i < texts.size(); ++i) {
                for (std::size_t j = 0; j < texts.size(); ++j) {
                    CHECK((before[i] * old_idf < before[j] * old_idf) == (after[i] * new_idf < after[j] * new_idf));
                }
            }
        }
    }
}

TEST_CASE("dense score cases") {
    const Embedding a(std::vector<double>{1, 0, 0});
    const Embedding b(std::vector<double>{0, 1, 0});
    const Embedding c(std::vector<double>{-1, 0, 0});
    CHECK(dense_score(a, a) == 1.0);
    CHECK(dense_score(a, b) == 0.0);
    CHECK(dense_score(a, c) == -1.0);
    CHECK_THROWS_AS(dense_score(a, Embedding(std::vector<double>{1, 0})), Error);

    HashedEmbedder e;
    SplitMix rng(2);
    for (int i = 0; i < 50; ++i) {
        const auto x = e.embed("robot " + std::to_string(rng.below(100)) + " task " + std::to_string(i));
        const auto y = e.embed("human " + std::to_string(rng.below(100)) + " task");
        CHECK(dense_score(x, y) == dense_score(y, x));
        CHECK(dense_score(x, x) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("embeddings are unit norm and the zero vector maps to e0") {
    HashedEmbedder e;
    const auto z = e.embed("... ,,, !!!");
    CHECK(z.dim() == 256);
    CHECK(z.values()[0] == 1.0);
    CHECK(std::accumulate(z.values().begin(), z.values().end(), 0.0) == 1.0);
    const auto v = e.embed("Minimize the overall mission time.");
    const double n = std::sqrt(std::inner_product(v.values().begin(), v.values().end(), v.values().begin(), 0.0));
    CHECK(std::fabs(n - 1.0) <= 1e-9);
    CHECK_THROWS_AS(Embedding::from_stored({0.5, 0.5}), Error);
    CHECK_THROWS_AS(Embedding(std::vector<double>{}), Error);
    CHECK(Embedding::from_stored(v.values()) == v);
}

TEST_CASE("fused score examples and bound") {
    const FusionParams f;
    CHECK(fused_score(1, 1, f) == doctest::Approx(1.0 / 61.0).epsilon(1e-15));
    CHECK(fused_score(1, 2, f) == fused_score(2, 1, f));
    for (std::size_t i = 1; i < 30; ++i) {
        for (std::size_t j = 1; j < 30; ++j) {
            const double s = fused_score(i, j, f);
            CHECK(s > 0.0);
            CHECK(s <= 1.0 / (f.c + 1.0));
        }
    }
}

TEST_CASE("mirrored ranks tie and the lower id wins") {
    // Rule 1 wins the sparse list, rule 2 the dense list.
    std::vector<RuleEntry> rules{
        {1, Objective::MissionTime, "mission mission", Embedding(std::vector<double>{0, 1})},
        {2, Objective::MissionTime, "other words", Embedding(std::vector<double>{1, 0})},
    };
    const auto ranked = rank_rules("mission", rules, Embedding(std::vector<double>{1, 0}), {}, {});
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0].sparse_rank == 1);
    CHECK(ranked[0].dense_rank == 2);
    CHECK(ranked[0].fused == ranked[1].fused);
    CHECK(ranked[0].rule->id == 1);
}

TEST_CASE("top of both lists is retrieved first") {
    HashedEmbedder e;
    RulesDatabase db;
    for (const auto& r : corpus({"humans rest", "to minimize mission time use fast robots", "skilled humans"}, e)) db.store(r);
    const auto got = ensemble_retrieve("minimize mission time", db, 1, {}, {}, e);
    REQUIRE(got.size() == 1);
    CHECK(got[0].text == "to minimize mission time use fast robots");
    CHECK_THROWS_AS(ensemble_retrieve("q", RulesDatabase{}, 1, {}, {}, e), Error);
    CHECK_THROWS_AS(ensemble_retrieve("q", db, 0, {}, {}, e), Error);
}

TEST_CASE("fusion ordering matches a brute-force oracle") {
    HashedEmbedder e;
    const std::vector<std::string> texts{
        "To minimize mission time, send the fastest robot to far tasks.",
        "To maximize mission accuracy, pair skilled humans with difficult tasks.",
        "To minimize human workload, keep humans out of the loop.",
        "Balance mission time against accuracy when robots are slow.",
        "Mission time drops when robots start near their tasks.",
    };
    const auto rules = corpus(texts, e);
    for (const std::string query : {"mission time", "task performance accuracy", "human workload", "MT"}) {
        const auto q_emb = e.embed(query);
        const auto ranked = rank_rules(query, rules, q_emb, {}, {});

        // Oracle: rank each list by counting strictly better entries, then fuse.
        std::vector<double> sparse, dense;
        for (std::size_t i = 0; i < rules.size(); ++i) {
            sparse.push_back(oracle_bm25(query, i, texts, 1.5, 0.75));
            double dot = 0;
            for (std::size_t d = 0; d < q_emb.dim(); ++d) dot += q_emb.values()[d] * rules[i].embedding.values()[d];
            dense.push_back(dot);
        }
        auto rank_of = [&](const std::vector<double>& s, std::size_t i) {
            std::size_t r = 1;
            for (std::size_t j = 0; j < s.size(); ++j) {
                const bool better = std::fabs(s[j] - s[i]) > 1e-12 ? s[j] > s[i] : j < i;
                if (j != i && better) ++r;
            }
            return r;
        };
        std::vector<std::pair<double, std::size_t>> fused;
        for (std::size_t i = 0; i < rules.size(); ++i) {
            fused.push_back({0.5 / (60.0 + static_cast<double>(rank_of(sparse, i))) +
                                 0.5 / (60.0 + static_cast<double>(rank_of(dense, i))),
                             i});
        }
        std::sort(fused.begin(), fused.end(), [](auto a, auto b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
        CAPTURE(query);
        for (std::size_t i = 0; i < rules.size(); ++i) CHECK(ranked[i].rule->id == rules[fused[i].second].id);
    }
}

TEST_CASE("rule retrieval is deterministic") {
    HashedEmbedder e;
    RulesDatabase db;
    for (const auto& r : corpus(kToyRules, e)) db.store(r);
    const auto a = ensemble_retrieve("faster robots", db, 3, {}, {}, e);
    const auto b = ensemble_retrieve("faster robots", db, 3, {}, {}, e);
    CHECK(a == b);
}

TEST_CASE("section embeddings") {
    HashedEmbedder e;
    const auto s = fixtures::paper_scenario();
    auto other = s;
    other.tasks[0].difficulty = Tier::Low;
    const auto a = embed_scenario_sections(s, e);
    const auto b = embed_scenario_sections(other, e);
    CHECK(a.humans == b.humans);
    CHECK(a.robots == b.robots);
    CHECK_FALSE(a.tasks == b.tasks);
    CHECK(dense_score(a.humans, a.humans) + dense_score(a.robots, a.robots) + dense_score(a.tasks, a.tasks) ==
          doctest::Approx(3.0).epsilon(1e-12));
    auto reordered = s;
    std::reverse(reordered.robots.begin(), reordered.robots.end());
    CHECK(embed_scenario_sections(reordered, e).robots == a.robots);
}

TEST_CASE("experience retrieval examples") {
    HashedEmbedder e;
    std::vector<ExperienceRecord> records;
    for (std::uint64_t i = 0; i < 6; ++i) {
        auto r = record_for(bench::random_scenario(bench::TeamSpec{{1, 3}, {1, 3}, {1, 5}}, i),
                            {10.0 * static_cast<double>(i % 4), 100.0 + static_cast<double>(i), 0.1}, e);
        r.id = i + 1;
        records.push_back(std::move(r));
    }
    const auto query_scenario = records[3].scenario;
    const auto q = embed_scenario_sections(query_scenario, e);
    const auto tp = PreferenceVector::single(Objective::TaskPerformance);

    // The query itself scores 3.0 and is in the Top-k.
    const auto top = rank_experiences(q, tp, records, 3, 3);
    CHECK(std::any_of(top.begin(), top.end(), [](const ScoredExperience& s) { return s.record->id == 4; }));
    for (const auto& s : top) {
        if (s.record->id == 4) CHECK(s.similarity == doctest::Approx(3.0).epsilon(1e-12));
    }

    // k = e, m = 1 picks the global best J (A_m = 30 for ids 4; tie-free).
    const auto best = rank_experiences(q, tp, records, records.size(), 1);
    REQUIRE(best.size() == 1);
    CHECK(best[0].record->id == 4);

    // Top-k set equals the exhaustive similarity ranking.
    for (std::size_t k = 1; k <= records.size(); ++k) {
        std::vector<std::pair<double, std::uint64_t>> all;
        for (const auto& r : records) {
            double sim = 0;
            for (auto [x, y] : {std::pair{&q.humans, &r.sections.humans}, std::pair{&q.robots, &r.sections.robots},
                                std::pair{&q.tasks, &r.sections.tasks}}) {
                sim += std::inner_product(x->values().begin(), x->values().end(), y->values().begin(), 0.0);
            }
            all.push_back({sim, r.id});
        }
        std::sort(all.begin(), all.end(), [](auto a, auto b) {
            return std::fabs(a.first - b.first) > 1e-12 ? a.first > b.first : a.second < b.second;
        });
        std::vector<std::uint64_t> expect, got;
        for (std::size_t i = 0; i < k; ++i) expect.push_back(all[i].second);
        for (const auto& s : rank_experiences(q, tp, records, k, k)) got.push_back(s.record->id);
        std::sort(expect.begin(), expect.end());
        std::sort(got.begin(), got.end());
        CHECK(got == expect);
    }

    // k = m = e returns a permutation of the database.
    std::vector<std::uint64_t> ids;
    for (const auto& s : rank_experiences(q, tp, records, 6, 6)) ids.push_back(s.record->id);
    std::sort(ids.begin(), ids.end());
    CHECK(ids == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6});

    CHECK_THROWS_AS(rank_experiences(q, tp, {}, 3, 2), Error);
    CHECK_THROWS_AS(rank_experiences(q, tp, records, 2, 3), Error);
}

TEST_CASE("re-ranking orders by aggregate J and reports it") {
    HashedEmbedder e;
    const auto s = fixtures::paper_scenario();
    std::vector<ExperienceRecord> records;
    const PerformanceRecord perfs[] = {{10, 300, 0.5}, {10, 100, 0.5}, {10, 200, 0.5}};
    for (std::uint64_t i = 0; i < 3; ++i) {
        auto r = record_for(s, perfs[i], e);
        r.id = i + 1;
        records.push_back(std::move(r));
    }
    const auto ranked = rank_experiences(embed_scenario_sections(s, e), PreferenceVector::single(Objective::MissionTime),
                                         records, 3, 3);
    CHECK(ranked[0].record->id == 2);
    CHECK(ranked[1].record->id == 3);
    CHECK(ranked[2].record->id == 1);
    CHECK(ranked[0].aggregate == 1.0);
    CHECK(ranked[1].aggregate == 0.5);
    CHECK(ranked[2].aggregate == 0.0);
    // Equal J falls back to ascending id.
    const auto tp = rank_experiences(embed_scenario_sections(s, e), PreferenceVector::single(Objective::TaskPerformance),
                                     records, 3, 3);
    CHECK(tp[0].record->id == 1);
    CHECK(tp[2].record->id == 3);
}

TEST_CASE("rules database persists, dedups and replaces") {
    const auto dir = fixtures::temp_dir("rules");
    const auto path = dir / "rules.jsonl";
    HashedEmbedder e;
    std::vector<std::uint64_t> ids;
    {
        RulesDatabase db(path);
        for (const auto& r : corpus(kToyRules, e)) ids.push_back(db.store(r));
        CHECK(ids[0] < ids[1]);
        CHECK(ids[1] < ids[2]);
        CHECK(db.store({0, Objective::MissionTime, kToyRules[0], e.embed(kToyRules[0])}) == ids[0]);
        CHECK(db.store({0, Objective::TaskPerformance, kToyRules[0], e.embed(kToyRules[0])}) > ids[2]);
        CHECK(db.size() == 4);
        CHECK(db.active(Objective::MissionTime).size() == 3);
        CHECK_THROWS_AS(db.store({0, Objective::MissionTime, "  ", e.embed("x")}), Error);
        CHECK_THROWS_AS(db.store({0, Objective::MissionTime, "no embedding", Embedding{}}), Error);
    }
    RulesDatabase reloaded(path);
    CHECK(reloaded.size() == 4);
    CHECK(reloaded.active(Objective::MissionTime)[0].text == kToyRules[0]);
    CHECK(reloaded.active(Objective::MissionTime)[0].embedding == e.embed(kToyRules[0]));

    const std::vector<RuleEntry> replacement{{0, Objective::MissionTime, "new rule", e.embed("new rule")}};
    CHECK(reloaded.replace_objective(Objective::MissionTime, replacement));
    CHECK_FALSE(reloaded.replace_objective(Objective::MissionTime, replacement));
    CHECK(reloaded.active(Objective::MissionTime).size() == 1);
    CHECK(reloaded.active(Objective::TaskPerformance).size() == 1);

    RulesDatabase again(path);
    CHECK(again.active() == reloaded.active());
    CHECK(again.serialized_lines() == reloaded.serialized_lines());
    CHECK(again.active(Objective::MissionTime)[0].id > ids[2]);
    std::filesystem::remove_all(dir);
}

TEST_CASE("experience database round-trips bit-exactly") {
    const auto dir = fixtures::temp_dir("exp");
    const auto path = dir / "exp.jsonl";
    HashedEmbedder e;
    std::vector<ExperienceRecord> stored;
    {
        ExperienceDatabase db(path);
        SplitMix rng(1);
        for (std::uint64_t i = 0; i < 5; ++i) {
            auto s = bench::random_scenario(bench::TeamSpec{{1, 3}, {1, 3}, {1, 6}}, i);
            for (auto& r : s.robots) r.speed = rng.uniform(1, 20);
            auto r = record_for(s, {rng.uniform(0, 30), rng.uniform(0, 3000), rng.uniform()}, e);
            r.fallback = i % 2 == 1;
            const auto id = db.store(r);
            CHECK(id == i + 1);
            stored = db.snapshot();
        }
        ExperienceRecord bad = stored.front();
        bad.plan.assignments.clear();
        CHECK_THROWS_AS(db.store(bad), Error);
    }
    ExperienceDatabase back(path);
    CHECK(back.snapshot() == stored);
    CHECK(back.serialized_lines() == ExperienceDatabase(path).serialized_lines());
    for (const auto& r : stored) CHECK(experience_from_line(experience_to_line(r)) == r);
    std::filesystem::remove_all(dir);
}

TEST_CASE("corrupt database lines are reported") {
    const auto dir = fixtures::temp_dir("corrupt");
    {
        std::ofstream(dir / "r.jsonl") << "{not json\n";
    }
    CHECK_THROWS_AS(RulesDatabase(dir / "r.jsonl"), Error);
    CHECK_THROWS_AS(experience_from_line("{\"id\": 1}"), Error);
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
