#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "dyadscope/error.hpp"
#include "dyadscope/topics.hpp"
#include "support/oracles.hpp"

using namespace dyadscope;

namespace {

std::vector<Document> docs_from_tokens(const std::vector<std::vector<std::string>>& tokens) {
    std::vector<Document> docs;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        Document d;
        d.id = "doc" + std::to_string(i);
        d.source_transcript = d.id;
        d.tokens = tokens[i];
        docs.push_back(std::move(d));
    }
    return docs;
}

std::vector<std::vector<double>> random_dense(std::mt19937& rng, std::size_t max_rows,
                                              std::size_t max_cols) {
    const std::size_t n = 2 + rng() % (max_rows - 1);
    const std::size_t m = 2 + rng() % (max_cols - 1);
    std::vector<std::vector<double>> dense(n, std::vector<double>(m));
    for (auto& row : dense)
        for (double& v : row) v = 0.05 + static_cast<double>(rng() % 1000) / 1000.0;
    return dense;
}

}  // namespace

TEST_CASE("tfidf matches hand-computed anchors on the toy corpus") {
    // d0 = [money, school], d1 = [money, money, home], d2 = [school]
    auto result = build_tfidf(docs_from_tokens({{"money", "school"},
                                                {"money", "money", "home"},
                                                {"school"}}));
    const auto& vocab = result.vocabulary;
    REQUIRE(vocab.terms == std::vector<std::string>{"home", "money", "school"});
    CHECK(vocab.document_frequency == std::vector<std::size_t>{1, 2, 2});

    const auto& x = result.matrix;
    REQUIRE(x.n_docs == 3);
    // equal idf cancels under normalization: both d0 entries are 1/sqrt(2)
    CHECK(x.entry(0, 1) == doctest::Approx(0.7071067811865475).epsilon(1e-12));
    CHECK(x.entry(0, 2) == doctest::Approx(0.7071067811865475).epsilon(1e-12));
    CHECK(x.entry(0, 0) == 0.0);
    // a single-term document normalizes to exactly 1
    CHECK(x.entry(2, 2) == 1.0);

    SUBCASE("the full matrix equals the reference formula") {
        std::vector<std::string> oracle_vocab;
        auto oracle = oracles::reference_tfidf({{"money", "school"},
                                                {"money", "money", "home"},
                                                {"school"}},
                                               1, 1.0, &oracle_vocab);
        REQUIRE(oracle_vocab == vocab.terms);
        for (std::size_t d = 0; d < 3; ++d) {
            const auto& row = oracle.at("doc" + std::to_string(d));
            for (std::size_t t = 0; t < vocab.size(); ++t)
                CHECK(x.entry(d, t) == doctest::Approx(row[t]).epsilon(1e-12));
        }
    }
}

TEST_CASE("a term present in every document has idf exactly 1") {
    // N = 4; "common" everywhere, "rare" only in doc0.
    auto result = build_tfidf(docs_from_tokens(
        {{"common", "rare"}, {"common"}, {"common"}, {"common"}}));
    const auto& x = result.matrix;
    const std::size_t common = result.vocabulary.index.at("common");
    const std::size_t rare = result.vocabulary.index.at("rare");
    // idf(rare) = ln(5/2) + 1; idf(common) = ln(5/5) + 1 = 1, so the
    // in-row ratio equals idf(rare) directly.
    CHECK(x.entry(0, rare) / x.entry(0, common) ==
          doctest::Approx(1.9162907318741551).epsilon(1e-12));
    CHECK(x.entry(1, common) == 1.0);
}

TEST_CASE("tfidf equals the reference oracle on randomized corpora") {
    std::mt19937 rng(1234);
    const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f", "g", "h"};
    for (int round = 0; round < 20; ++round) {
        const std::size_t n_docs = 1 + rng() % 5;
        std::vector<std::vector<std::string>> docs(n_docs);
        bool any = false;
        for (auto& doc : docs) {
            const std::size_t n_tokens = rng() % 12;
            for (std::size_t t = 0; t < n_tokens; ++t) doc.push_back(pool[rng() % pool.size()]);
            any |= !doc.empty();
        }
        if (!any) docs[0].push_back("a");
        const std::size_t min_df = 1 + rng() % 2;
        const double max_df_ratio = 0.5 + 0.5 * static_cast<double>(rng() % 2);

        TfidfResult result;
        std::vector<std::string> oracle_vocab;
        std::map<std::string, std::vector<double>> oracle;
        bool built = true;
        try {
            result = build_tfidf(docs_from_tokens(docs), min_df, max_df_ratio);
        } catch (const InputError&) {
            built = false;
        }
        oracle = oracles::reference_tfidf(docs, min_df, max_df_ratio, &oracle_vocab);
        if (!built) {
            CHECK(oracle_vocab.empty());
            continue;
        }
        REQUIRE(result.vocabulary.terms == oracle_vocab);
        for (std::size_t d = 0; d < n_docs; ++d) {
            const auto& row = oracle.at("doc" + std::to_string(d));
            double norm2 = 0.0;
            for (std::size_t t = 0; t < oracle_vocab.size(); ++t) {
                CHECK(std::abs(result.matrix.entry(d, t) - row[t]) <= 1e-12);
                norm2 += row[t] * row[t];
            }
            if (norm2 > 0.0) CHECK(std::sqrt(norm2) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("df thresholds drop terms before weighting") {
    auto docs = docs_from_tokens({{"a", "b"}, {"a", "c"}, {"a", "d"}});
    SUBCASE("min_df") {
        auto result = build_tfidf(docs, 2, 1.0);
        CHECK(result.vocabulary.terms == std::vector<std::string>{"a"});
    }
    SUBCASE("max_df_ratio") {
        auto result = build_tfidf(docs, 1, 0.5);
        CHECK(result.vocabulary.terms == std::vector<std::string>{"b", "c", "d"});
    }
    SUBCASE("nothing survives") { CHECK_THROWS_AS(build_tfidf(docs, 5, 1.0), InputError); }
}

TEST_CASE("build_tfidf rejects empty input") {
    CHECK_THROWS_AS(build_tfidf({}), InputError);
    CHECK_THROWS_AS(build_tfidf(docs_from_tokens({{}, {}})), InputError);
}

TEST_CASE("nmf objective trace never increases") {
    std::mt19937 rng(7);
    for (int round = 0; round < 10; ++round) {
        auto x = oracles::make_matrix(random_dense(rng, 30, 40));
        const std::size_t k = 1 + rng() % std::min<std::size_t>(8, std::min(x.n_docs, x.n_terms));
        for (double alpha : {0.0, 0.1, 1.0}) {
            for (double r : {0.0, 0.5, 1.0}) {
                NmfParams params;
                params.k = k;
                params.alpha = alpha;
                params.l1_ratio = r;
                params.max_iter = 40;
                params.tol = 0.0;
                params.seed = 100 + round;
                params.init = round % 2 == 0 ? NmfInit::RandomSeeded : NmfInit::Nndsvd;
                auto model = nmf_fit(x, params);
                REQUIRE(model.objective_trace.size() >= 2);
                for (std::size_t i = 1; i < model.objective_trace.size(); ++i) {
                    CHECK(model.objective_trace[i] <= model.objective_trace[i - 1] + 1e-10);
                }
            }
        }
    }
}

TEST_CASE("factors stay nonnegative after every update step") {
    std::mt19937 rng(21);
    auto x = oracles::make_matrix(random_dense(rng, 12, 10));
    for (std::size_t steps = 1; steps <= 5; ++steps) {
        NmfParams params;
        params.k = 3;
        params.alpha = 0.5;
        params.l1_ratio = 0.5;
        params.max_iter = steps;
        params.tol = 0.0;
        params.seed = 9;
        params.init = NmfInit::RandomSeeded;
        auto model = nmf_fit(x, params);
        for (double v : model.w.data()) CHECK(v >= 0.0);
        for (double v : model.h.data()) CHECK(v >= 0.0);
    }
}

TEST_CASE("identical inputs and seed give bitwise identical fits") {
    std::mt19937 rng(33);
    auto x = oracles::make_matrix(random_dense(rng, 15, 12));
    NmfParams params;
    params.k = 4;
    params.alpha = 0.1;
    params.l1_ratio = 0.5;
    params.max_iter = 60;
    params.tol = 0.0;
    params.seed = 4242;
    for (NmfInit init : {NmfInit::RandomSeeded, NmfInit::Nndsvd}) {
        params.init = init;
        auto a = nmf_fit(x, params);
        auto b = nmf_fit(x, params);
        REQUIRE(a.objective_trace.size() == b.objective_trace.size());
        CHECK(std::memcmp(a.objective_trace.data(), b.objective_trace.data(),
                          a.objective_trace.size() * sizeof(double)) == 0);
        CHECK(a.w.data() == b.w.data());
        CHECK(a.h.data() == b.h.data());
    }
}

TEST_CASE("rank-1 matrices are recovered to high accuracy") {
    const std::vector<double> u = {1.0, 2.0, 3.0, 0.5, 1.5};
    const std::vector<double> v = {0.8, 0.4, 1.2, 2.0};
    std::vector<std::vector<double>> dense(u.size(), std::vector<double>(v.size()));
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) dense[i][j] = u[i] * v[j];
    auto x = oracles::make_matrix(dense);

    for (NmfInit init : {NmfInit::Nndsvd, NmfInit::RandomSeeded}) {
        NmfParams params;
        params.k = 1;
        params.alpha = 0.0;
        params.max_iter = 200;
        params.tol = 0.0;
        params.seed = 5;
        params.init = init;
        auto model = nmf_fit(x, params);
        CHECK(oracles::frobenius_residual(x, model.w, model.h) < 1e-6);
    }
}

TEST_CASE("block-diagonal structure is recovered as topic supports") {
    // two disjoint 3x3 blocks; supports are the unique structure
    std::vector<std::vector<double>> dense = {
        {3.0, 2.5, 2.8, 0.0, 0.0, 0.0}, {2.6, 3.1, 2.4, 0.0, 0.0, 0.0},
        {2.9, 2.2, 3.3, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.9, 1.5, 1.7},
        {0.0, 0.0, 0.0, 1.4, 2.0, 1.6}, {0.0, 0.0, 0.0, 1.8, 1.3, 2.1}};
    auto x = oracles::make_matrix(dense);

    Vocabulary vocab;
    for (std::size_t t = 0; t < 6; ++t) {
        vocab.index.emplace("t" + std::to_string(t), t);
        vocab.terms.push_back("t" + std::to_string(t));
        vocab.document_frequency.push_back(1);
    }

    NmfParams params;
    params.k = 2;
    params.alpha = 0.0;
    params.max_iter = 300;
    params.tol = 0.0;
    params.init = NmfInit::Nndsvd;
    auto model = nmf_fit(x, params);

    const std::set<std::string> block_a = {"t0", "t1", "t2"};
    const std::set<std::string> block_b = {"t3", "t4", "t5"};
    std::vector<std::set<std::string>> supports;
    for (std::size_t topic = 0; topic < 2; ++topic) {
        std::set<std::string> support;
        for (const auto& [term, weight] : top_terms(model, vocab, topic, 3)) support.insert(term);
        supports.push_back(std::move(support));
    }
    const bool matches = (supports[0] == block_a && supports[1] == block_b) ||
                         (supports[0] == block_b && supports[1] == block_a);
    CHECK(matches);

    SUBCASE("document assignments follow the blocks") {
        auto assigned = assign_documents(model);
        const std::size_t first = assigned.at("doc0").topic;
        const std::size_t second = assigned.at("doc3").topic;
        CHECK(first != second);
        for (int d : {0, 1, 2}) {
            CHECK(assigned.at("doc" + std::to_string(d)).topic == first);
            CHECK_FALSE(assigned.at("doc" + std::to_string(d)).unassigned);
        }
        for (int d : {3, 4, 5}) CHECK(assigned.at("doc" + std::to_string(d)).topic == second);
    }
}

TEST_CASE("scaling X by a constant scales the objective quadratically") {
    std::mt19937 rng(55);
    auto dense = random_dense(rng, 8, 6);
    auto x = oracles::make_matrix(dense);

    auto scaled_dense = dense;
    for (auto& row : scaled_dense)
        for (double& v : row) v *= 4.0;
    auto x4 = oracles::make_matrix(scaled_dense);

    NmfParams params;
    params.k = 3;
    params.alpha = 0.0;
    params.max_iter = 30;
    params.tol = 0.0;
    params.seed = 11;
    params.init = NmfInit::RandomSeeded;

    auto model = nmf_fit(x, params);
    auto model4 = nmf_fit(x4, params);

    SUBCASE("whole trace scales by c^2 (powers of two are exact)") {
        REQUIRE(model.objective_trace.size() == model4.objective_trace.size());
        for (std::size_t i = 0; i < model.objective_trace.size(); ++i)
            CHECK(model4.objective_trace[i] ==
                  doctest::Approx(16.0 * model.objective_trace[i]).epsilon(1e-13));
    }
    SUBCASE("objective of a scaled fixed pair scales by c^2") {
        Matrix w2 = model.w, h2 = model.h;
        for (double& v : w2.data()) v *= 2.0;
        for (double& v : h2.data()) v *= 2.0;
        CHECK(nmf_objective(x4, w2, h2, 0.0, 0.5) ==
              doctest::Approx(16.0 * nmf_objective(x, model.w, model.h, 0.0, 0.5))
                  .epsilon(1e-13));
    }
    SUBCASE("top_terms ranking is scale invariant") {
        Vocabulary vocab;
        for (std::size_t t = 0; t < x.n_terms; ++t) {
            vocab.index.emplace("t" + std::to_string(t), t);
            vocab.terms.push_back("t" + std::to_string(t));
            vocab.document_frequency.push_back(1);
        }
        for (std::size_t topic = 0; topic < params.k; ++topic) {
            auto a = top_terms(model, vocab, topic, x.n_terms);
            auto b = top_terms(model4, vocab, topic, x.n_terms);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].first == b[i].first);
        }
    }
}

TEST_CASE("raising alpha at l1_ratio 1 never grows the l1 mass") {
    std::mt19937 rng(66);
    std::vector<std::vector<double>> dense(12, std::vector<double>(10));
    for (auto& row : dense)
        for (double& v : row) v = 0.05 + static_cast<double>(rng() % 1000) / 1000.0;
    auto x = oracles::make_matrix(dense);

    double previous = -1.0;
    for (double alpha : {0.0, 0.25, 0.5, 1.0, 2.0}) {
        NmfParams params;
        params.k = 3;
        params.alpha = alpha;
        params.l1_ratio = 1.0;
        params.max_iter = 400;
        params.tol = 1e-9;
        params.seed = 3;
        params.init = NmfInit::RandomSeeded;
        auto model = nmf_fit(x, params);
        double l1 = 0.0;
        for (double v : model.w.data()) l1 += v;
        for (double v : model.h.data()) l1 += v;
        if (previous >= 0.0) CHECK(l1 <= previous + 1e-9);
        previous = l1;
    }
}

TEST_CASE("top_terms orders by weight with lexicographic ties") {
    NmfModel model;
    model.params.k = 1;
    model.h = Matrix(1, 3);
    Vocabulary vocab;
    for (const auto& term : {"home", "money", "school"}) {
        vocab.index.emplace(term, vocab.terms.size());
        vocab.terms.push_back(term);
        vocab.document_frequency.push_back(1);
    }
    model.h.at(0, 0) = 0.1;   // home
    model.h.at(0, 1) = 0.9;   // money
    model.h.at(0, 2) = 0.0;   // school

    SUBCASE("descending weights") {
        auto rows = top_terms(model, vocab, 0, 2);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0] == std::pair<std::string, double>{"money", 0.9});
        CHECK(rows[1] == std::pair<std::string, double>{"home", 0.1});
    }
    SUBCASE("n beyond the vocabulary returns everything") {
        CHECK(top_terms(model, vocab, 0, 10).size() == 3);
    }
    SUBCASE("ties break lexicographically") {
        model.h.at(0, 0) = 0.5;
        model.h.at(0, 1) = 0.5;
        auto rows = top_terms(model, vocab, 0, 2);
        CHECK(rows[0].first == "home");
        CHECK(rows[1].first == "money");
    }
    SUBCASE("topic index is validated") {
        CHECK_THROWS_AS(top_terms(model, vocab, 5, 2), InputError);
    }
}

TEST_CASE("assign_documents takes the argmax with deterministic ties") {
    NmfModel model;
    model.params.k = 3;
    model.w = Matrix(3, 3);
    model.doc_ids = {"a", "b", "c"};
    model.w.at(0, 0) = 0.2;
    model.w.at(0, 1) = 0.7;
    model.w.at(0, 2) = 0.1;
    // row 1 all zero; row 2 tie between topics 1 and 2
    model.w.at(2, 1) = 0.4;
    model.w.at(2, 2) = 0.4;

    auto assigned = assign_documents(model);
    CHECK(assigned.at("a").topic == 1);
    CHECK_FALSE(assigned.at("a").unassigned);
    CHECK(assigned.at("b").topic == 0);
    CHECK(assigned.at("b").unassigned);
    CHECK(assigned.at("c").topic == 1);  // lowest index wins the tie
}

TEST_CASE("nmf_fit validates its inputs") {
    auto x = oracles::make_matrix({{1.0, 0.5}, {0.25, 1.0}});
    NmfParams params;
    params.k = 3;  // > min(n, m)
    CHECK_THROWS_AS(nmf_fit(x, params), InputError);
    params.k = 0;
    CHECK_THROWS_AS(nmf_fit(x, params), InputError);

    params.k = 1;
    params.alpha = -0.5;
    CHECK_THROWS_AS(nmf_fit(x, params), InputError);
    params.alpha = 0.0;
    params.l1_ratio = 1.5;
    CHECK_THROWS_AS(nmf_fit(x, params), InputError);

    SUBCASE("k infeasible for sparse support") {
        auto zero_col = oracles::make_matrix({{1.0, 0.0}, {1.0, 0.0}});
        NmfParams p;
        p.k = 2;
        try {
            nmf_fit(zero_col, p);
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("infeasible") != std::string::npos);
        }
    }
}
