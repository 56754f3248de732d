// Acceptance suite: one criterion per function, one pass/fail line each.
// Usage: dyadscope_acceptance <cli-path> [--write-golden]
//
// --write-golden refreshes tests/golden/e2e from the current pipeline
// output; run it only after deliberate report-format changes, then review
// the diff.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dyadscope/corpus.hpp"
#include "dyadscope/digest.hpp"
#include "dyadscope/emotion.hpp"
#include "dyadscope/error.hpp"
#include "dyadscope/lexicon.hpp"
#include "dyadscope/sentiment.hpp"
#include "dyadscope/textprep.hpp"
#include "dyadscope/topics.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace dyadscope;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kSourceDir = DYADSCOPE_SOURCE_DIR;
std::string g_cli_path;
bool g_write_golden = false;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_cli(const std::string& args) {
    const std::string cmd =
        "cd '" + kSourceDir + "' && '" + g_cli_path + "' " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

std::vector<std::string> report_files(const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

struct CheckFailure {
    std::string message;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw CheckFailure{message};
}

// ---- randomized corpora shared by criteria 3 and 4 ----

struct RandomProblem {
    EmotionLexicon lexicon;
    std::vector<std::vector<std::string>> utterances;
};

RandomProblem random_problem(std::mt19937& rng) {
    RandomProblem problem;
    std::vector<std::string> pool;
    for (std::size_t w = 0; w < 30; ++w) pool.push_back("w" + std::to_string(w));
    const std::size_t lexicon_words = 1 + rng() % 20;
    for (std::size_t w = 0; w < lexicon_words; ++w) {
        const std::string& word = pool[rng() % pool.size()];
        const std::size_t n_emotions = 1 + rng() % 3;
        for (std::size_t i = 0; i < n_emotions; ++i) {
            const Emotion e = kEmotionWheel[rng() % kEmotionCount];
            bool exists = false;
            if (const auto* assocs = problem.lexicon.find(word))
                for (const auto& a : *assocs) exists |= a.emotion == e;
            if (exists) continue;
            problem.lexicon.add(word, e, static_cast<double>(1 + rng() % 8) / 8.0, "<gen>");
        }
    }
    const std::size_t n_utterances = rng() % 51;
    for (std::size_t u = 0; u < n_utterances; ++u) {
        std::vector<std::string> tokens;
        const std::size_t n_tokens = rng() % 9;
        for (std::size_t t = 0; t < n_tokens; ++t)
            tokens.push_back(rng() % 5 == 0 ? "zz" + std::to_string(rng() % 3)
                                            : pool[rng() % pool.size()]);
        problem.utterances.push_back(std::move(tokens));
    }
    return problem;
}

// ---- criteria ----

std::string criterion_1() {
    const auto start = Clock::now();
    std::istringstream in("money\tanticipation\t0.586\nmoney\tjoy\t0.531\nmoney\ttrust\t0.359\n");
    auto lex = parse_emotion_lexicon(in, "<acceptance>");
    auto a = classify_utterance({"money"}, lex);
    require(a.has_value(), "no assignment returned");
    require(a->emotion == Emotion::Anticipation, "wrong emotion chosen");
    require(a->score == 0.586, "score not exactly 0.586");
    require(a->trigger_word == "money", "wrong trigger word");
    const double elapsed = seconds_since(start);
    require(elapsed < 1.0, "took too long");
    std::ostringstream detail;
    detail << "money -> (anticipation, 0.586) in " << elapsed << "s";
    return detail.str();
}

std::string criterion_2() {
    const auto start = Clock::now();
    std::istringstream in("kind\tjoy\t0.45\nhappy\tjoy\t0.77\n");
    auto lex = parse_emotion_lexicon(in, "<acceptance>");
    require(classify_utterance({"it", "kind", "of"}, lex).has_value(),
            "utterance should classify before adaptation");
    auto removed = remove_association(lex, "kind", Emotion::Joy);
    require(removed.removed, "removal flagged as no-op");
    require(!classify_utterance({"it", "kind", "of"}, removed.lexicon).has_value(),
            "utterance still classified after adaptation");
    require(classify_utterance({"happy"}, removed.lexicon).has_value(),
            "unrelated entries must survive");
    const double elapsed = seconds_since(start);
    require(elapsed < 1.0, "took too long");
    return "(kind, joy) removal unclassifies the hedge";
}

std::string criterion_3() {
    // randomized corpora plus the shipped fixture, pooled and per cohort
    std::mt19937 rng(910);
    std::size_t checked = 0;
    for (int round = 0; round < 40; ++round) {
        auto problem = random_problem(rng);
        std::vector<EmotionAssignment> assignments;
        for (const auto& tokens : problem.utterances) {
            if (auto a = classify_utterance(tokens, problem.lexicon)) assignments.push_back(*a);
        }
        if (assignments.empty()) continue;
        double sum = 0.0;
        for (const auto& [e, v] : emotion_distribution(assignments)) sum += v;
        require(std::abs(sum - 1.0) <= 1e-9, "random corpus distribution sum off");
        ++checked;
    }
    require(checked >= 20, "not enough nonempty random corpora");

    auto transcripts =
        parse_corpus(kSourceDir + "/data/fixtures/corpus.jsonl", CorpusFormat::JsonLines);
    auto label_map = LabelMap::load(kSourceDir + "/data/config/label_map.tsv");
    auto lex = apply_adaptations(
        load_emotion_lexicon(kSourceDir + "/data/fixtures/emotion_lexicon.tsv"),
        kSourceDir + "/data/fixtures/adaptations.tsv");
    FilterConfig filter;
    filter.closed_class_words = load_word_list(kSourceDir + "/data/config/closed_class.txt");
    filter.extra_stop_words = load_word_list(kSourceDir + "/data/config/extra_stop.txt");
    filter.keep_words = load_word_list(kSourceDir + "/data/config/keep.txt");

    for (Cohort cohort : {Cohort::IddFamily, Cohort::Peer}) {
        std::vector<EmotionAssignment> assignments;
        auto subset = select_emotion_utterances(transcripts, label_map, nullptr);
        const Utterance* last = nullptr;
        for (const auto& item : subset) {
            if (item.transcript->cohort != cohort || item.utterance == last) continue;
            last = item.utterance;
            if (auto a = classify_utterance(filter_tokens(tokenize(item.utterance->text), filter),
                                            lex))
                assignments.push_back(*a);
        }
        require(!assignments.empty(), "fixture cohort classified nothing");
        double sum = 0.0;
        for (const auto& [e, v] : emotion_distribution(assignments)) sum += v;
        require(std::abs(sum - 1.0) <= 1e-9, "fixture distribution sum off");
    }
    return std::to_string(checked) + " random corpora + 2 fixture cohorts sum to 1 +- 1e-9";
}

std::string criterion_4() {
    const auto start = Clock::now();
    std::mt19937 rng(20240808);
    std::size_t classified = 0;
    for (int round = 0; round < 100; ++round) {
        auto problem = random_problem(rng);
        std::vector<Emotion> ours_chosen, oracle_chosen;
        for (const auto& tokens : problem.utterances) {
            auto ours = classify_utterance(tokens, problem.lexicon);
            auto oracle = oracles::brute_force_classify(tokens, problem.lexicon);
            require(ours.has_value() == oracle.has_value(), "hit/miss mismatch");
            if (!ours) continue;
            require(ours->emotion == oracle->emotion, "emotion mismatch");
            require(ours->score == oracle->score, "score mismatch");
            require(ours->trigger_word == oracle->trigger_word, "trigger mismatch");
            ours_chosen.push_back(ours->emotion);
            oracle_chosen.push_back(oracle->emotion);
            ++classified;
        }
        if (ours_chosen.empty()) continue;
        std::vector<EmotionAssignment> assignments;
        for (Emotion e : ours_chosen) {
            EmotionAssignment a;
            a.emotion = e;
            assignments.push_back(a);
        }
        auto ours_dist = emotion_distribution(assignments);
        auto oracle_dist = oracles::brute_force_distribution(oracle_chosen);
        for (Emotion e : kEmotionWheel)
            require(ours_dist[e] == oracle_dist[e], "distribution mismatch");
    }
    const double elapsed = seconds_since(start);
    require(elapsed < 10.0, "oracle sweep exceeded 10s");
    std::ostringstream detail;
    detail << "100 corpora, " << classified << " classifications equal, " << elapsed << "s";
    return detail.str();
}

std::string criterion_5() {
    PolarityLexicon lex;
    lex.positive = {"happy", "fun", "great"};
    lex.negative = {"worry", "bad"};
    Transcript t;
    t.id = "case";
    t.cohort = Cohort::IddFamily;
    t.dyad_kind = DyadKind::ParentChild;
    for (std::size_t i = 0; i < 40; ++i) {
        Utterance u;
        u.transcript_id = t.id;
        u.line_index = i;
        u.speaker = i % 2 ? "B" : "A";
        u.text = "plain line";
        t.utterances.push_back(u);
    }
    // hand-counted: lines 2, 7, 15 positive; 23, 31 negative
    t.utterances[2].text = "that was fun";
    t.utterances[7].text = "so happy now";
    t.utterances[15].text = "a great day";
    t.utterances[23].text = "i worry about this";
    t.utterances[31].text = "that went bad";

    FilterConfig no_filter;
    auto series = sentiment_series(t, lex, no_filter, 20);
    require(series.bins.size() == 2, "expected exactly 2 bins");
    require(series.bins[0].positive == 3 && series.bins[0].negative == 0, "bin 0 mismatch");
    require(series.bins[1].positive == 0 && series.bins[1].negative == 2, "bin 1 mismatch");

    for (std::size_t bin_size : {5, 10, 20, 40}) {
        auto s = sentiment_series(t, lex, no_filter, bin_size);
        require(s.positive_total == 3 && s.negative_total == 2,
                "totals changed under bin_size " + std::to_string(bin_size));
    }
    return "bins [(3,0),(0,2)] at 20; totals invariant over {5,10,20,40}";
}

std::string criterion_6() {
    std::mt19937 rng(606);
    const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f", "g", "h"};
    double worst = 0.0;
    for (int round = 0; round < 20; ++round) {
        const std::size_t n_docs = 1 + rng() % 5;
        std::vector<std::vector<std::string>> docs(n_docs);
        for (auto& doc : docs) {
            const std::size_t n_tokens = 1 + rng() % 11;
            for (std::size_t t = 0; t < n_tokens; ++t) doc.push_back(pool[rng() % pool.size()]);
        }
        std::vector<Document> documents;
        for (std::size_t i = 0; i < docs.size(); ++i) {
            Document d;
            d.id = "doc" + std::to_string(i);
            d.tokens = docs[i];
            documents.push_back(std::move(d));
        }
        auto result = build_tfidf(documents, 1, 1.0);
        std::vector<std::string> oracle_vocab;
        auto oracle = oracles::reference_tfidf(docs, 1, 1.0, &oracle_vocab);
        require(result.vocabulary.terms == oracle_vocab, "vocabulary mismatch");
        for (std::size_t d = 0; d < n_docs; ++d) {
            const auto& row = oracle.at("doc" + std::to_string(d));
            for (std::size_t t = 0; t < oracle_vocab.size(); ++t) {
                const double diff = std::abs(result.matrix.entry(d, t) - row[t]);
                worst = std::max(worst, diff);
                require(diff <= 1e-12, "entry differs beyond 1e-12");
            }
        }
    }
    std::ostringstream detail;
    detail << "20 corpora, max |delta| = " << worst;
    return detail.str();
}

std::string criterion_7() {
    const auto start = Clock::now();
    std::mt19937 rng(707);
    std::size_t fits = 0;
    for (int round = 0; round < 50; ++round) {
        const std::size_t n = 2 + rng() % 29;
        const std::size_t m = 2 + rng() % 39;
        std::vector<std::vector<double>> dense(n, std::vector<double>(m));
        for (auto& row : dense)
            for (double& v : row) v = 0.05 + static_cast<double>(rng() % 1000) / 1000.0;
        auto x = oracles::make_matrix(dense);
        const std::size_t k = 1 + rng() % std::min<std::size_t>(8, std::min(n, m));
        for (double alpha : {0.0, 0.1, 1.0}) {
            for (double r : {0.0, 0.5, 1.0}) {
                NmfParams params;
                params.k = k;
                params.alpha = alpha;
                params.l1_ratio = r;
                params.max_iter = 50;
                params.tol = 0.0;
                params.seed = 1000 + round;
                params.init = round % 2 ? NmfInit::Nndsvd : NmfInit::RandomSeeded;
                auto model = nmf_fit(x, params);
                ++fits;
                for (std::size_t i = 1; i < model.objective_trace.size(); ++i) {
                    require(model.objective_trace[i] <= model.objective_trace[i - 1] + 1e-10,
                            "objective increased at step " + std::to_string(i));
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    require(elapsed < 60.0, "monotonicity sweep exceeded 60s");
    std::ostringstream detail;
    detail << fits << " fits non-increasing (slack 1e-10), " << elapsed << "s";
    return detail.str();
}

std::string criterion_8() {
    const auto start = Clock::now();

    const std::vector<double> u = {1.0, 2.0, 3.0, 0.5, 1.5};
    const std::vector<double> v = {0.8, 0.4, 1.2, 2.0};
    std::vector<std::vector<double>> dense(u.size(), std::vector<double>(v.size()));
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) dense[i][j] = u[i] * v[j];
    auto rank1 = oracles::make_matrix(dense);
    NmfParams params;
    params.k = 1;
    params.alpha = 0.0;
    params.max_iter = 200;
    params.tol = 0.0;
    params.init = NmfInit::Nndsvd;
    auto model = nmf_fit(rank1, params);
    const double residual = oracles::frobenius_residual(rank1, model.w, model.h);
    require(residual < 1e-6, "rank-1 residual " + std::to_string(residual));

    std::vector<std::vector<double>> blocks = {
        {3.0, 2.5, 2.8, 0.0, 0.0, 0.0}, {2.6, 3.1, 2.4, 0.0, 0.0, 0.0},
        {2.9, 2.2, 3.3, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.9, 1.5, 1.7},
        {0.0, 0.0, 0.0, 1.4, 2.0, 1.6}, {0.0, 0.0, 0.0, 1.8, 1.3, 2.1}};
    auto x = oracles::make_matrix(blocks);
    Vocabulary vocab;
    for (std::size_t t = 0; t < 6; ++t) {
        vocab.index.emplace("t" + std::to_string(t), t);
        vocab.terms.push_back("t" + std::to_string(t));
        vocab.document_frequency.push_back(1);
    }
    NmfParams block_params;
    block_params.k = 2;
    block_params.alpha = 0.0;
    block_params.max_iter = 300;
    block_params.tol = 0.0;
    block_params.init = NmfInit::Nndsvd;
    auto block_model = nmf_fit(x, block_params);

    const std::set<std::string> block_a = {"t0", "t1", "t2"};
    const std::set<std::string> block_b = {"t3", "t4", "t5"};
    std::vector<std::set<std::string>> supports;
    for (std::size_t topic = 0; topic < 2; ++topic) {
        std::set<std::string> support;
        for (const auto& [term, weight] : top_terms(block_model, vocab, topic, 3))
            support.insert(term);
        supports.push_back(std::move(support));
    }
    const bool matches = (supports[0] == block_a && supports[1] == block_b) ||
                         (supports[0] == block_b && supports[1] == block_a);
    require(matches, "top-term supports do not match the blocks");

    const double elapsed = seconds_since(start);
    require(elapsed < 5.0, "exceeded 5s");
    std::ostringstream detail;
    detail << "rank-1 residual " << residual << "; block supports exact; " << elapsed << "s";
    return detail.str();
}

std::string criterion_9() {
    const fs::path out = fs::temp_directory_path() / "dyadscope_acceptance_det";
    fs::remove_all(out);

    const std::string args = "topics --config data/dyadscope.conf --cohort IDD_FAMILY --k 5 "
                             "--seed 7 --init NNDSVD --out '" + out.string() + "'";
    require(run_cli(args) == 0, "first topics run failed");
    std::map<std::string, std::string> first;
    for (const auto& name : report_files(out)) first[name] = sha256_file_hex((out / name).string());
    require(first.count("manifest.json") == 1, "manifest missing");
    require(first.count("topic_model.json") == 1, "model export missing");

    fs::remove_all(out);
    require(run_cli(args) == 0, "second topics run failed");
    for (const auto& name : report_files(out)) {
        require(first.count(name) == 1, "file set changed between runs: " + name);
        require(first[name] == sha256_file_hex((out / name).string()),
                "bytes differ between runs: " + name);
    }
    require(report_files(out).size() == first.size(), "file set shrank between runs");
    fs::remove_all(out);
    std::ostringstream detail;
    detail << first.size() << " files byte-identical across reruns (manifest included)";
    return detail.str();
}

std::string criterion_10() {
    const auto start = Clock::now();
    const fs::path base = fs::temp_directory_path() / "dyadscope_acceptance_e2e";
    fs::remove_all(base);

    struct Run {
        std::string name;
        std::string args;
    };
    const std::vector<Run> runs = {
        {"emotions", "emotions --config data/dyadscope.conf"},
        {"sentiment", "sentiment --config data/dyadscope.conf --cohort IDD_FAMILY --max-cases 24"},
        {"topics_idd", "topics --config data/dyadscope.conf --cohort IDD_FAMILY --k 5"},
        {"topics_peer", "topics --config data/dyadscope.conf --cohort PEER --k 8"},
    };
    for (const auto& run : runs) {
        const fs::path out = base / run.name;
        require(run_cli(run.args + " --out '" + out.string() + "'") == 0,
                run.name + " run failed");
    }
    const double elapsed = seconds_since(start);
    require(elapsed < 30.0, "pipeline exceeded 30s");

    // ---- shape checks ----
    {
        const std::string csv = slurp(base / "emotions" / "emotion_distribution.csv");
        require(count_occurrences(csv, "\n") == 1 + 2 * kCodedEmotionCount,
                "distribution table must have 9 rows per cohort");
        require(csv.find("apprehension") != std::string::npos, "apprehension row missing");
        const std::string intensity = slurp(base / "emotions" / "emotion_intensity.csv");
        require(intensity.find("idd_family_t1") != std::string::npos &&
                    intensity.find("idd_family_t2") != std::string::npos &&
                    intensity.find("peer_t1") != std::string::npos &&
                    intensity.find("peer_t2") != std::string::npos,
                "intensity table must split cohort x time");
        const std::string words = slurp(base / "emotions" / "emotion_top_words.csv");
        require(words.find(",rank,word,count") != std::string::npos, "top-words header wrong");
        require(words.find(",good,") == std::string::npos &&
                    words.find(",pretty,") == std::string::npos,
                "generic blocklist must prune top words");
    }
    {
        const std::string svg = slurp(base / "sentiment" / "sentiment_cases.svg");
        require(count_occurrences(svg, "class=\"panel\"") == 24,
                "sentiment chart must show 24 panels");
    }
    {
        const std::string idd = slurp(base / "topics_idd" / "topic_terms.svg");
        require(count_occurrences(idd, "class=\"panel\"") == 5, "IDD chart must show 5 panels");
        const std::string peer = slurp(base / "topics_peer" / "topic_terms.svg");
        require(count_occurrences(peer, "class=\"panel\"") == 8, "peer chart must show 8 panels");
        require(slurp(base / "topics_idd" / "topic_model.json").find("\"k\": 5") !=
                    std::string::npos,
                "IDD model export must record k=5");
        require(slurp(base / "topics_peer" / "topic_model.json").find("\"k\": 8") !=
                    std::string::npos,
                "peer model export must record k=8");
    }

    // ---- golden files (manifests excluded: they embed output paths) ----
    const fs::path golden_base = fs::path(kSourceDir) / "tests" / "golden" / "e2e";
    std::size_t compared = 0;
    for (const auto& run : runs) {
        const fs::path out = base / run.name;
        const fs::path golden = golden_base / run.name;
        if (g_write_golden) {
            fs::create_directories(golden);
            for (const auto& name : report_files(out)) {
                if (name == "manifest.json") continue;
                fs::copy_file(out / name, golden / name, fs::copy_options::overwrite_existing);
            }
            continue;
        }
        require(fs::exists(golden), "golden directory missing: " + golden.string() +
                                        " (regenerate with --write-golden)");
        for (const auto& name : report_files(golden)) {
            require(fs::exists(out / name), "report missing vs golden: " + name);
            require(slurp(out / name) == slurp(golden / name),
                    run.name + "/" + name + " differs from golden");
            ++compared;
        }
        for (const auto& name : report_files(out)) {
            if (name == "manifest.json") continue;
            require(fs::exists(golden / name), "new report not in golden: " + name);
        }
    }
    fs::remove_all(base);

    std::ostringstream detail;
    if (g_write_golden) {
        detail << "golden files rewritten; pipeline " << elapsed << "s";
    } else {
        detail << "4 runs, " << compared << " golden files equal, " << elapsed << "s";
    }
    return detail.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: dyadscope_acceptance <cli-path> [--write-golden]\n";
        return 2;
    }
    g_cli_path = argv[1];
    for (int i = 2; i < argc; ++i) {
        if (std::string(argv[i]) == "--write-golden") g_write_golden = true;
    }

    struct Criterion {
        int id;
        std::string name;
        std::function<std::string()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "paper-anchored classification", criterion_1},
        {2, "lexicon adaptation", criterion_2},
        {3, "distribution normalization", criterion_3},
        {4, "emotion oracle equivalence", criterion_4},
        {5, "sentiment binning", criterion_5},
        {6, "tf-idf oracle", criterion_6},
        {7, "nmf monotonicity", criterion_7},
        {8, "nmf exact recovery", criterion_8},
        {9, "determinism", criterion_9},
        {10, "end-to-end fixture pipeline", criterion_10},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        try {
            const std::string detail = criterion.run();
            std::cout << "[PASS] criterion " << criterion.id << ": " << criterion.name << ": "
                      << detail << "\n";
        } catch (const CheckFailure& failure) {
            ++failures;
            std::cout << "[FAIL] criterion " << criterion.id << ": " << criterion.name << ": "
                      << failure.message << "\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "[FAIL] criterion " << criterion.id << ": " << criterion.name
                      << ": exception: " << e.what() << "\n";
        }
    }
    if (failures > 0) {
        std::cout << failures << " of " << criteria.size() << " criteria failed\n";
        return 1;
    }
    std::cout << "all " << criteria.size() << " criteria passed\n";
    return 0;
}
