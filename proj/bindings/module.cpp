#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <stdexcept>

#include "dyadscope/emotion.hpp"
#include "dyadscope/error.hpp"
#include "dyadscope/lexicon.hpp"
#include "dyadscope/pipeline.hpp"
#include "dyadscope/sentiment.hpp"
#include "dyadscope/textprep.hpp"
#include "dyadscope/topics.hpp"
#include "dyadscope/version.hpp"

namespace py = pybind11;
using namespace dyadscope;

namespace {

Emotion emotion_from_name(const std::string& name) {
    auto e = parse_emotion(name);
    if (!e) throw InputError("unknown emotion \"" + name + "\"");
    return *e;
}

std::vector<Document> documents_from_tokens(const std::vector<std::vector<std::string>>& docs) {
    std::vector<Document> out;
    out.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        Document d;
        d.id = "doc" + std::to_string(i);
        d.source_transcript = d.id;
        d.tokens = docs[i];
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<std::vector<double>> matrix_rows(const Matrix& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) rows[r][c] = m.at(r, c);
    return rows;
}

}  // namespace

PYBIND11_MODULE(dyadscope, m) {
    m.doc() = "conversation corpus analytics: lexicon emotions, windowed sentiment, "
              "TF-IDF + NMF topics";
    m.attr("__version__") = kVersion;

    py::register_exception<InputError>(m, "InputError");

    // --- text preparation ---
    py::class_<FilterConfig>(m, "FilterConfig")
        .def(py::init<>())
        .def_readwrite("closed_class_words", &FilterConfig::closed_class_words)
        .def_readwrite("extra_stop_words", &FilterConfig::extra_stop_words)
        .def_readwrite("keep_words", &FilterConfig::keep_words)
        .def_readwrite("generic_word_blocklist", &FilterConfig::generic_word_blocklist)
        .def_readwrite("drop_digit_tokens", &FilterConfig::drop_digit_tokens);

    m.def("tokenize", &tokenize, py::arg("text"));
    m.def("filter_tokens", &filter_tokens, py::arg("tokens"), py::arg("config"));

    // --- lexicons ---
    py::class_<EmotionLexicon>(m, "EmotionLexicon")
        .def("word_count", &EmotionLexicon::word_count)
        .def("pair_count", &EmotionLexicon::pair_count)
        .def("associations",
             [](const EmotionLexicon& lex, const std::string& word) {
                 std::vector<std::pair<std::string, double>> out;
                 if (const auto* assocs = lex.find(word)) {
                     for (const auto& a : *assocs)
                         out.emplace_back(std::string(emotion_name(a.emotion)), a.score);
                 }
                 return out;
             },
             py::arg("word"));

    m.def("load_emotion_lexicon", &load_emotion_lexicon, py::arg("path"));
    m.def(
        "emotion_lexicon_from_tsv",
        [](const std::string& tsv) {
            std::istringstream in(tsv);
            return parse_emotion_lexicon(in, "<string>");
        },
        py::arg("tsv"));
    m.def(
        "remove_association",
        [](const EmotionLexicon& lex, const std::string& word, const std::string& emotion) {
            auto result = remove_association(lex, word, emotion_from_name(emotion));
            return py::make_tuple(result.lexicon, result.removed);
        },
        py::arg("lexicon"), py::arg("word"), py::arg("emotion"),
        "Returns (new_lexicon, removed); removed is False for a no-op.");

    py::class_<PolarityLexicon>(m, "PolarityLexicon")
        .def(py::init([](std::set<std::string> positive, std::set<std::string> negative) {
                 PolarityLexicon lex{std::move(positive), std::move(negative)};
                 return lex;
             }),
             py::arg("positive"), py::arg("negative"))
        .def_readwrite("positive", &PolarityLexicon::positive)
        .def_readwrite("negative", &PolarityLexicon::negative);

    m.def(
        "load_polarity_lexicon",
        [](const std::string& positive_path, const std::string& negative_path) {
            auto result = load_polarity_lexicon(positive_path, negative_path);
            return py::make_tuple(result.lexicon, result.warnings);
        },
        py::arg("positive_path"), py::arg("negative_path"));

    // --- emotion classification ---
    py::class_<EmotionAssignment>(m, "EmotionAssignment")
        .def_property_readonly("emotion",
                               [](const EmotionAssignment& a) {
                                   return std::string(emotion_name(a.emotion));
                               })
        .def_readonly("score", &EmotionAssignment::score)
        .def_readonly("trigger_word", &EmotionAssignment::trigger_word)
        .def_property_readonly("candidates", [](const EmotionAssignment& a) {
            std::map<std::string, double> out;
            for (std::size_t i = 0; i < kEmotionCount; ++i) {
                if (a.candidates[i])
                    out[std::string(emotion_name(static_cast<Emotion>(i)))] = *a.candidates[i];
            }
            return out;
        });

    m.def("classify_utterance", &classify_utterance, py::arg("tokens"), py::arg("lexicon"));
    m.def(
        "emotion_distribution",
        [](const std::vector<EmotionAssignment>& assignments) {
            std::map<std::string, double> out;
            for (const auto& [emotion, value] : emotion_distribution(assignments))
                out[std::string(emotion_name(emotion))] = value;
            return out;
        },
        py::arg("assignments"));
    m.def(
        "top_emotion_words",
        [](const std::vector<EmotionAssignment>& assignments, const std::string& emotion,
           std::size_t k, const std::set<std::string>& blocklist, bool all_hits) {
            return top_emotion_words(assignments, emotion_from_name(emotion), k, blocklist,
                                     all_hits ? TopWordsMode::AllHits
                                              : TopWordsMode::TriggerOnly);
        },
        py::arg("assignments"), py::arg("emotion"), py::arg("k") = 10,
        py::arg("blocklist") = std::set<std::string>{}, py::arg("all_hits") = false);

    // --- sentiment ---
    m.def(
        "utterance_polarity",
        [](const std::vector<std::string>& tokens, const PolarityLexicon& lex) {
            return std::string(polarity_name(utterance_polarity(tokens, lex)));
        },
        py::arg("tokens"), py::arg("lexicon"));

    // --- topics ---
    py::class_<Vocabulary>(m, "Vocabulary")
        .def_readonly("terms", &Vocabulary::terms)
        .def_readonly("document_frequency", &Vocabulary::document_frequency);

    py::class_<TermDocMatrix>(m, "TermDocMatrix")
        .def_property_readonly("shape",
                               [](const TermDocMatrix& x) {
                                   return py::make_tuple(x.n_docs, x.n_terms);
                               })
        .def_readonly("row_ids", &TermDocMatrix::row_ids)
        .def("nnz", &TermDocMatrix::nnz)
        .def("entry", &TermDocMatrix::entry, py::arg("doc"), py::arg("term"))
        .def("todense", [](const TermDocMatrix& x) {
            std::vector<std::vector<double>> rows(x.n_docs, std::vector<double>(x.n_terms, 0.0));
            for (std::size_t i = 0; i < x.n_docs; ++i)
                for (std::size_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p)
                    rows[i][x.col[p]] = x.val[p];
            return rows;
        });

    m.def(
        "build_tfidf",
        [](const std::vector<std::vector<std::string>>& documents, std::size_t min_df,
           double max_df_ratio) {
            auto result = build_tfidf(documents_from_tokens(documents), min_df, max_df_ratio);
            return py::make_tuple(result.vocabulary, result.matrix);
        },
        py::arg("documents"), py::arg("min_df") = 1, py::arg("max_df_ratio") = 1.0);

    py::class_<NmfModel>(m, "NmfModel")
        .def_property_readonly("w", [](const NmfModel& model) { return matrix_rows(model.w); })
        .def_property_readonly("h", [](const NmfModel& model) { return matrix_rows(model.h); })
        .def_readonly("objective_trace", &NmfModel::objective_trace)
        .def_readonly("converged", &NmfModel::converged)
        .def_readonly("iterations", &NmfModel::iterations)
        .def_readonly("doc_ids", &NmfModel::doc_ids)
        .def_property_readonly("k", [](const NmfModel& model) { return model.params.k; });

    m.def(
        "nmf_fit",
        [](const TermDocMatrix& x, std::size_t k, double alpha, double l1_ratio,
           std::size_t max_iter, double tol, std::uint64_t seed, const std::string& init) {
            NmfParams params;
            params.k = k;
            params.alpha = alpha;
            params.l1_ratio = l1_ratio;
            params.max_iter = max_iter;
            params.tol = tol;
            params.seed = seed;
            auto parsed = parse_nmf_init(init);
            if (!parsed) throw InputError("init must be RANDOM_SEEDED or NNDSVD");
            params.init = *parsed;
            return nmf_fit(x, params);
        },
        py::arg("matrix"), py::arg("k"), py::arg("alpha") = 0.1, py::arg("l1_ratio") = 0.5,
        py::arg("max_iter") = 400, py::arg("tol") = 1e-4, py::arg("seed") = 1,
        py::arg("init") = "NNDSVD");

    m.def("top_terms", &top_terms, py::arg("model"), py::arg("vocabulary"), py::arg("topic"),
          py::arg("n") = 10);
    m.def(
        "assign_documents",
        [](const NmfModel& model) {
            std::map<std::string, std::pair<std::size_t, bool>> out;
            for (const auto& [id, dt] : assign_documents(model))
                out[id] = {dt.topic, dt.unassigned};
            return out;
        },
        py::arg("model"), "doc id -> (topic, unassigned)");

    // --- whole pipeline runs ---
    m.def(
        "run",
        [](const std::string& command, const std::string& config_path, const std::string& out_dir,
           bool dry_run) {
            RunConfig config;
            apply_config_file(config, config_path);
            if (!out_dir.empty()) config.out_dir = out_dir;
            config.dry_run = dry_run;
            RunResult result;
            if (command == "emotions") result = run_emotions(config);
            else if (command == "sentiment") result = run_sentiment(config);
            else if (command == "topics") result = run_topics(config);
            else if (command == "validate") result = run_validate(config);
            else throw InputError("unknown command \"" + command + "\"");
            return py::make_tuple(result.written, result.warnings);
        },
        py::arg("command"), py::arg("config_path"), py::arg("out_dir") = "",
        py::arg("dry_run") = false,
        "Run a full subcommand from a config file; returns (written, warnings).");
}
