#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dyadscope/error.hpp"
#include "dyadscope/pipeline.hpp"
#include "dyadscope/version.hpp"

namespace {

using dyadscope::RunConfig;

struct CliOverrides {
    std::string config_path;
    std::string corpus, corpus_format, emotion_lexicon, adaptations;
    std::string positive_words, negative_words;
    std::string closed_class, extra_stop, keep_words, generic_blocklist, label_map;
    std::string out_dir, format, cohort, init, k_sweep;
    std::size_t chunk_size = 0, bin_size = 0, tie_margin = 0, top_n = 0, max_cases = 0;
    std::size_t k = 0, max_iter = 0, min_df = 0;
    std::uint64_t seed = 0;
    double alpha = 0.0, l1_ratio = 0.0, tol = 0.0, max_df_ratio = 0.0;
    bool dry_run = false;
    bool all_hits = false;
};

void add_common_options(CLI::App* cmd, CliOverrides& ov) {
    cmd->add_option("--config", ov.config_path, "key = value config file");
    cmd->add_option("--corpus", ov.corpus, "corpus file (JSON-lines or CSV)");
    cmd->add_option("--corpus-format", ov.corpus_format, "jsonl or csv");
    cmd->add_option("--out", ov.out_dir, "output directory for reports");
    cmd->add_option("--format", ov.format, "report formats, subset of csv,json,svg");
    cmd->add_option("--closed-class", ov.closed_class, "closed-class word list");
    cmd->add_option("--extra-stop", ov.extra_stop, "extra stop word list");
    cmd->add_option("--keep-words", ov.keep_words, "words never filtered");
    cmd->add_option("--generic-blocklist", ov.generic_blocklist,
                    "words excluded from top-word reports");
    cmd->add_option("--seed", ov.seed, "seed for seeded randomized steps");
    cmd->add_flag("--dry-run", ov.dry_run, "validate inputs, write nothing");
}

// defaults -> config file -> explicit flags.
RunConfig build_config(const CLI::App* cmd, const CliOverrides& ov) {
    RunConfig config;
    if (!ov.config_path.empty()) dyadscope::apply_config_file(config, ov.config_path);

    auto given = [&](const char* name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };

    if (given("--corpus")) config.corpus_path = ov.corpus;
    if (given("--corpus-format")) {
        if (ov.corpus_format == "jsonl") config.corpus_format = dyadscope::CorpusFormat::JsonLines;
        else if (ov.corpus_format == "csv") config.corpus_format = dyadscope::CorpusFormat::Csv;
        else throw dyadscope::InputError("corpus-format must be jsonl or csv");
    }
    if (given("--out")) config.out_dir = ov.out_dir;
    if (given("--format")) {
        config.formats.clear();
        std::string fmt;
        std::stringstream ss(ov.format);
        while (std::getline(ss, fmt, ',')) {
            if (fmt != "csv" && fmt != "json" && fmt != "svg")
                throw dyadscope::InputError("format must be a subset of csv,json,svg");
            config.formats.insert(fmt);
        }
    }
    if (given("--closed-class")) config.closed_class_path = ov.closed_class;
    if (given("--extra-stop")) config.extra_stop_path = ov.extra_stop;
    if (given("--keep-words")) config.keep_words_path = ov.keep_words;
    if (given("--generic-blocklist")) config.generic_blocklist_path = ov.generic_blocklist;
    if (given("--dry-run")) config.dry_run = true;

    if (given("--emotion-lexicon")) config.emotion_lexicon_path = ov.emotion_lexicon;
    if (given("--adaptations")) config.adaptations_path = ov.adaptations;
    if (given("--label-map")) config.label_map_path = ov.label_map;
    if (given("--top-n")) config.top_n = ov.top_n;
    if (given("--all-hits")) config.all_hits = true;

    if (given("--positive-words")) config.positive_words_path = ov.positive_words;
    if (given("--negative-words")) config.negative_words_path = ov.negative_words;
    if (given("--bin-size")) config.bin_size = ov.bin_size;
    if (given("--tie-margin")) config.tie_margin = ov.tie_margin;
    if (given("--max-cases")) config.max_cases = ov.max_cases;

    if (given("--chunk-size")) config.chunk_size = ov.chunk_size;
    if (given("--k")) config.nmf.k = ov.k;
    if (given("--alpha")) config.nmf.alpha = ov.alpha;
    if (given("--l1-ratio")) config.nmf.l1_ratio = ov.l1_ratio;
    if (given("--max-iter")) config.nmf.max_iter = ov.max_iter;
    if (given("--tol")) config.nmf.tol = ov.tol;
    if (given("--seed")) config.nmf.seed = ov.seed;
    if (given("--init")) {
        auto init = dyadscope::parse_nmf_init(ov.init);
        if (!init) throw dyadscope::InputError("init must be RANDOM_SEEDED or NNDSVD");
        config.nmf.init = *init;
    }
    if (given("--min-df")) config.min_df = ov.min_df;
    if (given("--max-df-ratio")) config.max_df_ratio = ov.max_df_ratio;
    if (given("--cohort")) {
        auto cohort = dyadscope::parse_cohort(ov.cohort);
        if (!cohort) throw dyadscope::InputError("cohort must be IDD_FAMILY or PEER");
        config.cohort_filter = cohort;
    }
    if (given("--k-sweep")) {
        const std::string& value = ov.k_sweep;
        auto dots = value.find("..");
        if (dots == std::string::npos)
            throw dyadscope::InputError("--k-sweep expects the form a..b");
        config.k_sweep = {std::stoull(value.substr(0, dots)), std::stoull(value.substr(dots + 2))};
        if (config.k_sweep->first == 0 || config.k_sweep->second < config.k_sweep->first)
            throw dyadscope::InputError("--k-sweep range must satisfy 1 <= a <= b");
    }
    return config;
}

int report_outcome(const dyadscope::RunResult& result, bool dry_run) {
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    if (dry_run) {
        std::cerr << "dry run: inputs valid, nothing written\n";
    } else {
        for (const auto& path : result.written) std::cerr << "wrote " << path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conversation corpus analytics: emotions, sentiment, topics"};
    app.set_version_flag("--version", std::string("dyadscope ") + dyadscope::kVersion);
    app.require_subcommand(1);

    CliOverrides ov;

    CLI::App* emotions = app.add_subcommand("emotions", "emotion distribution, intensity, top words");
    add_common_options(emotions, ov);
    emotions->add_option("--emotion-lexicon", ov.emotion_lexicon, "word/emotion/score TSV");
    emotions->add_option("--adaptations", ov.adaptations, "association removal TSV");
    emotions->add_option("--label-map", ov.label_map, "researcher label map TSV");
    emotions->add_option("--top-n", ov.top_n, "rows per top-word table");
    emotions->add_flag("--all-hits", ov.all_hits, "count all lexicon hits, not just triggers");

    CLI::App* sentiment = app.add_subcommand("sentiment", "windowed sentiment series per transcript");
    add_common_options(sentiment, ov);
    sentiment->add_option("--positive-words", ov.positive_words, "positive word list");
    sentiment->add_option("--negative-words", ov.negative_words, "negative word list");
    sentiment->add_option("--bin-size", ov.bin_size, "lines per bin (default 20)");
    sentiment->add_option("--tie-margin", ov.tie_margin, "|net| <= margin counts as balanced");
    sentiment->add_option("--max-cases", ov.max_cases, "limit the number of cases");
    sentiment->add_option("--cohort", ov.cohort, "IDD_FAMILY or PEER");

    CLI::App* topics = app.add_subcommand("topics", "TF-IDF + NMF topic model reports");
    add_common_options(topics, ov);
    topics->add_option("--chunk-size", ov.chunk_size, "utterances per document (default 25)");
    topics->add_option("--k", ov.k, "topic count");
    topics->add_option("--alpha", ov.alpha, "regularization strength");
    topics->add_option("--l1-ratio", ov.l1_ratio, "L1/L2 mix in [0,1]");
    topics->add_option("--max-iter", ov.max_iter, "iteration cap");
    topics->add_option("--tol", ov.tol, "relative objective decrease to stop");
    topics->add_option("--init", ov.init, "RANDOM_SEEDED or NNDSVD");
    topics->add_option("--min-df", ov.min_df, "minimum document frequency");
    topics->add_option("--max-df-ratio", ov.max_df_ratio, "maximum df/N ratio");
    topics->add_option("--cohort", ov.cohort, "IDD_FAMILY or PEER");
    topics->add_option("--k-sweep", ov.k_sweep, "fit every k in a..b");
    topics->add_option("--top-n", ov.top_n, "terms per topic in reports");

    CLI::App* validate = app.add_subcommand("validate", "check config and inputs, write nothing");
    add_common_options(validate, ov);
    validate->add_option("--emotion-lexicon", ov.emotion_lexicon, "word/emotion/score TSV");
    validate->add_option("--adaptations", ov.adaptations, "association removal TSV");
    validate->add_option("--label-map", ov.label_map, "researcher label map TSV");
    validate->add_option("--positive-words", ov.positive_words, "positive word list");
    validate->add_option("--negative-words", ov.negative_words, "negative word list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags are input errors
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        RunConfig config = build_config(cmd, ov);

        if (cmd == emotions) {
            if (config.dry_run) {
                dyadscope::validate_config(config, "emotions");
                return report_outcome({}, true);
            }
            return report_outcome(dyadscope::run_emotions(config), false);
        }
        if (cmd == sentiment) {
            if (config.dry_run) {
                dyadscope::validate_config(config, "sentiment");
                return report_outcome({}, true);
            }
            return report_outcome(dyadscope::run_sentiment(config), false);
        }
        if (cmd == topics) {
            if (config.dry_run) {
                dyadscope::validate_config(config, "topics");
                return report_outcome({}, true);
            }
            return report_outcome(dyadscope::run_topics(config), false);
        }
        return report_outcome(dyadscope::run_validate(config), config.dry_run);
    } catch (const dyadscope::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
