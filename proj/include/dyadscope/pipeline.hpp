#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dyadscope/corpus.hpp"
#include "dyadscope/topics.hpp"

namespace dyadscope {

// Effective settings for one run. Loaded from a key=value config file,
// then overridden by CLI flags; flags win.
struct RunConfig {
    std::string corpus_path;
    CorpusFormat corpus_format = CorpusFormat::JsonLines;

    std::string emotion_lexicon_path;
    std::string adaptations_path;  // optional
    std::string positive_words_path;
    std::string negative_words_path;

    std::string closed_class_path;
    std::string extra_stop_path;       // optional
    std::string keep_words_path;       // optional
    std::string generic_blocklist_path;  // optional
    std::string label_map_path;

    std::size_t chunk_size = 25;
    std::size_t bin_size = 20;
    std::size_t tie_margin = 0;
    std::size_t top_n = 10;
    bool all_hits = false;

    NmfParams nmf;
    std::size_t min_df = 1;
    double max_df_ratio = 1.0;
    std::optional<Cohort> cohort_filter;   // topics/sentiment scope
    std::optional<std::pair<std::size_t, std::size_t>> k_sweep;  // inclusive
    std::size_t max_cases = 0;  // sentiment panels cap; 0 = all

    std::string out_dir = "reports";
    std::set<std::string> formats = {"csv", "json", "svg"};
    bool dry_run = false;
};

// Parses `key = value` lines ("#" comments). Unknown keys are errors.
void apply_config_file(RunConfig& config, const std::string& path);

// Per-command validation of paths and numeric ranges.
void validate_config(const RunConfig& config, const std::string& command);

struct RunResult {
    std::vector<std::string> written;  // file paths, manifest included
    std::vector<std::string> warnings;
};

RunResult run_emotions(const RunConfig& config);
RunResult run_sentiment(const RunConfig& config);
RunResult run_topics(const RunConfig& config);
RunResult run_validate(const RunConfig& config);

}  // namespace dyadscope
