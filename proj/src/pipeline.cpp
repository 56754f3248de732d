#include "dyadscope/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dyadscope/digest.hpp"
#include "dyadscope/emotion.hpp"
#include "dyadscope/error.hpp"
#include "dyadscope/lexicon.hpp"
#include "dyadscope/report.hpp"
#include "dyadscope/sentiment.hpp"
#include "dyadscope/textprep.hpp"

namespace dyadscope {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::size_t parse_size(const std::string& value, const std::string& key) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw InputError("config key \"" + key + "\": bad integer \"" + value + "\"");
    return out;
}

double parse_real(const std::string& value, const std::string& key) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw InputError("config key \"" + key + "\": bad number \"" + value + "\"");
    return out;
}

std::pair<std::size_t, std::size_t> parse_sweep(const std::string& value) {
    const auto dots = value.find("..");
    if (dots == std::string::npos)
        throw InputError("k_sweep expects the form a..b, got \"" + value + "\"");
    const std::size_t lo = parse_size(value.substr(0, dots), "k_sweep");
    const std::size_t hi = parse_size(value.substr(dots + 2), "k_sweep");
    if (lo == 0 || hi < lo) throw InputError("k_sweep range must satisfy 1 <= a <= b");
    return {lo, hi};
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "corpus") config.corpus_path = value;
    else if (key == "corpus_format") {
        if (value == "jsonl") config.corpus_format = CorpusFormat::JsonLines;
        else if (value == "csv") config.corpus_format = CorpusFormat::Csv;
        else throw InputError("corpus_format must be jsonl or csv, got \"" + value + "\"");
    } else if (key == "emotion_lexicon") config.emotion_lexicon_path = value;
    else if (key == "adaptations") config.adaptations_path = value;
    else if (key == "positive_words") config.positive_words_path = value;
    else if (key == "negative_words") config.negative_words_path = value;
    else if (key == "closed_class") config.closed_class_path = value;
    else if (key == "extra_stop") config.extra_stop_path = value;
    else if (key == "keep_words") config.keep_words_path = value;
    else if (key == "generic_blocklist") config.generic_blocklist_path = value;
    else if (key == "label_map") config.label_map_path = value;
    else if (key == "chunk_size") config.chunk_size = parse_size(value, key);
    else if (key == "bin_size") config.bin_size = parse_size(value, key);
    else if (key == "tie_margin") config.tie_margin = parse_size(value, key);
    else if (key == "top_n") config.top_n = parse_size(value, key);
    else if (key == "all_hits") config.all_hits = (value == "true" || value == "1");
    else if (key == "k") config.nmf.k = parse_size(value, key);
    else if (key == "alpha") config.nmf.alpha = parse_real(value, key);
    else if (key == "l1_ratio") config.nmf.l1_ratio = parse_real(value, key);
    else if (key == "max_iter") config.nmf.max_iter = parse_size(value, key);
    else if (key == "tol") config.nmf.tol = parse_real(value, key);
    else if (key == "seed") config.nmf.seed = parse_size(value, key);
    else if (key == "init") {
        auto init = parse_nmf_init(value);
        if (!init) throw InputError("init must be RANDOM_SEEDED or NNDSVD, got \"" + value + "\"");
        config.nmf.init = *init;
    } else if (key == "min_df") config.min_df = parse_size(value, key);
    else if (key == "max_df_ratio") config.max_df_ratio = parse_real(value, key);
    else if (key == "cohort") {
        auto cohort = parse_cohort(value);
        if (!cohort) throw InputError("cohort must be IDD_FAMILY or PEER, got \"" + value + "\"");
        config.cohort_filter = cohort;
    } else if (key == "k_sweep") config.k_sweep = parse_sweep(value);
    else if (key == "max_cases") config.max_cases = parse_size(value, key);
    else if (key == "out") config.out_dir = value;
    else if (key == "format") {
        config.formats.clear();
        std::stringstream ss(value);
        std::string fmt;
        while (std::getline(ss, fmt, ',')) {
            fmt = trim(fmt);
            if (fmt != "csv" && fmt != "json" && fmt != "svg")
                throw InputError("format must be a subset of csv,json,svg; got \"" + fmt + "\"");
            config.formats.insert(fmt);
        }
        if (config.formats.empty()) throw InputError("format list is empty");
    } else {
        throw InputError("unknown config key \"" + key + "\"");
    }
}

void require_file(const std::string& path, const std::string& what) {
    if (path.empty()) throw InputError("missing required setting: " + what);
    if (!fs::exists(path)) throw InputError(what + " does not exist: " + path);
}

FilterConfig load_filter_config(const RunConfig& config) {
    FilterConfig filter;
    if (!config.closed_class_path.empty())
        filter.closed_class_words = load_word_list(config.closed_class_path);
    if (!config.extra_stop_path.empty())
        filter.extra_stop_words = load_word_list(config.extra_stop_path);
    if (!config.keep_words_path.empty())
        filter.keep_words = load_word_list(config.keep_words_path);
    if (!config.generic_blocklist_path.empty())
        filter.generic_word_blocklist = load_word_list(config.generic_blocklist_path);
    return filter;
}

EmotionLexicon load_adapted_lexicon(const RunConfig& config) {
    EmotionLexicon lex = load_emotion_lexicon(config.emotion_lexicon_path);
    if (!config.adaptations_path.empty()) lex = apply_adaptations(std::move(lex), config.adaptations_path);
    return lex;
}

class ReportSink {
public:
    ReportSink(const RunConfig& config, std::string command)
        : config_(config), command_(std::move(command)) {
        if (!config.dry_run) fs::create_directories(config.out_dir);
    }

    void write(const std::string& filename, const std::string& bytes) {
        const std::string path = (fs::path(config_.out_dir) / filename).string();
        if (!config_.dry_run) {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw InputError("cannot write report file: " + path);
            out << bytes;
        }
        result_.written.push_back(path);
    }

    void warn(std::string message) { result_.warnings.push_back(std::move(message)); }

    bool wants(const std::string& fmt) const { return config_.formats.count(fmt) > 0; }

    void finish(const std::map<std::string, std::string>& settings,
                const std::vector<std::string>& input_paths) {
        std::vector<std::pair<std::string, std::string>> digests;
        for (const auto& path : input_paths) {
            if (!path.empty()) digests.emplace_back(path, sha256_file_hex(path));
        }
        write("manifest.json", manifest_json(command_, settings, digests));
    }

    RunResult take() { return std::move(result_); }

private:
    const RunConfig& config_;
    std::string command_;
    RunResult result_;
};

std::map<std::string, std::string> common_settings(const RunConfig& config) {
    std::map<std::string, std::string> s;
    s["corpus"] = config.corpus_path;
    s["corpus_format"] = config.corpus_format == CorpusFormat::JsonLines ? "jsonl" : "csv";
    s["out"] = config.out_dir;
    std::string formats;
    for (const auto& f : config.formats) formats += (formats.empty() ? "" : ",") + f;
    s["format"] = formats;
    if (config.cohort_filter) s["cohort"] = std::string(cohort_name(*config.cohort_filter));
    return s;
}

std::vector<const Transcript*> scope_transcripts(const std::vector<Transcript>& transcripts,
                                                 std::optional<Cohort> cohort_filter) {
    std::vector<const Transcript*> out;
    for (const auto& t : transcripts) {
        if (!cohort_filter || t.cohort == *cohort_filter) out.push_back(&t);
    }
    return out;
}

struct ClassifiedCorpus {
    std::vector<EmotionAssignment> assignments;
    std::map<Cohort, std::size_t> unclassified;
    std::map<Cohort, std::size_t> classified;
};

// Classify each distinct labeled utterance once, tagged with its
// transcript's cohort and time point.
ClassifiedCorpus classify_subset(const std::vector<LabeledUtterance>& subset,
                                 const EmotionLexicon& lex, const FilterConfig& filter) {
    ClassifiedCorpus out;
    const Utterance* last = nullptr;
    for (const auto& item : subset) {
        if (item.utterance == last) continue;  // one classification per utterance
        last = item.utterance;
        auto tokens = filter_tokens(tokenize(item.utterance->text), filter);
        auto assignment = classify_utterance(tokens, lex);
        if (assignment) {
            assignment->transcript_id = item.utterance->transcript_id;
            assignment->line_index = item.utterance->line_index;
            assignment->cohort = item.transcript->cohort;
            assignment->time_point = item.transcript->time_point;
            out.assignments.push_back(std::move(*assignment));
            ++out.classified[item.transcript->cohort];
        } else {
            ++out.unclassified[item.transcript->cohort];
        }
    }
    return out;
}

}  // namespace

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw InputError(path + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        try {
            apply_setting(config, key, value);
        } catch (const InputError& e) {
            throw InputError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void validate_config(const RunConfig& config, const std::string& command) {
    require_file(config.corpus_path, "corpus");
    const bool all = command == "validate";  // checks whatever is referenced

    if (command == "emotions") {
        require_file(config.emotion_lexicon_path, "emotion_lexicon");
        require_file(config.label_map_path, "label_map");
    }
    if (command == "sentiment") {
        require_file(config.positive_words_path, "positive_words");
        require_file(config.negative_words_path, "negative_words");
    }
    if (command == "sentiment" || all) {
        if (config.bin_size == 0) throw InputError("bin_size must be >= 1");
    }
    if (command == "topics" || all) {
        if (config.chunk_size == 0) throw InputError("chunk_size must be >= 1");
        if (config.nmf.k == 0) throw InputError("k must be >= 1");
        if (config.nmf.alpha < 0.0) throw InputError("alpha must be >= 0");
        if (config.nmf.l1_ratio < 0.0 || config.nmf.l1_ratio > 1.0)
            throw InputError("l1_ratio must be in [0,1]");
        if (config.nmf.max_iter == 0) throw InputError("max_iter must be >= 1");
        if (config.min_df == 0) throw InputError("min_df must be >= 1");
        if (config.max_df_ratio <= 0.0 || config.max_df_ratio > 1.0)
            throw InputError("max_df_ratio must be in (0,1]");
    }

    // Optional inputs must exist when referenced.
    struct Named { const std::string& path; const char* what; };
    for (const auto& [path, what] : {Named{config.emotion_lexicon_path, "emotion_lexicon"},
                                     Named{config.adaptations_path, "adaptations"},
                                     Named{config.label_map_path, "label_map"},
                                     Named{config.positive_words_path, "positive_words"},
                                     Named{config.negative_words_path, "negative_words"},
                                     Named{config.closed_class_path, "closed_class"},
                                     Named{config.extra_stop_path, "extra_stop"},
                                     Named{config.keep_words_path, "keep_words"},
                                     Named{config.generic_blocklist_path, "generic_blocklist"}}) {
        if (!path.empty()) require_file(path, what);
    }
    if (config.top_n == 0) throw InputError("top_n must be >= 1");
}

RunResult run_emotions(const RunConfig& config) {
    validate_config(config, "emotions");
    ReportSink sink(config, "emotions");

    const auto transcripts = parse_corpus(config.corpus_path, config.corpus_format);
    const LabelMap label_map = LabelMap::load(config.label_map_path);
    const EmotionLexicon lex = load_adapted_lexicon(config);
    const FilterConfig filter = load_filter_config(config);

    SelectionDiagnostics diag;
    const auto subset = select_emotion_utterances(transcripts, label_map, &diag);
    if (subset.empty()) throw InputError("empty emotion subset: no utterance has a mappable label");
    if (diag.unmapped_labels > 0)
        sink.warn(std::to_string(diag.unmapped_labels) + " labels had no mapping");

    const ClassifiedCorpus classified = classify_subset(subset, lex, filter);
    if (classified.assignments.empty())
        throw InputError("empty emotion subset: no labeled utterance matched the lexicon");

    // Distribution per cohort: researcher codes (over label pairs) next to
    // lexicon assignments (over classified utterances).
    std::map<GroupKey, std::size_t> unclassified;
    for (const auto& [cohort, count] : classified.unclassified)
        unclassified[GroupKey{cohort, std::nullopt}] = count;
    const auto profiles = emotion_profiles(classified.assignments, unclassified, false);

    std::vector<DistributionGroup> groups;
    for (Cohort cohort : {Cohort::IddFamily, Cohort::Peer}) {
        DistributionGroup g;
        g.cohort = cohort;

        std::map<CodedEmotion, std::size_t> coded_counts;
        for (const auto& item : subset) {
            if (item.transcript->cohort != cohort) continue;
            ++coded_counts[item.coded];
            ++g.n_label_pairs;
        }
        for (const auto& [coded, count] : coded_counts)
            g.original[coded] = static_cast<double>(count) / static_cast<double>(g.n_label_pairs);

        for (const auto& profile : profiles) {
            if (profile.group.cohort != cohort) continue;
            g.lexicon = profile.proportions;
            g.n_classified = profile.n_classified;
            g.n_unclassified = profile.n_unclassified;
        }
        if (g.n_classified == 0) {
            auto it = classified.unclassified.find(cohort);
            g.n_unclassified = it != classified.unclassified.end() ? it->second : 0;
        }

        if (g.n_label_pairs > 0) groups.push_back(std::move(g));
    }

    if (sink.wants("csv")) {
        std::ostringstream out;
        write_distribution_csv(out, groups);
        sink.write("emotion_distribution.csv", out.str());
    }
    if (sink.wants("json")) sink.write("emotion_distribution.json", distribution_json(groups));

    const IntensityTable split = mean_intensity(classified.assignments, true);
    const IntensityTable pooled = mean_intensity(classified.assignments, false);
    if (sink.wants("csv")) {
        std::ostringstream out;
        write_intensity_csv(out, split, pooled);
        sink.write("emotion_intensity.csv", out.str());
    }
    if (sink.wants("json")) sink.write("emotion_intensity.json", intensity_json(split, pooled));
    if (sink.wants("svg")) sink.write("emotion_intensity.svg", intensity_chart_svg(split));

    std::vector<TopWordsGroup> top_groups;
    const auto mode = config.all_hits ? TopWordsMode::AllHits : TopWordsMode::TriggerOnly;
    for (Cohort cohort : {Cohort::IddFamily, Cohort::Peer}) {
        std::vector<EmotionAssignment> cohort_assignments;
        for (const auto& a : classified.assignments)
            if (a.cohort == cohort) cohort_assignments.push_back(a);
        if (cohort_assignments.empty()) continue;
        for (Emotion e : kEmotionWheel) {
            TopWordsGroup g;
            g.cohort = cohort;
            g.emotion = e;
            g.words = top_emotion_words(cohort_assignments, e, config.top_n,
                                        filter.generic_word_blocklist, mode);
            if (!g.words.empty()) top_groups.push_back(std::move(g));
        }
    }
    if (sink.wants("csv")) {
        std::ostringstream out;
        write_top_words_csv(out, top_groups);
        sink.write("emotion_top_words.csv", out.str());
    }
    if (sink.wants("json")) sink.write("emotion_top_words.json", top_words_json(top_groups));

    auto settings = common_settings(config);
    settings["emotion_lexicon"] = config.emotion_lexicon_path;
    settings["adaptations"] = config.adaptations_path;
    settings["label_map"] = config.label_map_path;
    settings["top_n"] = std::to_string(config.top_n);
    settings["all_hits"] = config.all_hits ? "true" : "false";
    sink.finish(settings,
                {config.corpus_path, config.emotion_lexicon_path, config.adaptations_path,
                 config.label_map_path, config.closed_class_path, config.extra_stop_path,
                 config.keep_words_path, config.generic_blocklist_path});
    return sink.take();
}

RunResult run_sentiment(const RunConfig& config) {
    validate_config(config, "sentiment");
    ReportSink sink(config, "sentiment");

    const auto transcripts = parse_corpus(config.corpus_path, config.corpus_format);
    const FilterConfig filter = load_filter_config(config);
    const PolarityLoadResult loaded =
        load_polarity_lexicon(config.positive_words_path, config.negative_words_path);
    for (const auto& w : loaded.warnings) sink.warn(w);

    auto scoped = scope_transcripts(transcripts, config.cohort_filter);
    if (config.max_cases > 0 && scoped.size() > config.max_cases) scoped.resize(config.max_cases);
    if (scoped.empty()) throw InputError("no transcripts in scope");

    std::vector<SentimentSeries> series;
    series.reserve(scoped.size());
    for (const auto* t : scoped)
        series.push_back(sentiment_series(*t, loaded.lexicon, filter, config.bin_size));

    if (sink.wants("csv")) {
        std::ostringstream out;
        write_sentiment_series_csv(out, series);
        sink.write("sentiment_series.csv", out.str());
    }
    if (sink.wants("json")) sink.write("sentiment_series.json", sentiment_series_json(series));

    const auto rows = cross_case_table(series, config.tie_margin);
    if (sink.wants("csv")) {
        std::ostringstream out;
        write_cross_case_csv(out, rows);
        sink.write("sentiment_cross_case.csv", out.str());
    }
    if (sink.wants("json")) sink.write("sentiment_cross_case.json", cross_case_json(rows));
    if (sink.wants("svg")) sink.write("sentiment_cases.svg", sentiment_chart_svg(series));

    auto settings = common_settings(config);
    settings["positive_words"] = config.positive_words_path;
    settings["negative_words"] = config.negative_words_path;
    settings["bin_size"] = std::to_string(config.bin_size);
    settings["tie_margin"] = std::to_string(config.tie_margin);
    if (config.max_cases > 0) settings["max_cases"] = std::to_string(config.max_cases);
    sink.finish(settings, {config.corpus_path, config.positive_words_path,
                           config.negative_words_path, config.closed_class_path,
                           config.extra_stop_path, config.keep_words_path});
    return sink.take();
}

RunResult run_topics(const RunConfig& config) {
    validate_config(config, "topics");
    ReportSink sink(config, "topics");

    const auto transcripts = parse_corpus(config.corpus_path, config.corpus_format);
    const FilterConfig filter = load_filter_config(config);

    auto scoped = scope_transcripts(transcripts, config.cohort_filter);
    if (scoped.empty()) throw InputError("no transcripts in scope");
    std::vector<Transcript> scoped_copy;
    scoped_copy.reserve(scoped.size());
    for (const auto* t : scoped) scoped_copy.push_back(*t);

    auto documents = chunk_transcripts(scoped_copy, config.chunk_size);
    for (auto& doc : documents) {
        for (const auto& text : doc.texts) {
            auto tokens = filter_tokens(tokenize(text), filter);
            doc.tokens.insert(doc.tokens.end(), tokens.begin(), tokens.end());
        }
    }

    const TfidfResult tfidf = build_tfidf(documents, config.min_df, config.max_df_ratio);

    std::vector<std::size_t> ks;
    if (config.k_sweep) {
        for (std::size_t k = config.k_sweep->first; k <= config.k_sweep->second; ++k)
            ks.push_back(k);
    } else {
        ks.push_back(config.nmf.k);
    }

    std::ostringstream sweep_summary;
    sweep_summary << "k,objective,converged,iterations\n";

    for (std::size_t k : ks) {
        NmfParams params = config.nmf;
        params.k = k;
        const NmfModel model = nmf_fit(tfidf.matrix, params);

        const std::string suffix = config.k_sweep ? "_k" + std::to_string(k) : "";
        if (sink.wants("json"))
            sink.write("topic_model" + suffix + ".json",
                       topic_model_json(model, tfidf.vocabulary, config.top_n));
        if (sink.wants("csv")) {
            {
                std::ostringstream out;
                write_matrix_csv(out, model.w, "document", model.doc_ids);
                sink.write("topic_W" + suffix + ".csv", out.str());
            }
            {
                std::ostringstream out;
                std::vector<std::string> topic_ids;
                for (std::size_t t = 0; t < k; ++t) topic_ids.push_back("topic" + std::to_string(t));
                write_matrix_csv(out, model.h, "topic", topic_ids);
                sink.write("topic_H" + suffix + ".csv", out.str());
            }
            {
                std::ostringstream out;
                write_topic_terms_csv(out, model, tfidf.vocabulary, config.top_n);
                sink.write("topic_terms" + suffix + ".csv", out.str());
            }
        }
        if (sink.wants("svg"))
            sink.write("topic_terms" + suffix + ".svg",
                       topic_chart_svg(model, tfidf.vocabulary, config.top_n));

        sweep_summary << k << ',' << format_double(model.objective_trace.back()) << ','
                      << (model.converged ? "true" : "false") << ',' << model.iterations << '\n';
    }

    if (config.k_sweep && sink.wants("csv"))
        sink.write("ksweep_summary.csv", sweep_summary.str());

    auto settings = common_settings(config);
    settings["chunk_size"] = std::to_string(config.chunk_size);
    settings["k"] = config.k_sweep
                        ? std::to_string(config.k_sweep->first) + ".." +
                              std::to_string(config.k_sweep->second)
                        : std::to_string(config.nmf.k);
    settings["alpha"] = format_double(config.nmf.alpha);
    settings["l1_ratio"] = format_double(config.nmf.l1_ratio);
    settings["max_iter"] = std::to_string(config.nmf.max_iter);
    settings["tol"] = format_double(config.nmf.tol);
    settings["seed"] = std::to_string(config.nmf.seed);
    settings["init"] = std::string(nmf_init_name(config.nmf.init));
    settings["min_df"] = std::to_string(config.min_df);
    settings["max_df_ratio"] = format_double(config.max_df_ratio);
    settings["top_n"] = std::to_string(config.top_n);
    sink.finish(settings, {config.corpus_path, config.closed_class_path, config.extra_stop_path,
                           config.keep_words_path});
    return sink.take();
}

RunResult run_validate(const RunConfig& config) {
    validate_config(config, "validate");
    RunResult result;

    // Load everything eagerly so malformed inputs surface now.
    const auto transcripts = parse_corpus(config.corpus_path, config.corpus_format);
    if (!config.emotion_lexicon_path.empty()) load_adapted_lexicon(config);
    if (!config.positive_words_path.empty() && !config.negative_words_path.empty()) {
        auto loaded = load_polarity_lexicon(config.positive_words_path, config.negative_words_path);
        for (auto& w : loaded.warnings) result.warnings.push_back(std::move(w));
    }
    if (!config.label_map_path.empty()) {
        const LabelMap label_map = LabelMap::load(config.label_map_path);
        SelectionDiagnostics diag;
        const auto subset = select_emotion_utterances(transcripts, label_map, &diag);
        if (subset.empty()) result.warnings.push_back("no utterance has a mappable label");
        if (diag.unmapped_labels > 0)
            result.warnings.push_back(std::to_string(diag.unmapped_labels) +
                                      " labels have no mapping");
    }
    load_filter_config(config);
    return result;
}

}  // namespace dyadscope
