#include "dyadscope/report.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "dyadscope/svg.hpp"
#include "dyadscope/version.hpp"

namespace dyadscope {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kPositiveColor = "#2f7d32";
constexpr const char* kNegativeColor = "#b3382c";
const char* kSeriesColors[4] = {"#2c5f8a", "#7aa5c4", "#b3382c", "#e0907f"};

std::string group_label(const GroupKey& key) {
    std::string label(cohort_name(key.cohort));
    if (key.time_point) {
        label += "_";
        label += time_point_name(*key.time_point);
    } else {
        label += "_ALL";
    }
    for (char& c : label) c = static_cast<char>(std::tolower((unsigned char)c));
    return label;
}

std::vector<GroupKey> intensity_columns(const IntensityTable& split,
                                        const IntensityTable& pooled) {
    std::vector<GroupKey> columns;
    for (const auto& [key, row] : split) columns.push_back(key);
    for (const auto& [key, row] : pooled) columns.push_back(key);
    return columns;
}

ordered_json intensity_table_json(const IntensityTable& table) {
    ordered_json groups = ordered_json::array();
    for (const auto& [key, row] : table) {
        ordered_json cells = ordered_json::object();
        for (const auto& [emotion, cell] : row) {
            cells[std::string(emotion_name(emotion))] = {{"mean", cell.mean},
                                                         {"count", cell.count}};
        }
        ordered_json group = ordered_json::object();
        group["cohort"] = std::string(cohort_name(key.cohort));
        group["time_point"] =
            key.time_point ? ordered_json(std::string(time_point_name(*key.time_point)))
                           : ordered_json(nullptr);
        group["cells"] = std::move(cells);
        groups.push_back(std::move(group));
    }
    return groups;
}

}  // namespace

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, static_cast<std::size_t>(ptr - buf));
}

void write_distribution_csv(std::ostream& out, const std::vector<DistributionGroup>& groups) {
    out << "cohort,emotion,original_proportion,lexicon_proportion\n";
    for (const auto& g : groups) {
        for (std::size_t i = 0; i < kCodedEmotionCount; ++i) {
            const auto coded = static_cast<CodedEmotion>(i);
            out << cohort_name(g.cohort) << ',' << coded_emotion_name(coded) << ',';
            auto orig = g.original.find(coded);
            out << (orig != g.original.end() ? format_double(orig->second) : "0");
            out << ',';
            if (auto wheel = to_wheel(coded)) {
                auto lex = g.lexicon.find(*wheel);
                out << (lex != g.lexicon.end() ? format_double(lex->second) : "0");
            }
            // apprehension has no lexicon column: the wheel cannot emit it
            out << '\n';
        }
    }
}

std::string distribution_json(const std::vector<DistributionGroup>& groups) {
    ordered_json root;
    root["report"] = "emotion_distribution";
    ordered_json arr = ordered_json::array();
    for (const auto& g : groups) {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < kCodedEmotionCount; ++i) {
            const auto coded = static_cast<CodedEmotion>(i);
            ordered_json row;
            row["emotion"] = std::string(coded_emotion_name(coded));
            auto orig = g.original.find(coded);
            row["original"] = orig != g.original.end() ? orig->second : 0.0;
            if (auto wheel = to_wheel(coded)) {
                auto lex = g.lexicon.find(*wheel);
                row["lexicon"] = lex != g.lexicon.end() ? lex->second : 0.0;
            } else {
                row["lexicon"] = nullptr;
            }
            rows.push_back(std::move(row));
        }
        ordered_json group;
        group["cohort"] = std::string(cohort_name(g.cohort));
        group["n_label_pairs"] = g.n_label_pairs;
        group["n_classified"] = g.n_classified;
        group["n_unclassified"] = g.n_unclassified;
        group["rows"] = std::move(rows);
        arr.push_back(std::move(group));
    }
    root["groups"] = std::move(arr);
    return root.dump(2) + "\n";
}

void write_intensity_csv(std::ostream& out, const IntensityTable& split,
                         const IntensityTable& pooled) {
    const auto columns = intensity_columns(split, pooled);
    out << "emotion";
    for (const auto& key : columns) out << ',' << group_label(key);
    out << '\n';
    for (Emotion e : kEmotionWheel) {
        out << emotion_name(e);
        for (const auto& key : columns) {
            out << ',';
            const IntensityTable& table = key.time_point ? split : pooled;
            auto group = table.find(key);
            if (group != table.end()) {
                auto cell = group->second.find(e);
                if (cell != group->second.end()) out << format_double(cell->second.mean);
            }
        }
        out << '\n';
    }
}

std::string intensity_json(const IntensityTable& split, const IntensityTable& pooled) {
    ordered_json root;
    root["report"] = "emotion_intensity";
    root["by_time"] = intensity_table_json(split);
    root["pooled"] = intensity_table_json(pooled);
    return root.dump(2) + "\n";
}

void write_top_words_csv(std::ostream& out, const std::vector<TopWordsGroup>& groups) {
    out << "cohort,emotion,rank,word,count\n";
    for (const auto& g : groups) {
        for (std::size_t i = 0; i < g.words.size(); ++i) {
            out << cohort_name(g.cohort) << ',' << emotion_name(g.emotion) << ',' << (i + 1)
                << ',' << csv_escape(g.words[i].first) << ',' << g.words[i].second << '\n';
        }
    }
}

std::string top_words_json(const std::vector<TopWordsGroup>& groups) {
    ordered_json root;
    root["report"] = "emotion_top_words";
    ordered_json arr = ordered_json::array();
    for (const auto& g : groups) {
        ordered_json words = ordered_json::array();
        for (const auto& [word, count] : g.words) {
            words.push_back({{"word", word}, {"count", count}});
        }
        arr.push_back({{"cohort", std::string(cohort_name(g.cohort))},
                       {"emotion", std::string(emotion_name(g.emotion))},
                       {"words", std::move(words)}});
    }
    root["groups"] = std::move(arr);
    return root.dump(2) + "\n";
}

std::string intensity_chart_svg(const IntensityTable& split) {
    // Grouped bars: eight emotion clusters, one bar per (cohort, time).
    std::vector<GroupKey> series;
    for (const auto& [key, row] : split) series.push_back(key);

    const double panel_left = 60, panel_top = 40, panel_height = 220;
    const double cluster_width = 26.0 * (static_cast<double>(series.size()) + 1.0);
    const double width = panel_left + cluster_width * kEmotionCount + 160;
    const double height = panel_top + panel_height + 50;

    SvgCanvas svg(width, height);
    svg.title("mean emotion intensity");

    const double baseline = panel_top + panel_height;
    svg.line(panel_left, baseline, panel_left + cluster_width * kEmotionCount, baseline,
             "#444444");
    svg.line(panel_left, panel_top, panel_left, baseline, "#444444");
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = tick * 0.25;
        const double y = baseline - v * panel_height;
        svg.line(panel_left - 4, y, panel_left, y, "#444444");
        svg.text(panel_left - 8, y + 4, svg_num(v), 10, "end");
    }

    for (std::size_t e = 0; e < kEmotionCount; ++e) {
        const double x0 = panel_left + cluster_width * static_cast<double>(e);
        svg.open_group("cluster");
        for (std::size_t s = 0; s < series.size(); ++s) {
            const auto& row = split.at(series[s]);
            auto cell = row.find(kEmotionWheel[e]);
            const double v = cell != row.end() ? cell->second.mean : 0.0;
            const double bar_h = v * panel_height;
            svg.rect(x0 + 13 + 26.0 * static_cast<double>(s), baseline - bar_h, 20, bar_h,
                     kSeriesColors[s % 4]);
        }
        svg.close_group();
        svg.text(x0 + cluster_width / 2.0, baseline + 16,
                 std::string(emotion_name(kEmotionWheel[e])), 10, "middle");
    }

    double legend_y = panel_top;
    const double legend_x = panel_left + cluster_width * kEmotionCount + 16;
    for (std::size_t s = 0; s < series.size(); ++s) {
        svg.rect(legend_x, legend_y, 12, 12, kSeriesColors[s % 4]);
        svg.text(legend_x + 18, legend_y + 10, group_label(series[s]), 10);
        legend_y += 18;
    }
    return svg.finish();
}

void write_sentiment_series_csv(std::ostream& out, const std::vector<SentimentSeries>& series) {
    out << "transcript_id,bin_index,positive,negative\n";
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.bins.size(); ++i) {
            out << csv_escape(s.transcript_id) << ',' << i << ',' << s.bins[i].positive << ','
                << s.bins[i].negative << '\n';
        }
    }
}

std::string sentiment_series_json(const std::vector<SentimentSeries>& series) {
    ordered_json root;
    root["report"] = "sentiment_series";
    ordered_json arr = ordered_json::array();
    for (const auto& s : series) {
        ordered_json bins = ordered_json::array();
        for (const auto& b : s.bins) bins.push_back({{"positive", b.positive},
                                                     {"negative", b.negative}});
        arr.push_back({{"transcript_id", s.transcript_id},
                       {"bin_size", s.bin_size},
                       {"positive_total", s.positive_total},
                       {"negative_total", s.negative_total},
                       {"bins", std::move(bins)}});
    }
    root["series"] = std::move(arr);
    return root.dump(2) + "\n";
}

void write_cross_case_csv(std::ostream& out, const std::vector<CrossCaseRow>& rows) {
    out << "transcript_id,positive_total,negative_total,net,dominant,sparkline\n";
    for (const auto& row : rows) {
        out << csv_escape(row.transcript_id) << ',' << row.positive_total << ','
            << row.negative_total << ',' << row.net << ','
            << (row.dominant == Polarity::Neutral ? "BALANCED"
                                                  : std::string(polarity_name(row.dominant)))
            << ',' << csv_escape(row.sparkline) << '\n';
    }
}

std::string cross_case_json(const std::vector<CrossCaseRow>& rows) {
    ordered_json root;
    root["report"] = "sentiment_cross_case";
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
        arr.push_back({{"transcript_id", row.transcript_id},
                       {"positive_total", row.positive_total},
                       {"negative_total", row.negative_total},
                       {"net", row.net},
                       {"dominant", row.dominant == Polarity::Neutral
                                        ? "BALANCED"
                                        : std::string(polarity_name(row.dominant))}});
    }
    root["cases"] = std::move(arr);
    return root.dump(2) + "\n";
}

std::string sentiment_chart_svg(const std::vector<SentimentSeries>& series) {
    const std::size_t per_row = 4;
    const double panel_w = 210, panel_h = 120, pad = 16;
    const std::size_t n_rows = (series.size() + per_row - 1) / per_row;
    const double width = pad + (panel_w + pad) * static_cast<double>(std::min(series.size(),
                                                                              per_row));
    const double height = 40 + (panel_h + pad) * static_cast<double>(n_rows);

    SvgCanvas svg(std::max(width, 260.0), height);
    svg.title("sentiment per case");

    std::size_t max_count = 1;
    for (const auto& s : series)
        for (const auto& b : s.bins) max_count = std::max({max_count, b.positive, b.negative});

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const double px = pad + (panel_w + pad) * static_cast<double>(i % per_row);
        const double py = 32 + (panel_h + pad) * static_cast<double>(i / per_row);
        const double mid = py + panel_h / 2.0;
        const double half = panel_h / 2.0 - 14;

        svg.open_group("panel");
        svg.rect(px, py, panel_w, panel_h, "#f7f7f7");
        svg.line(px + 4, mid, px + panel_w - 4, mid, "#888888");
        const double slot = (panel_w - 8) / static_cast<double>(std::max<std::size_t>(s.bins.size(), 1));
        const double bar_w = std::max(2.0, slot * 0.7);
        for (std::size_t b = 0; b < s.bins.size(); ++b) {
            const double x = px + 4 + slot * static_cast<double>(b) + (slot - bar_w) / 2.0;
            const double up = half * static_cast<double>(s.bins[b].positive) /
                              static_cast<double>(max_count);
            const double down = half * static_cast<double>(s.bins[b].negative) /
                                static_cast<double>(max_count);
            if (s.bins[b].positive > 0) svg.rect(x, mid - up, bar_w, up, kPositiveColor);
            if (s.bins[b].negative > 0) svg.rect(x, mid, bar_w, down, kNegativeColor);
        }
        svg.text(px + 4, py + 12, s.transcript_id, 10);
        svg.close_group();
    }
    return svg.finish();
}

std::string topic_model_json(const NmfModel& model, const Vocabulary& vocab,
                             std::size_t terms_per_topic) {
    ordered_json root;
    root["report"] = "topic_model";
    root["k"] = model.params.k;
    root["hyperparameters"] = {{"alpha", model.params.alpha},
                               {"l1_ratio", model.params.l1_ratio},
                               {"max_iter", model.params.max_iter},
                               {"tol", model.params.tol},
                               {"seed", model.params.seed},
                               {"init", std::string(nmf_init_name(model.params.init))}};
    root["converged"] = model.converged;
    root["iterations"] = model.iterations;
    root["objective"] = model.objective_trace.empty() ? 0.0 : model.objective_trace.back();
    root["objective_trace"] = model.objective_trace;
    root["vocabulary"] = vocab.terms;

    ordered_json topics = ordered_json::array();
    for (std::size_t topic = 0; topic < model.params.k; ++topic) {
        ordered_json terms = ordered_json::array();
        for (const auto& [term, weight] : top_terms(model, vocab, topic, terms_per_topic)) {
            terms.push_back({{"term", term}, {"weight", weight}});
        }
        topics.push_back({{"topic", topic}, {"top_terms", std::move(terms)}});
    }
    root["topics"] = std::move(topics);
    return root.dump(2) + "\n";
}

void write_matrix_csv(std::ostream& out, const Matrix& m, const std::string& row_label,
                      const std::vector<std::string>& row_ids) {
    out << row_label;
    for (std::size_t c = 0; c < m.cols(); ++c) out << ",c" << c;
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << csv_escape(r < row_ids.size() ? row_ids[r] : "r" + std::to_string(r));
        for (std::size_t c = 0; c < m.cols(); ++c) out << ',' << format_double(m.at(r, c));
        out << '\n';
    }
}

void write_topic_terms_csv(std::ostream& out, const NmfModel& model, const Vocabulary& vocab,
                           std::size_t terms_per_topic) {
    out << "topic,rank,term,weight\n";
    for (std::size_t topic = 0; topic < model.params.k; ++topic) {
        const auto terms = top_terms(model, vocab, topic, terms_per_topic);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            out << topic << ',' << (i + 1) << ',' << csv_escape(terms[i].first) << ','
                << format_double(terms[i].second) << '\n';
        }
    }
}

std::string topic_chart_svg(const NmfModel& model, const Vocabulary& vocab,
                            std::size_t terms_per_topic) {
    const std::size_t per_row = 3;
    const double panel_w = 240, panel_h = 24.0 * static_cast<double>(terms_per_topic) + 30;
    const double pad = 16;
    const std::size_t k = model.params.k;
    const std::size_t n_rows = (k + per_row - 1) / per_row;
    const double width = pad + (panel_w + pad) * static_cast<double>(std::min(k, per_row));
    const double height = 40 + (panel_h + pad) * static_cast<double>(n_rows);

    SvgCanvas svg(std::max(width, 260.0), height);
    svg.title("topic top terms");

    for (std::size_t topic = 0; topic < k; ++topic) {
        const auto terms = top_terms(model, vocab, topic, terms_per_topic);
        double max_weight = 0.0;
        for (const auto& [term, weight] : terms) max_weight = std::max(max_weight, weight);
        if (max_weight <= 0.0) max_weight = 1.0;

        const double px = pad + (panel_w + pad) * static_cast<double>(topic % per_row);
        const double py = 32 + (panel_h + pad) * static_cast<double>(topic / per_row);

        svg.open_group("panel");
        svg.rect(px, py, panel_w, panel_h, "#f7f7f7");
        svg.text(px + 6, py + 16, "topic " + std::to_string(topic + 1), 12);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const double y = py + 24 + 24.0 * static_cast<double>(i);
            const double bar = (panel_w - 110) * terms[i].second / max_weight;
            svg.rect(px + 100, y, std::max(bar, 1.0), 14, kSeriesColors[0]);
            svg.text(px + 94, y + 11, terms[i].first, 10, "end");
        }
        svg.close_group();
    }
    return svg.finish();
}

std::string manifest_json(const std::string& command,
                          const std::map<std::string, std::string>& settings,
                          const std::vector<std::pair<std::string, std::string>>& input_digests) {
    ordered_json root;
    root["tool"] = "dyadscope";
    root["version"] = kVersion;
    root["command"] = command;
    ordered_json cfg = ordered_json::object();
    for (const auto& [key, value] : settings) cfg[key] = value;
    root["settings"] = std::move(cfg);
    ordered_json inputs = ordered_json::array();
    for (const auto& [path, digest] : input_digests) {
        inputs.push_back({{"path", path}, {"sha256", digest}});
    }
    root["inputs"] = std::move(inputs);
    return root.dump(2) + "\n";
}

}  // namespace dyadscope
