#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dyadscope/emotion.hpp"
#include "dyadscope/sentiment.hpp"
#include "dyadscope/topics.hpp"

namespace dyadscope {

// One cohort's side-by-side distribution: researcher codes vs. lexicon.
struct DistributionGroup {
    Cohort cohort = Cohort::IddFamily;
    std::map<CodedEmotion, double> original;  // proportions over label pairs
    std::map<Emotion, double> lexicon;        // proportions over assignments
    std::size_t n_label_pairs = 0;
    std::size_t n_classified = 0;
    std::size_t n_unclassified = 0;
};

struct TopWordsGroup {
    Cohort cohort = Cohort::IddFamily;
    Emotion emotion = Emotion::Anger;
    std::vector<std::pair<std::string, std::size_t>> words;
};

std::string csv_escape(const std::string& field);
std::string format_double(double v);  // shortest round-trip form

// Emotion reports: distribution (coded vs. lexicon per cohort), mean
// intensity per cohort and time point (plus pooled), top trigger words.
void write_distribution_csv(std::ostream& out, const std::vector<DistributionGroup>& groups);
std::string distribution_json(const std::vector<DistributionGroup>& groups);
void write_intensity_csv(std::ostream& out, const IntensityTable& split,
                         const IntensityTable& pooled);
std::string intensity_json(const IntensityTable& split, const IntensityTable& pooled);
void write_top_words_csv(std::ostream& out, const std::vector<TopWordsGroup>& groups);
std::string top_words_json(const std::vector<TopWordsGroup>& groups);
std::string intensity_chart_svg(const IntensityTable& split);

// Sentiment reports.
void write_sentiment_series_csv(std::ostream& out, const std::vector<SentimentSeries>& series);
std::string sentiment_series_json(const std::vector<SentimentSeries>& series);
void write_cross_case_csv(std::ostream& out, const std::vector<CrossCaseRow>& rows);
std::string cross_case_json(const std::vector<CrossCaseRow>& rows);
// Small multiples, one panel per transcript; positive bars above the
// midline, negative below.
std::string sentiment_chart_svg(const std::vector<SentimentSeries>& series);

// Topic reports.
std::string topic_model_json(const NmfModel& model, const Vocabulary& vocab,
                             std::size_t terms_per_topic);
void write_matrix_csv(std::ostream& out, const Matrix& m, const std::string& row_label,
                      const std::vector<std::string>& row_ids);
void write_topic_terms_csv(std::ostream& out, const NmfModel& model, const Vocabulary& vocab,
                           std::size_t terms_per_topic);
std::string topic_chart_svg(const NmfModel& model, const Vocabulary& vocab,
                            std::size_t terms_per_topic);

// Run manifest: effective settings + input digests + tool version.
// Deliberately timestamp-free so identical runs emit identical bytes.
std::string manifest_json(const std::string& command,
                          const std::map<std::string, std::string>& settings,
                          const std::vector<std::pair<std::string, std::string>>& input_digests);

}  // namespace dyadscope
