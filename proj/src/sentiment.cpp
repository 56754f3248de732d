#include "dyadscope/sentiment.hpp"

#include <cstdlib>

#include "dyadscope/error.hpp"

namespace dyadscope {

std::string_view polarity_name(Polarity p) {
    switch (p) {
        case Polarity::Positive: return "POSITIVE";
        case Polarity::Negative: return "NEGATIVE";
        case Polarity::Neutral: return "NEUTRAL";
    }
    return "";
}

Polarity utterance_polarity(const std::vector<std::string>& tokens, const PolarityLexicon& lex) {
    std::size_t positive = 0, negative = 0;
    for (const auto& token : tokens) {
        if (lex.positive.count(token)) ++positive;
        else if (lex.negative.count(token)) ++negative;
    }
    if (positive > negative) return Polarity::Positive;
    if (negative > positive) return Polarity::Negative;
    return Polarity::Neutral;
}

SentimentSeries sentiment_series(const Transcript& transcript, const PolarityLexicon& lex,
                                 const FilterConfig& config, std::size_t bin_size) {
    if (bin_size == 0) throw InputError("bin_size must be >= 1");

    SentimentSeries series;
    series.transcript_id = transcript.id;
    series.bin_size = bin_size;
    const std::size_t n = transcript.utterances.size();
    series.bins.resize((n + bin_size - 1) / bin_size);

    for (const auto& u : transcript.utterances) {
        Polarity p = utterance_polarity(filter_tokens(tokenize(u.text), config), lex);
        if (p == Polarity::Neutral) continue;
        auto& bin = series.bins[u.line_index / bin_size];
        if (p == Polarity::Positive) {
            ++bin.positive;
            ++series.positive_total;
        } else {
            ++bin.negative;
            ++series.negative_total;
        }
    }
    return series;
}

std::vector<CrossCaseRow> cross_case_table(const std::vector<SentimentSeries>& series,
                                           std::size_t tie_margin) {
    if (series.empty()) throw InputError("cross_case_table: no series");

    std::vector<CrossCaseRow> rows;
    rows.reserve(series.size());
    for (const auto& s : series) {
        CrossCaseRow row;
        row.transcript_id = s.transcript_id;
        row.positive_total = s.positive_total;
        row.negative_total = s.negative_total;
        row.net = static_cast<long long>(s.positive_total) -
                  static_cast<long long>(s.negative_total);
        if (static_cast<std::size_t>(std::llabs(row.net)) <= tie_margin) {
            row.dominant = Polarity::Neutral;
        } else {
            row.dominant = row.net > 0 ? Polarity::Positive : Polarity::Negative;
        }
        for (std::size_t i = 0; i < s.bins.size(); ++i) {
            if (i > 0) row.sparkline += '|';
            row.sparkline += std::to_string(s.bins[i].positive);
            row.sparkline += ':';
            row.sparkline += std::to_string(s.bins[i].negative);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace dyadscope
