#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dyadscope/corpus.hpp"
#include "dyadscope/lexicon.hpp"
#include "dyadscope/textprep.hpp"

namespace dyadscope {

enum class Polarity : std::uint8_t { Positive, Negative, Neutral };

std::string_view polarity_name(Polarity p);

// Hit-count majority; ties (including zero hits) are neutral.
Polarity utterance_polarity(const std::vector<std::string>& tokens, const PolarityLexicon& lex);

struct SentimentBin {
    std::size_t positive = 0;
    std::size_t negative = 0;
};

struct SentimentSeries {
    std::string transcript_id;
    std::size_t bin_size = 20;  // lines per bin
    std::vector<SentimentBin> bins;
    std::size_t positive_total = 0;
    std::size_t negative_total = 0;
};

// Bins utterances by line position (ceil(n/bin_size) bins); neutral
// utterances count in neither column. Tokens are filtered with `config`
// before lookup.
SentimentSeries sentiment_series(const Transcript& transcript, const PolarityLexicon& lex,
                                 const FilterConfig& config, std::size_t bin_size = 20);

struct CrossCaseRow {
    std::string transcript_id;
    std::size_t positive_total = 0;
    std::size_t negative_total = 0;
    long long net = 0;
    Polarity dominant = Polarity::Neutral;  // Neutral renders as BALANCED
    std::string sparkline;                  // "p:n|p:n|..." per bin
};

std::vector<CrossCaseRow> cross_case_table(const std::vector<SentimentSeries>& series,
                                           std::size_t tie_margin = 0);

}  // namespace dyadscope
