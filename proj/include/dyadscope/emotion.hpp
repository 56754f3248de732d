#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dyadscope/corpus.hpp"
#include "dyadscope/emotion_wheel.hpp"
#include "dyadscope/lexicon.hpp"

namespace dyadscope {

struct LexiconHit {
    std::string word;
    Emotion emotion = Emotion::Anger;
    double score = 0.0;
};

struct EmotionAssignment {
    std::string transcript_id;
    std::size_t line_index = 0;
    Emotion emotion = Emotion::Anger;
    double score = 0.0;
    std::string trigger_word;
    // Per-emotion maximum score among this utterance's lexicon hits.
    std::array<std::optional<double>, kEmotionCount> candidates;
    // Every (word, emotion, score) hit, kept for the all-hits reporting
    // variant.
    std::vector<LexiconHit> hits;

    Cohort cohort = Cohort::IddFamily;
    TimePoint time_point = TimePoint::T1;
};

// Highest-scoring lexicon hit wins. Ties on score fall to the emotion
// earlier in the wheel order; ties on (score, emotion) keep the earliest
// token. Returns nothing when no token is in the lexicon.
std::optional<EmotionAssignment> classify_utterance(const std::vector<std::string>& tokens,
                                                    const EmotionLexicon& lex);

// Proportions over the chosen emotions; zero-count emotions are present
// with value 0. Values sum to 1 within 1e-9.
std::map<Emotion, double> emotion_distribution(const std::vector<EmotionAssignment>& assignments);

struct GroupKey {
    Cohort cohort = Cohort::IddFamily;
    std::optional<TimePoint> time_point;  // empty: pooled across time

    bool operator<(const GroupKey& other) const {
        if (cohort != other.cohort) return cohort < other.cohort;
        return time_point < other.time_point;
    }
};

struct MeanIntensityCell {
    double mean = 0.0;
    std::size_t count = 0;
};

using IntensityTable = std::map<GroupKey, std::map<Emotion, MeanIntensityCell>>;

// Mean assignment score per (group, chosen emotion). Emotions with no
// assignments in a group have no cell. split_by_time=false pools T1+T2.
IntensityTable mean_intensity(const std::vector<EmotionAssignment>& assignments,
                              bool split_by_time = true);

enum class TopWordsMode { TriggerOnly, AllHits };

// Trigger-word counts per emotion, blocklist excluded, count-desc then
// lexicographic, truncated to k. AllHits counts every lexicon hit for the
// emotion instead of just the winning trigger.
std::vector<std::pair<std::string, std::size_t>> top_emotion_words(
    const std::vector<EmotionAssignment>& assignments, Emotion emotion, std::size_t k,
    const std::set<std::string>& blocklist, TopWordsMode mode = TopWordsMode::TriggerOnly);

struct EmotionProfile {
    GroupKey group;
    std::map<Emotion, double> proportions;
    std::map<Emotion, MeanIntensityCell> mean_intensity;
    std::size_t n_classified = 0;
    std::size_t n_unclassified = 0;
};

// One profile per group present in the assignments. Unclassified counts
// are supplied by the caller (classification knows them, profiles don't).
std::vector<EmotionProfile> emotion_profiles(
    const std::vector<EmotionAssignment>& assignments,
    const std::map<GroupKey, std::size_t>& unclassified = {}, bool split_by_time = false);

}  // namespace dyadscope
