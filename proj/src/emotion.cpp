#include "dyadscope/emotion.hpp"

#include <algorithm>

#include "dyadscope/error.hpp"

namespace dyadscope {

std::optional<EmotionAssignment> classify_utterance(const std::vector<std::string>& tokens,
                                                    const EmotionLexicon& lex) {
    EmotionAssignment best;
    bool found = false;

    for (const auto& token : tokens) {
        const auto* assocs = lex.find(token);
        if (!assocs) continue;
        for (const auto& a : *assocs) {
            best.hits.push_back(LexiconHit{token, a.emotion, a.score});

            auto& cell = best.candidates[static_cast<std::size_t>(a.emotion)];
            if (!cell || a.score > *cell) cell = a.score;

            // Strict comparisons keep the earliest token on full ties.
            bool better = !found || a.score > best.score ||
                          (a.score == best.score &&
                           static_cast<int>(a.emotion) < static_cast<int>(best.emotion));
            if (better) {
                best.emotion = a.emotion;
                best.score = a.score;
                best.trigger_word = token;
                found = true;
            }
        }
    }

    if (!found) return std::nullopt;
    return best;
}

std::map<Emotion, double> emotion_distribution(
    const std::vector<EmotionAssignment>& assignments) {
    if (assignments.empty())
        throw InputError("emotion_distribution: no assignments (empty emotion subset)");

    std::array<std::size_t, kEmotionCount> counts{};
    for (const auto& a : assignments) ++counts[static_cast<std::size_t>(a.emotion)];

    std::map<Emotion, double> out;
    const double denom = static_cast<double>(assignments.size());
    for (Emotion e : kEmotionWheel)
        out[e] = static_cast<double>(counts[static_cast<std::size_t>(e)]) / denom;
    return out;
}

IntensityTable mean_intensity(const std::vector<EmotionAssignment>& assignments,
                              bool split_by_time) {
    std::map<GroupKey, std::array<std::pair<double, std::size_t>, kEmotionCount>> sums;
    for (const auto& a : assignments) {
        GroupKey key{a.cohort, split_by_time ? std::optional<TimePoint>(a.time_point)
                                             : std::nullopt};
        auto& cell = sums[key][static_cast<std::size_t>(a.emotion)];
        cell.first += a.score;
        cell.second += 1;
    }

    IntensityTable table;
    for (const auto& [key, cells] : sums) {
        auto& row = table[key];
        for (Emotion e : kEmotionWheel) {
            const auto& [sum, count] = cells[static_cast<std::size_t>(e)];
            if (count > 0) row[e] = MeanIntensityCell{sum / static_cast<double>(count), count};
        }
    }
    return table;
}

std::vector<EmotionProfile> emotion_profiles(
    const std::vector<EmotionAssignment>& assignments,
    const std::map<GroupKey, std::size_t>& unclassified, bool split_by_time) {
    std::map<GroupKey, std::vector<EmotionAssignment>> by_group;
    for (const auto& a : assignments) {
        GroupKey key{a.cohort,
                     split_by_time ? std::optional<TimePoint>(a.time_point) : std::nullopt};
        by_group[key].push_back(a);
    }

    std::vector<EmotionProfile> profiles;
    for (auto& [key, group_assignments] : by_group) {
        EmotionProfile profile;
        profile.group = key;
        profile.proportions = emotion_distribution(group_assignments);
        auto table = mean_intensity(group_assignments, split_by_time);
        profile.mean_intensity = table.at(key);
        profile.n_classified = group_assignments.size();
        auto it = unclassified.find(key);
        profile.n_unclassified = it != unclassified.end() ? it->second : 0;
        profiles.push_back(std::move(profile));
    }
    return profiles;
}

std::vector<std::pair<std::string, std::size_t>> top_emotion_words(
    const std::vector<EmotionAssignment>& assignments, Emotion emotion, std::size_t k,
    const std::set<std::string>& blocklist, TopWordsMode mode) {
    if (k == 0) throw InputError("top_emotion_words: k must be >= 1");

    std::map<std::string, std::size_t> counts;
    for (const auto& a : assignments) {
        if (mode == TopWordsMode::TriggerOnly) {
            if (a.emotion != emotion) continue;
            if (blocklist.count(a.trigger_word)) continue;
            ++counts[a.trigger_word];
        } else {
            for (const auto& hit : a.hits) {
                if (hit.emotion != emotion) continue;
                if (blocklist.count(hit.word)) continue;
                ++counts[hit.word];
            }
        }
    }

    std::vector<std::pair<std::string, std::size_t>> rows(counts.begin(), counts.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (rows.size() > k) rows.resize(k);
    return rows;
}

}  // namespace dyadscope
