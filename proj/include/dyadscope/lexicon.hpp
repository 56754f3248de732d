#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dyadscope/emotion_wheel.hpp"

namespace dyadscope {

struct Association {
    Emotion emotion = Emotion::Anger;
    double score = 0.0;  // in [0,1]; doubles as the intensity index
};

// Word -> emotion association scores, NRC-intensity style. Immutable in
// use; adaptation ops return modified copies and record provenance.
class EmotionLexicon {
public:
    using Entries = std::map<std::string, std::vector<Association>>;

    const Entries& entries() const { return entries_; }
    const std::vector<Association>* find(const std::string& word) const;
    std::size_t word_count() const { return entries_.size(); }
    std::size_t pair_count() const;

    const std::string& source_id() const { return source_id_; }
    const std::vector<std::string>& adaptations() const { return adaptations_; }

    // Loader/adaptation internals.
    void set_source_id(std::string id) { source_id_ = std::move(id); }
    void add(const std::string& word, Emotion emotion, double score,
             const std::string& where);
    void note_adaptation(std::string description) {
        adaptations_.push_back(std::move(description));
    }
    void erase(const std::string& word, Emotion emotion);

private:
    Entries entries_;
    std::string source_id_;
    std::vector<std::string> adaptations_;
};

struct RemovalResult {
    EmotionLexicon lexicon;
    bool removed = false;  // false: the pair was absent, call was a no-op
};

// TSV rows `word<TAB>emotion<TAB>score`. Duplicate (word, emotion) rows,
// out-of-range scores, unknown emotions and multi-word entries are errors
// naming the offending line.
EmotionLexicon load_emotion_lexicon(const std::string& path);
EmotionLexicon parse_emotion_lexicon(std::istream& in, const std::string& source_name);

void save_emotion_lexicon(const EmotionLexicon& lex, std::ostream& out);
std::string serialize_emotion_lexicon(const EmotionLexicon& lex);

RemovalResult remove_association(const EmotionLexicon& lex, const std::string& word,
                                 Emotion emotion);

// Declarative adaptation file: `word<TAB>emotion` removal rows.
EmotionLexicon apply_adaptations(EmotionLexicon lex, const std::string& path);
EmotionLexicon apply_adaptations(EmotionLexicon lex, std::istream& in,
                                 const std::string& source_name);

struct PolarityLexicon {
    std::set<std::string> positive;
    std::set<std::string> negative;
    bool empty() const { return positive.empty() && negative.empty(); }
};

struct PolarityLoadResult {
    PolarityLexicon lexicon;
    std::vector<std::string> warnings;  // e.g. an empty word list
};

// One word per line per file; ";" comment lines ignored. Overlap between
// the two lists is an error naming the offending words.
PolarityLoadResult load_polarity_lexicon(const std::string& positive_path,
                                         const std::string& negative_path);
PolarityLoadResult parse_polarity_lexicon(std::istream& positive_in,
                                          std::istream& negative_in,
                                          const std::string& positive_name,
                                          const std::string& negative_name);

}  // namespace dyadscope
