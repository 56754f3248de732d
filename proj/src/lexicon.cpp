#include "dyadscope/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dyadscope/error.hpp"

namespace dyadscope {

namespace {

std::string loc(const std::string& source, std::size_t line_no) {
    return source + ":" + std::to_string(line_no);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower((unsigned char)c));
    return s;
}

double parse_score(const std::string& text, const std::string& where) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw InputError(where + ": malformed score \"" + text + "\"");
    if (value < 0.0 || value > 1.0)
        throw InputError(where + ": score " + text + " out of range [0,1]");
    return value;
}

std::set<std::string> read_polarity_list(std::istream& in) {
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == ';') continue;
        words.insert(lower(line));
    }
    return words;
}

}  // namespace

const std::vector<Association>* EmotionLexicon::find(const std::string& word) const {
    auto it = entries_.find(word);
    if (it == entries_.end()) return nullptr;
    return &it->second;
}

std::size_t EmotionLexicon::pair_count() const {
    std::size_t n = 0;
    for (const auto& [word, assocs] : entries_) n += assocs.size();
    return n;
}

void EmotionLexicon::add(const std::string& word, Emotion emotion, double score,
                         const std::string& where) {
    auto& assocs = entries_[word];
    for (const auto& a : assocs) {
        if (a.emotion == emotion)
            throw InputError(where + ": duplicate (word, emotion) pair (\"" + word + "\", " +
                             std::string(emotion_name(emotion)) + ")");
    }
    assocs.push_back(Association{emotion, score});
    // Keep per-word associations in wheel order so serialization and
    // iteration are deterministic regardless of row order.
    std::sort(assocs.begin(), assocs.end(), [](const Association& a, const Association& b) {
        return static_cast<int>(a.emotion) < static_cast<int>(b.emotion);
    });
}

void EmotionLexicon::erase(const std::string& word, Emotion emotion) {
    auto it = entries_.find(word);
    if (it == entries_.end()) return;
    auto& assocs = it->second;
    assocs.erase(std::remove_if(assocs.begin(), assocs.end(),
                                [&](const Association& a) { return a.emotion == emotion; }),
                 assocs.end());
    if (assocs.empty()) entries_.erase(it);
}

EmotionLexicon parse_emotion_lexicon(std::istream& in, const std::string& source_name) {
    EmotionLexicon lex;
    lex.set_source_id(source_name);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::string where = loc(source_name, line_no);

        auto tab1 = line.find('\t');
        auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos)
            throw InputError(where + ": expected word<TAB>emotion<TAB>score");

        std::string word = lower(line.substr(0, tab1));
        std::string emotion_text = lower(line.substr(tab1 + 1, tab2 - tab1 - 1));
        std::string score_text = line.substr(tab2 + 1);

        if (word.empty()) throw InputError(where + ": empty word");
        if (word.find_first_of(" \t") != std::string::npos)
            throw InputError(where + ": multi-word entries are not supported: \"" + word + "\"");

        auto emotion = parse_emotion(emotion_text);
        if (!emotion) throw InputError(where + ": unknown emotion \"" + emotion_text + "\"");

        lex.add(word, *emotion, parse_score(score_text, where), where);
    }
    return lex;
}

EmotionLexicon load_emotion_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open emotion lexicon: " + path);
    return parse_emotion_lexicon(in, path);
}

void save_emotion_lexicon(const EmotionLexicon& lex, std::ostream& out) {
    char buf[32];
    for (const auto& [word, assocs] : lex.entries()) {
        for (const auto& a : assocs) {
            // Shortest round-trip form, so load(serialize(lex)) == lex.
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), a.score);
            out << word << '\t' << emotion_name(a.emotion) << '\t'
                << std::string_view(buf, static_cast<std::size_t>(ptr - buf)) << '\n';
        }
    }
}

std::string serialize_emotion_lexicon(const EmotionLexicon& lex) {
    std::ostringstream out;
    save_emotion_lexicon(lex, out);
    return out.str();
}

RemovalResult remove_association(const EmotionLexicon& lex, const std::string& word,
                                 Emotion emotion) {
    RemovalResult result;
    result.lexicon = lex;
    const auto* assocs = lex.find(word);
    result.removed =
        assocs && std::any_of(assocs->begin(), assocs->end(),
                              [&](const Association& a) { return a.emotion == emotion; });
    result.lexicon.erase(word, emotion);
    result.lexicon.note_adaptation("remove " + word + "/" + std::string(emotion_name(emotion)) +
                                   (result.removed ? "" : " (no-op)"));
    return result;
}

EmotionLexicon apply_adaptations(EmotionLexicon lex, std::istream& in,
                                 const std::string& source_name) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::string where = loc(source_name, line_no);
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw InputError(where + ": expected word<TAB>emotion");
        std::string word = lower(line.substr(0, tab));
        std::string emotion_text = lower(line.substr(tab + 1));
        auto emotion = parse_emotion(emotion_text);
        if (!emotion) throw InputError(where + ": unknown emotion \"" + emotion_text + "\"");
        lex.erase(word, *emotion);
        lex.note_adaptation("remove " + word + "/" + emotion_text);
    }
    return lex;
}

EmotionLexicon apply_adaptations(EmotionLexicon lex, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open adaptation file: " + path);
    return apply_adaptations(std::move(lex), in, path);
}

PolarityLoadResult parse_polarity_lexicon(std::istream& positive_in, std::istream& negative_in,
                                          const std::string& positive_name,
                                          const std::string& negative_name) {
    PolarityLoadResult result;
    result.lexicon.positive = read_polarity_list(positive_in);
    result.lexicon.negative = read_polarity_list(negative_in);

    std::vector<std::string> overlap;
    std::set_intersection(result.lexicon.positive.begin(), result.lexicon.positive.end(),
                          result.lexicon.negative.begin(), result.lexicon.negative.end(),
                          std::back_inserter(overlap));
    if (!overlap.empty()) {
        std::string msg = "polarity lists overlap:";
        for (const auto& w : overlap) msg += " \"" + w + "\"";
        throw InputError(msg);
    }
    if (result.lexicon.positive.empty())
        result.warnings.push_back("positive word list is empty: " + positive_name);
    if (result.lexicon.negative.empty())
        result.warnings.push_back("negative word list is empty: " + negative_name);
    return result;
}

PolarityLoadResult load_polarity_lexicon(const std::string& positive_path,
                                         const std::string& negative_path) {
    std::ifstream pos(positive_path);
    if (!pos) throw InputError("cannot open positive word list: " + positive_path);
    std::ifstream neg(negative_path);
    if (!neg) throw InputError("cannot open negative word list: " + negative_path);
    return parse_polarity_lexicon(pos, neg, positive_path, negative_path);
}

}  // namespace dyadscope
