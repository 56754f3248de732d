#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dyadscope/emotion_wheel.hpp"

namespace dyadscope {

enum class Cohort : std::uint8_t { IddFamily, Peer };
enum class TimePoint : std::uint8_t { T1, T2 };
enum class DyadKind : std::uint8_t { ParentParentOrSibling, ParentChild, Friends };

std::string_view cohort_name(Cohort c);
std::string_view time_point_name(TimePoint t);
std::string_view dyad_kind_name(DyadKind d);
std::optional<Cohort> parse_cohort(std::string_view s);
std::optional<TimePoint> parse_time_point(std::string_view s);
std::optional<DyadKind> parse_dyad_kind(std::string_view s);

// FRIENDS dyads are peers; the other two kinds are IDD-family.
inline Cohort implied_cohort(DyadKind d) {
    return d == DyadKind::Friends ? Cohort::Peer : Cohort::IddFamily;
}

struct Utterance {
    std::string transcript_id;
    std::size_t line_index = 0;  // 0-based, contiguous within a transcript
    std::string speaker;
    std::string text;
    std::set<std::string> labels;  // researcher codes, may be empty
};

struct Transcript {
    std::string id;
    Cohort cohort = Cohort::IddFamily;
    TimePoint time_point = TimePoint::T1;
    DyadKind dyad_kind = DyadKind::ParentParentOrSibling;
    std::vector<Utterance> utterances;  // ordered by line_index
};

// A topic-model document: one chunk of consecutive utterances from a
// transcript. `texts` holds the raw utterance lines; `tokens` is filled
// by textprep before the document reaches the vectorizer.
struct Document {
    std::string id;  // "{transcript_id}#{chunk_index}"
    std::string source_transcript;
    std::size_t chunk_index = 0;
    std::vector<std::string> texts;
    std::vector<std::string> tokens;
};

enum class CorpusFormat : std::uint8_t { JsonLines, Csv };

std::vector<Transcript> parse_corpus(const std::string& path, CorpusFormat format);
std::vector<Transcript> parse_corpus(std::istream& in, CorpusFormat format);

// Researcher label -> canonical coded emotion. Loaded from a two-column TSV.
class LabelMap {
public:
    static LabelMap load(const std::string& path);
    static LabelMap parse(std::istream& in, const std::string& source_name);

    void add(std::string raw_label, CodedEmotion target);
    std::optional<CodedEmotion> lookup(const std::string& raw_label) const;
    std::size_t size() const { return map_.size(); }

private:
    std::map<std::string, CodedEmotion> map_;
};

struct LabeledUtterance {
    const Utterance* utterance = nullptr;
    const Transcript* transcript = nullptr;
    CodedEmotion coded = CodedEmotion::Joy;
};

struct SelectionDiagnostics {
    std::size_t unmapped_labels = 0;
    std::set<std::string> unmapped_examples;  // capped, for diagnostics output
};

// Every utterance carrying at least one mappable label, paired with each
// distinct canonical emotion its labels map to (in enum order). Unmapped
// labels are skipped and tallied.
std::vector<LabeledUtterance> select_emotion_utterances(
    const std::vector<Transcript>& transcripts, const LabelMap& label_map,
    SelectionDiagnostics* diag = nullptr);

std::vector<Document> chunk_transcripts(const std::vector<Transcript>& transcripts,
                                        std::size_t chunk_size);

}  // namespace dyadscope
