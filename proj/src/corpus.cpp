#include "dyadscope/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "dyadscope/error.hpp"

namespace dyadscope {

namespace {

using nlohmann::json;

std::string loc(const std::string& source, std::size_t line_no) {
    return source + ":" + std::to_string(line_no);
}

struct RawRow {
    std::string transcript_id;
    std::size_t line_index = 0;
    std::string speaker;
    std::string text;
    std::set<std::string> labels;
    Cohort cohort = Cohort::IddFamily;
    TimePoint time_point = TimePoint::T1;
    DyadKind dyad_kind = DyadKind::ParentParentOrSibling;
    std::size_t source_line = 0;
};

Cohort require_cohort(const std::string& tok, const std::string& where) {
    auto c = parse_cohort(tok);
    if (!c) throw InputError(where + ": unknown cohort \"" + tok + "\"");
    return *c;
}

TimePoint require_time_point(const std::string& tok, const std::string& where) {
    auto t = parse_time_point(tok);
    if (!t) throw InputError(where + ": unknown time_point \"" + tok + "\"");
    return *t;
}

DyadKind require_dyad_kind(const std::string& tok, const std::string& where) {
    auto d = parse_dyad_kind(tok);
    if (!d) throw InputError(where + ": unknown dyad_kind \"" + tok + "\"");
    return *d;
}

RawRow row_from_json(const json& obj, const std::string& where) {
    RawRow row;
    if (!obj.is_object()) throw InputError(where + ": expected a JSON object");
    auto require_string = [&](const char* key) -> std::string {
        auto it = obj.find(key);
        if (it == obj.end() || !it->is_string())
            throw InputError(where + ": missing or non-string field \"" + key + "\"");
        return it->get<std::string>();
    };
    row.transcript_id = require_string("transcript_id");
    row.speaker = require_string("speaker");
    row.text = require_string("text");
    auto li = obj.find("line_index");
    if (li == obj.end() || !li->is_number_integer() || li->get<long long>() < 0)
        throw InputError(where + ": missing or negative field \"line_index\"");
    row.line_index = static_cast<std::size_t>(li->get<long long>());
    row.cohort = require_cohort(require_string("cohort"), where);
    row.time_point = require_time_point(require_string("time_point"), where);
    row.dyad_kind = require_dyad_kind(require_string("dyad_kind"), where);
    if (auto it = obj.find("labels"); it != obj.end() && !it->is_null()) {
        if (!it->is_array())
            throw InputError(where + ": field \"labels\" must be an array");
        for (const auto& v : *it) {
            if (!v.is_string())
                throw InputError(where + ": field \"labels\" must hold strings");
            row.labels.insert(v.get<std::string>());
        }
    }
    return row;
}

// Minimal RFC-4180 style reader: quoted fields, doubled quotes, commas in
// quotes. Transcript text routinely contains commas.
std::vector<std::string> split_csv_record(const std::string& line, const std::string& where) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (in_quotes) throw InputError(where + ": unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

RawRow row_from_csv(const std::vector<std::string>& fields,
                    const std::map<std::string, std::size_t>& columns,
                    const std::string& where) {
    auto get = [&](const char* key) -> const std::string& {
        auto it = columns.find(key);
        if (it == columns.end())
            throw InputError(where + ": missing column \"" + std::string(key) + "\"");
        if (it->second >= fields.size())
            throw InputError(where + ": row too short for column \"" + std::string(key) + "\"");
        return fields[it->second];
    };
    RawRow row;
    row.transcript_id = get("transcript_id");
    if (row.transcript_id.empty()) throw InputError(where + ": empty field \"transcript_id\"");
    row.speaker = get("speaker");
    row.text = get("text");
    const std::string& li = get("line_index");
    try {
        std::size_t pos = 0;
        long long v = std::stoll(li, &pos);
        if (pos != li.size() || v < 0) throw std::invalid_argument("");
        row.line_index = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw InputError(where + ": bad field \"line_index\" value \"" + li + "\"");
    }
    row.cohort = require_cohort(get("cohort"), where);
    row.time_point = require_time_point(get("time_point"), where);
    row.dyad_kind = require_dyad_kind(get("dyad_kind"), where);
    if (auto it = columns.find("labels"); it != columns.end() && it->second < fields.size()) {
        std::stringstream ss(fields[it->second]);
        std::string label;
        while (std::getline(ss, label, ';')) {
            if (!label.empty()) row.labels.insert(label);
        }
    }
    return row;
}

std::vector<Transcript> assemble(std::vector<RawRow> rows, const std::string& source) {
    // Group rows by transcript id, preserving first-appearance order.
    std::vector<std::string> order;
    std::map<std::string, std::vector<RawRow>> by_id;
    for (auto& row : rows) {
        auto [it, inserted] = by_id.try_emplace(row.transcript_id);
        if (inserted) order.push_back(row.transcript_id);
        it->second.push_back(std::move(row));
    }

    std::vector<Transcript> out;
    out.reserve(order.size());
    for (const auto& id : order) {
        auto& group = by_id[id];
        std::sort(group.begin(), group.end(),
                  [](const RawRow& a, const RawRow& b) { return a.line_index < b.line_index; });

        Transcript t;
        t.id = id;
        t.cohort = group.front().cohort;
        t.time_point = group.front().time_point;
        t.dyad_kind = group.front().dyad_kind;
        if (implied_cohort(t.dyad_kind) != t.cohort) {
            throw InputError(source + ": transcript \"" + id + "\" has dyad_kind " +
                             std::string(dyad_kind_name(t.dyad_kind)) +
                             " inconsistent with cohort " + std::string(cohort_name(t.cohort)));
        }

        for (std::size_t i = 1; i < group.size(); ++i) {
            if (group[i].line_index == group[i - 1].line_index) {
                throw InputError(loc(source, group[i].source_line) + ": duplicate line_index " +
                                 std::to_string(group[i].line_index) + " in transcript \"" + id +
                                 "\"");
            }
        }

        for (std::size_t i = 0; i < group.size(); ++i) {
            const RawRow& row = group[i];
            const std::string where = loc(source, row.source_line);
            if (row.cohort != t.cohort || row.time_point != t.time_point ||
                row.dyad_kind != t.dyad_kind) {
                throw InputError(where + ": transcript \"" + id +
                                 "\" metadata differs between rows");
            }
            if (row.line_index != i) {
                throw InputError(where + ": transcript \"" + id +
                                 "\" line_index values not contiguous from 0 (expected " +
                                 std::to_string(i) + ", got " + std::to_string(row.line_index) + ")");
            }
            if (row.text.empty() && row.labels.empty()) {
                throw InputError(where + ": empty text with no labels in transcript \"" + id + "\"");
            }
            Utterance u;
            u.transcript_id = id;
            u.line_index = row.line_index;
            u.speaker = row.speaker;
            u.text = row.text;
            u.labels = row.labels;
            t.utterances.push_back(std::move(u));
        }
        if (t.utterances.empty())
            throw InputError(source + ": transcript \"" + id + "\" has no utterances");
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<Transcript> parse_json_lines(std::istream& in, const std::string& source) {
    std::vector<RawRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = loc(source, line_no);
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded()) throw InputError(where + ": malformed JSON");
        RawRow row = row_from_json(obj, where);
        row.source_line = line_no;
        rows.push_back(std::move(row));
    }
    return assemble(std::move(rows), source);
}

std::vector<Transcript> parse_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw InputError(source + ": empty CSV input");
    std::map<std::string, std::size_t> columns;
    {
        auto header = split_csv_record(line, loc(source, 1));
        for (std::size_t i = 0; i < header.size(); ++i) columns[header[i]] = i;
    }
    std::vector<RawRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = loc(source, line_no);
        RawRow row = row_from_csv(split_csv_record(line, where), columns, where);
        row.source_line = line_no;
        rows.push_back(std::move(row));
    }
    return assemble(std::move(rows), source);
}

}  // namespace

std::string_view cohort_name(Cohort c) {
    return c == Cohort::IddFamily ? "IDD_FAMILY" : "PEER";
}

std::string_view time_point_name(TimePoint t) {
    return t == TimePoint::T1 ? "T1" : "T2";
}

std::string_view dyad_kind_name(DyadKind d) {
    switch (d) {
        case DyadKind::ParentParentOrSibling: return "PARENT_PARENT_OR_SIBLING";
        case DyadKind::ParentChild: return "PARENT_CHILD";
        case DyadKind::Friends: return "FRIENDS";
    }
    return "";
}

std::optional<Cohort> parse_cohort(std::string_view s) {
    if (s == "IDD_FAMILY") return Cohort::IddFamily;
    if (s == "PEER") return Cohort::Peer;
    return std::nullopt;
}

std::optional<TimePoint> parse_time_point(std::string_view s) {
    if (s == "T1") return TimePoint::T1;
    if (s == "T2") return TimePoint::T2;
    return std::nullopt;
}

std::optional<DyadKind> parse_dyad_kind(std::string_view s) {
    if (s == "PARENT_PARENT_OR_SIBLING") return DyadKind::ParentParentOrSibling;
    if (s == "PARENT_CHILD") return DyadKind::ParentChild;
    if (s == "FRIENDS") return DyadKind::Friends;
    return std::nullopt;
}

std::vector<Transcript> parse_corpus(const std::string& path, CorpusFormat format) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open corpus file: " + path);
    return format == CorpusFormat::JsonLines ? parse_json_lines(in, path) : parse_csv(in, path);
}

std::vector<Transcript> parse_corpus(std::istream& in, CorpusFormat format) {
    return format == CorpusFormat::JsonLines ? parse_json_lines(in, "<stream>")
                                             : parse_csv(in, "<stream>");
}

LabelMap LabelMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open label map: " + path);
    return parse(in, path);
}

LabelMap LabelMap::parse(std::istream& in, const std::string& source_name) {
    LabelMap lm;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw InputError(loc(source_name, line_no) + ": expected raw_label<TAB>emotion");
        std::string raw = line.substr(0, tab);
        std::string target = line.substr(tab + 1);
        auto coded = parse_coded_emotion(target);
        if (!coded)
            throw InputError(loc(source_name, line_no) + ": unknown canonical emotion \"" +
                             target + "\"");
        lm.add(std::move(raw), *coded);
    }
    return lm;
}

void LabelMap::add(std::string raw_label, CodedEmotion target) {
    map_[std::move(raw_label)] = target;
}

std::optional<CodedEmotion> LabelMap::lookup(const std::string& raw_label) const {
    auto it = map_.find(raw_label);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

std::vector<LabeledUtterance> select_emotion_utterances(
    const std::vector<Transcript>& transcripts, const LabelMap& label_map,
    SelectionDiagnostics* diag) {
    std::vector<LabeledUtterance> out;
    for (const auto& t : transcripts) {
        for (const auto& u : t.utterances) {
            if (u.labels.empty()) continue;
            std::set<CodedEmotion> seen;
            for (const auto& label : u.labels) {
                if (auto coded = label_map.lookup(label)) {
                    seen.insert(*coded);
                } else if (diag) {
                    ++diag->unmapped_labels;
                    if (diag->unmapped_examples.size() < 20) diag->unmapped_examples.insert(label);
                }
            }
            for (CodedEmotion coded : seen) {
                out.push_back(LabeledUtterance{&u, &t, coded});
            }
        }
    }
    return out;
}

std::vector<Document> chunk_transcripts(const std::vector<Transcript>& transcripts,
                                        std::size_t chunk_size) {
    if (chunk_size == 0) throw InputError("chunk_size must be >= 1");
    std::vector<Document> docs;
    for (const auto& t : transcripts) {
        std::size_t chunk_index = 0;
        for (std::size_t start = 0; start < t.utterances.size(); start += chunk_size) {
            Document d;
            d.source_transcript = t.id;
            d.chunk_index = chunk_index;
            d.id = t.id + "#" + std::to_string(chunk_index);
            std::size_t end = std::min(start + chunk_size, t.utterances.size());
            for (std::size_t i = start; i < end; ++i) d.texts.push_back(t.utterances[i].text);
            docs.push_back(std::move(d));
            ++chunk_index;
        }
    }
    return docs;
}

}  // namespace dyadscope
