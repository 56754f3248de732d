#include "dyadscope/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>

#include "dyadscope/error.hpp"

namespace dyadscope {

namespace {

// Decodes one UTF-8 code point starting at i; advances i past it.
// Invalid bytes are passed through as single code points.
char32_t next_code_point(const std::string& s, std::size_t& i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = c;
    if (c >= 0xF0) {
        len = 4;
        cp = c & 0x07;
    } else if (c >= 0xE0) {
        len = 3;
        cp = c & 0x0F;
    } else if (c >= 0xC0) {
        len = 2;
        cp = c & 0x1F;
    }
    if (i + len > s.size()) len = 1, cp = c;
    for (std::size_t j = 1; j < len; ++j) {
        unsigned char cont = static_cast<unsigned char>(s[i + j]);
        if ((cont & 0xC0) != 0x80) {
            len = 1;
            cp = c;
            break;
        }
        cp = (cp << 6) | (cont & 0x3F);
    }
    i += len;
    return cp;
}

void append_code_point(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_space_cp(char32_t cp) {
    if (cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' || cp == U'\v')
        return true;
    // Common Unicode spaces: NBSP, the EN QUAD..HAIR SPACE run, line/para
    // separators, narrow NBSP, ideographic space.
    if (cp == 0x00A0 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 ||
        cp == 0x202F || cp == 0x205F || cp == 0x3000)
        return true;
    return false;
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

bool is_word_cp(char32_t cp) {
    if (cp < 0x80)
        return std::isalnum(static_cast<unsigned char>(cp)) != 0;
    // Non-ASCII, non-space, non-punctuation code points count as word
    // characters; accented letters survive.
    if (is_apostrophe(cp)) return false;
    if ((cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x00A1 && cp <= 0x00BF)) return false;
    return true;
}

char32_t lower_cp(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    return cp;
}

bool all_digits(const std::string& token) {
    if (token.empty()) return false;
    return std::all_of(token.begin(), token.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    // Split into code-point runs between whitespace, then trim
    // non-word edges. Apostrophes are word-internal only.
    std::vector<std::string> out;
    std::vector<char32_t> run;
    std::size_t i = 0;

    auto flush = [&]() {
        if (run.empty()) return;
        std::size_t begin = 0, end = run.size();
        while (begin < end && !is_word_cp(run[begin])) ++begin;
        while (end > begin && !is_word_cp(run[end - 1])) --end;
        if (begin < end) {
            std::string token;
            for (std::size_t j = begin; j < end; ++j) append_code_point(token, lower_cp(run[j]));
            out.push_back(std::move(token));
        }
        run.clear();
    };

    while (i < text.size()) {
        char32_t cp = next_code_point(text, i);
        if (is_space_cp(cp)) {
            flush();
        } else {
            run.push_back(cp);
        }
    }
    flush();
    return out;
}

std::vector<std::string> filter_tokens(const std::vector<std::string>& tokens,
                                       const FilterConfig& config) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& token : tokens) {
        if (config.keep_words.count(token)) {
            out.push_back(token);
            continue;
        }
        if (config.drop_digit_tokens && all_digits(token)) continue;
        if (config.closed_class_words.count(token) || config.extra_stop_words.count(token))
            continue;
        out.push_back(token);
    }
    return out;
}

std::set<std::string> parse_word_list(std::istream& in, const std::string& source_name) {
    std::set<std::string> words;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::string word;
        for (char c : line) word.push_back(static_cast<char>(std::tolower((unsigned char)c)));
        if (word.find_first_of(" \t") != std::string::npos)
            throw InputError(source_name + ":" + std::to_string(line_no) +
                             ": word list entries must not contain whitespace: \"" + line + "\"");
        words.insert(std::move(word));
    }
    return words;
}

std::set<std::string> load_word_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open word list: " + path);
    return parse_word_list(in, path);
}

}  // namespace dyadscope
