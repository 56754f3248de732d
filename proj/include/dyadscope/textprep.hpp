#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace dyadscope {

// Rule-based token filtering. keep_words always wins over the stop lists;
// generic_word_blocklist applies only to top-word reporting, never here.
struct FilterConfig {
    std::set<std::string> closed_class_words;
    std::set<std::string> extra_stop_words;
    std::set<std::string> keep_words;
    std::set<std::string> generic_word_blocklist;
    bool drop_digit_tokens = true;
};

// Plain-text word list, one word per line, "#" comments allowed.
// Entries are lowercased; entries with internal whitespace are rejected.
std::set<std::string> load_word_list(const std::string& path);
std::set<std::string> parse_word_list(std::istream& in, const std::string& source_name);

// Lowercased tokens split on whitespace, leading/trailing punctuation
// stripped, internal apostrophes kept, empty tokens dropped.
std::vector<std::string> tokenize(const std::string& text);

std::vector<std::string> filter_tokens(const std::vector<std::string>& tokens,
                                       const FilterConfig& config);

}  // namespace dyadscope
