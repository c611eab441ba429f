#ifndef STEREOKG_TEXT_H_
#define STEREOKG_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace stereokg::text {

// ASCII case folding; bytes >= 0x80 are passed through untouched so UTF-8
// sequences survive.
std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
bool is_word_char(char c);

// Whitespace tokenization.
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string> &parts, std::string_view sep);

// Strips leading and trailing punctuation, keeping inner apostrophes and
// hyphens ("don't", "ex-muslims").
std::string strip_punct(std::string_view token);

// Lowercased, edge-stripped whitespace tokens; empty tokens removed.
std::vector<std::string> normalized_tokens(std::string_view s);

// True if `needle` (a token sequence) occurs contiguously in `haystack`.
// Returns the start index or npos.
std::size_t find_tokens(const std::vector<std::string> &haystack,
                        const std::vector<std::string> &needle,
                        std::size_t from = 0);

// Case-insensitive search for `needle` in `hay` bounded by non-word
// characters on both sides. Returns the byte offset or npos.
std::size_t find_word(std::string_view hay, std::string_view needle,
                      std::size_t from = 0);

bool starts_with_word(std::string_view hay, std::string_view prefix);

bool is_terminal_punct(char c);
std::string strip_terminal_punct(std::string_view s);

}  // namespace stereokg::text

#endif  // STEREOKG_TEXT_H_
