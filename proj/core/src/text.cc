#include "stereokg/text.h"

#include <algorithm>
#include <cctype>

namespace stereokg::text {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

char lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool is_edge_punct(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = lower(c);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0 || c == '_';
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::string join(const std::vector<std::string> &parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string strip_punct(std::string_view token) {
  std::size_t b = 0, e = token.size();
  while (b < e && is_edge_punct(token[b])) ++b;
  while (e > b && is_edge_punct(token[e - 1])) --e;
  return std::string(token.substr(b, e - b));
}

std::vector<std::string> normalized_tokens(std::string_view s) {
  std::vector<std::string> out;
  for (const auto &tok : split_ws(s)) {
    std::string t = strip_punct(to_lower(tok));
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

std::size_t find_tokens(const std::vector<std::string> &haystack,
                        const std::vector<std::string> &needle,
                        std::size_t from) {
  if (needle.empty() || haystack.size() < needle.size()) return std::string::npos;
  for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + i)) return i;
  }
  return std::string::npos;
}

std::size_t find_word(std::string_view hay, std::string_view needle,
                      std::size_t from) {
  if (needle.empty() || hay.size() < needle.size()) return std::string::npos;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    bool eq = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      if (lower(hay[i + k]) != lower(needle[k])) {
        eq = false;
        break;
      }
    }
    if (!eq) continue;
    bool left_ok = i == 0 || !is_word_char(hay[i - 1]) ||
                   !is_word_char(needle.front());
    std::size_t end = i + needle.size();
    bool right_ok = end == hay.size() || !is_word_char(hay[end]) ||
                    !is_word_char(needle.back());
    if (left_ok && right_ok) return i;
  }
  return std::string::npos;
}

bool starts_with_word(std::string_view hay, std::string_view prefix) {
  return find_word(hay.substr(0, std::min(hay.size(), prefix.size() + 1)),
                   prefix) == 0;
}

bool is_terminal_punct(char c) { return c == '.' || c == '?' || c == '!'; }

std::string strip_terminal_punct(std::string_view s) {
  std::string t = trim(s);
  while (!t.empty() && is_terminal_punct(t.back())) t.pop_back();
  return trim(t);
}

}  // namespace stereokg::text
