#include "stereokg/verbalize.h"

#include "stereokg/text.h"

namespace stereokg {

std::string concat_triple(std::string_view subject, std::string_view predicate,
                          std::string_view object) {
  std::vector<std::string> parts;
  for (auto f : {subject, predicate, object}) {
    std::string t = text::trim(f);
    if (!t.empty()) parts.push_back(std::move(t));
  }
  return text::join(parts, " ");
}

std::string finish_sentence(std::string_view input) {
  std::string s = text::trim(input);
  if (s.empty()) return s;
  if (s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  if (!text::is_terminal_punct(s.back())) s += '.';
  return s;
}

std::string verbalize_fallback(std::string_view subject,
                               std::string_view predicate,
                               std::string_view object) {
  return finish_sentence(concat_triple(subject, predicate, object));
}

}  // namespace stereokg
