#ifndef STEREOKG_VERBALIZE_H_
#define STEREOKG_VERBALIZE_H_

#include <string>
#include <string_view>

namespace stereokg {

// Joins subject, predicate and object with single spaces. This is the exact
// input used for acceptability ranking: no casing, no punctuation.
std::string concat_triple(std::string_view subject, std::string_view predicate,
                          std::string_view object);

// Uppercases the first letter and appends '.' unless the text already ends
// in terminal punctuation. Idempotent.
std::string finish_sentence(std::string_view text);

// Fallback verbalizer: finish_sentence(concat_triple(s, p, o)).
// ("jewish men", "get", "circumcisions") -> "Jewish men get circumcisions."
std::string verbalize_fallback(std::string_view subject,
                               std::string_view predicate,
                               std::string_view object);

}  // namespace stereokg

#endif  // STEREOKG_VERBALIZE_H_
