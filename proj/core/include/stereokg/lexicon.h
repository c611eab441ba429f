#ifndef STEREOKG_LEXICON_H_
#define STEREOKG_LEXICON_H_

#include <string>
#include <string_view>

// Closed word classes shared by question conversion and triple extraction.
// All lookups expect lowercase, punctuation-stripped tokens.
namespace stereokg::lexicon {

// be/do/have forms and modals, including contracted negations.
bool is_auxiliary(std::string_view token);
bool is_negation(std::string_view token);  // not, never, n't forms excluded
// Auxiliaries plus base, -s and past forms of a common-verb list.
bool is_verb(std::string_view token);
bool is_base_verb(std::string_view token);
// Nouns that commonly follow a demonym inside a subject noun phrase
// ("german cars", "jewish men", "french culture").
bool is_nominal_head(std::string_view token);
// Heuristic number for copula agreement.
bool is_plural_noun(std::string_view token);

// "revolve" -> "revolves", "try" -> "tries", "have" -> "has".
std::string third_person_singular(std::string_view verb);

}  // namespace stereokg::lexicon

#endif  // STEREOKG_LEXICON_H_
