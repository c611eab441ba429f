#ifndef STEREOKG_MINING_H_
#define STEREOKG_MINING_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stereokg/config.h"
#include "stereokg/errors.h"
#include "stereokg/ingest.h"

namespace stereokg {

struct Provenance {
  Platform platform = Platform::kOther;
  std::string source_id;
  bool operator==(const Provenance &) const = default;
  auto operator<=>(const Provenance &) const = default;
};

struct MinedAssertion {
  std::string entity_id;
  QueryTemplate tmpl;
  std::string original_text;   // verbatim sentence from the post body
  std::string statement_text;  // declarative, lowercase
  Provenance provenance;

  bool operator==(const MinedAssertion &) const = default;
};

class ConversionFailed : public DataError {
 public:
  explicit ConversionFailed(const std::string &message)
      : DataError("ConversionFailed: " + message) {}
};

// Splits on runs of . ? ! and newlines. Each returned view is a trimmed,
// contiguous slice of `body` that keeps its terminal punctuation.
std::vector<std::string_view> split_sentences(std::string_view body);

// Where a template instantiated with a surface form matched.
struct TemplateMatch {
  std::string surface_form;
  std::size_t begin = 0;  // byte offsets into the sentence
  std::size_t end = 0;
};

// Question templates only match at sentence start; statement templates
// may match anywhere. Both require word boundaries on each side.
std::optional<TemplateMatch> match_template(std::string_view sentence,
                                            const QueryTemplate &tmpl,
                                            const EntitySpec &entity);

// Rewrites a matched question into a declarative lowercase statement using
// the per-template rule table. Statement-form templates are lowercased and
// stripped of terminal punctuation only.
std::string to_statement(std::string_view sentence, const QueryTemplate &tmpl,
                         const EntitySpec &entity);

struct MiningReport {
  std::size_t posts = 0;
  std::size_t sentences = 0;
  std::size_t matches = 0;
  std::size_t conversion_failed = 0;
  std::size_t duplicates_in_post = 0;
};

// Output is sorted by (provenance, entity, statement) and is independent of
// how the post stream was chunked.
std::vector<MinedAssertion> mine(const std::vector<RawPost> &posts,
                                 const std::vector<EntitySpec> &entities,
                                 const std::vector<QueryTemplate> &templates,
                                 MiningReport *report = nullptr);

std::string format_mined(const std::vector<MinedAssertion> &assertions);
std::vector<MinedAssertion> parse_mined(std::string_view content,
                                        const std::vector<QueryTemplate> &templates);
std::vector<MinedAssertion> load_mined(const std::filesystem::path &path,
                                       const std::vector<QueryTemplate> &templates);

}  // namespace stereokg

#endif  // STEREOKG_MINING_H_
