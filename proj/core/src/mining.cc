#include "stereokg/mining.h"

#include <algorithm>
#include <set>

#include "stereokg/io.h"
#include "stereokg/lexicon.h"
#include "stereokg/text.h"

namespace stereokg {

using io::Json;

std::vector<std::string_view> split_sentences(std::string_view body) {
  std::vector<std::string_view> out;
  auto emit = [&](std::size_t b, std::size_t e) {
    while (b < e && (body[b] == ' ' || body[b] == '\t' || body[b] == '\r')) ++b;
    while (e > b && (body[e - 1] == ' ' || body[e - 1] == '\t' ||
                     body[e - 1] == '\r')) {
      --e;
    }
    if (e > b) out.push_back(body.substr(b, e - b));
  };
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < body.size()) {
    char c = body[i];
    if (c == '\n') {
      emit(start, i);
      start = ++i;
    } else if (text::is_terminal_punct(c)) {
      while (i < body.size() && text::is_terminal_punct(body[i])) ++i;
      emit(start, i);
      start = i;
    } else {
      ++i;
    }
  }
  emit(start, body.size());
  return out;
}

namespace {

// Surface forms longest first so "germans" wins over "german".
std::vector<std::string> forms_by_length(const EntitySpec &entity) {
  std::vector<std::string> forms = entity.surface_forms;
  std::stable_sort(forms.begin(), forms.end(),
                   [](const std::string &a, const std::string &b) {
                     return a.size() > b.size();
                   });
  return forms;
}

std::string instantiate(std::string_view pattern, std::string_view form) {
  std::string out(pattern);
  std::size_t pos = out.find(kSubjectPlaceholder);
  out.replace(pos, kSubjectPlaceholder.size(), form);
  return out;
}

}  // namespace

std::optional<TemplateMatch> match_template(std::string_view sentence,
                                            const QueryTemplate &tmpl,
                                            const EntitySpec &entity) {
  for (const auto &form : forms_by_length(entity)) {
    std::string needle = instantiate(tmpl.pattern, form);
    std::size_t pos = text::find_word(sentence, needle);
    if (pos == std::string::npos) continue;
    if (tmpl.form == TemplateForm::kQuestion && pos != 0) continue;
    return TemplateMatch{form, pos, pos + needle.size()};
  }
  return std::nullopt;
}

namespace {

// How the interrogative prefix of a question template is rewritten.
enum class Rewrite {
  kKeepAux,      // why are S X      -> S are X
  kDropDo,       // why do S X       -> S X
  kInflectDoes,  // why does S c X   -> S c Xs
  kCopula,       // what makes S X   -> S is/are X
};

struct ConversionRule {
  const char *prefix;  // lowercase template text before <SUB>
  Rewrite rewrite;
};

// One row per question template in the shipped configuration.
constexpr ConversionRule kRules[] = {
    {"why is", Rewrite::kKeepAux},      {"why isn't", Rewrite::kKeepAux},
    {"why are", Rewrite::kKeepAux},     {"why aren't", Rewrite::kKeepAux},
    {"why can", Rewrite::kKeepAux},     {"why can't", Rewrite::kKeepAux},
    {"why do", Rewrite::kDropDo},       {"why don't", Rewrite::kKeepAux},
    {"why doesn't", Rewrite::kKeepAux}, {"how is", Rewrite::kKeepAux},
    {"how do", Rewrite::kDropDo},       {"what makes", Rewrite::kCopula},
    {"why does", Rewrite::kInflectDoes},
};

struct PatternParts {
  std::vector<std::string> before;  // tokens before <SUB>
  std::vector<std::string> after;   // tokens after <SUB>
};

PatternParts split_pattern(std::string_view pattern) {
  std::string lower = text::to_lower(pattern);
  std::size_t pos = lower.find(text::to_lower(kSubjectPlaceholder));
  return {text::split_ws(lower.substr(0, pos)),
          text::split_ws(lower.substr(pos + kSubjectPlaceholder.size()))};
}

Rewrite rule_for(const std::vector<std::string> &before) {
  std::string prefix = text::join(before, " ");
  for (const auto &r : kRules) {
    if (prefix == r.prefix) return r.rewrite;
  }
  // Templates outside the table: keep whatever auxiliary follows the
  // interrogative, drop plain do-support.
  if (before.size() >= 2 && (before[1] == "do" || before[1] == "did")) {
    return Rewrite::kDropDo;
  }
  return Rewrite::kKeepAux;
}

}  // namespace

std::string to_statement(std::string_view sentence, const QueryTemplate &tmpl,
                         const EntitySpec &entity) {
  if (tmpl.form == TemplateForm::kStatement) {
    std::string s = text::strip_terminal_punct(text::to_lower(sentence));
    if (s.empty()) throw ConversionFailed("empty statement");
    return s;
  }

  auto match = match_template(sentence, tmpl, entity);
  if (!match) {
    throw ConversionFailed("'" + std::string(sentence) +
                           "' does not match template '" + tmpl.pattern + "'");
  }
  const std::string lower = text::to_lower(sentence);
  std::vector<std::string> rest =
      text::split_ws(text::strip_terminal_punct(lower.substr(match->end)));
  const PatternParts parts = split_pattern(tmpl.pattern);

  std::vector<std::string> subject = text::split_ws(match->surface_form);
  subject.insert(subject.end(), parts.after.begin(), parts.after.end());
  if (parts.after.empty()) {
    // Extend the subject over nominal heads: "why are german cars ..."
    std::size_t n = 0;
    while (n < rest.size() && n < 2 && lexicon::is_nominal_head(rest[n])) ++n;
    subject.insert(subject.end(), rest.begin(), rest.begin() + n);
    rest.erase(rest.begin(), rest.begin() + n);
  }
  if (rest.empty()) {
    throw ConversionFailed("'" + std::string(sentence) +
                           "' has nothing after the subject");
  }

  std::vector<std::string> out = subject;
  switch (rule_for(parts.before)) {
    case Rewrite::kKeepAux:
      out.insert(out.end(), parts.before.begin() + 1, parts.before.end());
      break;
    case Rewrite::kDropDo:
      break;
    case Rewrite::kInflectDoes:
      if (lexicon::is_negation(rest.front())) {
        out.push_back("does");
      } else {
        rest.front() = lexicon::third_person_singular(rest.front());
      }
      break;
    case Rewrite::kCopula: {
      const bool plural = lexicon::is_plural_noun(subject.back());
      if (lexicon::is_base_verb(rest.front())) {
        // what makes china grow -> china grows
        if (!plural) rest.front() = lexicon::third_person_singular(rest.front());
      } else if (!lexicon::is_auxiliary(rest.front())) {
        out.push_back(plural ? "are" : "is");
      }
      break;
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return text::join(out, " ");
}

std::vector<MinedAssertion> mine(const std::vector<RawPost> &posts,
                                 const std::vector<EntitySpec> &entities,
                                 const std::vector<QueryTemplate> &templates,
                                 MiningReport *report) {
  MiningReport local;
  std::vector<MinedAssertion> out;
  for (const auto &post : posts) {
    ++local.posts;
    std::set<std::pair<std::string, std::string>> seen;
    for (std::string_view sentence : split_sentences(post.body)) {
      ++local.sentences;
      for (const auto &entity : entities) {
        for (const auto &tmpl : templates) {
          if (!match_template(sentence, tmpl, entity)) continue;
          ++local.matches;
          std::string statement;
          try {
            statement = to_statement(sentence, tmpl, entity);
          } catch (const ConversionFailed &) {
            ++local.conversion_failed;
            break;
          }
          if (!seen.emplace(entity.id, statement).second) {
            ++local.duplicates_in_post;
            break;
          }
          out.push_back({entity.id, tmpl, std::string(sentence),
                         std::move(statement),
                         {post.platform, post.source_id}});
          break;  // first matching template wins for (sentence, entity)
        }
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MinedAssertion &a, const MinedAssertion &b) {
                     return std::tie(a.provenance, a.entity_id, a.statement_text) <
                            std::tie(b.provenance, b.entity_id, b.statement_text);
                   });
  if (report) *report = local;
  return out;
}

std::string format_mined(const std::vector<MinedAssertion> &assertions) {
  std::vector<Json> records;
  records.reserve(assertions.size());
  for (const auto &a : assertions) {
    Json j;
    j["entity"] = a.entity_id;
    j["template"] = a.tmpl.pattern;
    j["original"] = a.original_text;
    j["statement"] = a.statement_text;
    j["platform"] = platform_name(a.provenance.platform);
    j["source_id"] = a.provenance.source_id;
    records.push_back(std::move(j));
  }
  return io::to_jsonl(records);
}

std::vector<MinedAssertion> parse_mined(std::string_view content,
                                        const std::vector<QueryTemplate> &templates) {
  std::vector<MinedAssertion> out;
  const auto lines = io::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    try {
      Json j = Json::parse(lines[i]);
      MinedAssertion a;
      a.entity_id = j.at("entity").get<std::string>();
      const std::string pattern = j.at("template").get<std::string>();
      auto it = std::find_if(templates.begin(), templates.end(),
                             [&](const QueryTemplate &t) { return t.pattern == pattern; });
      if (it == templates.end()) {
        throw DataError("unknown template '" + pattern + "'");
      }
      a.tmpl = *it;
      a.original_text = j.at("original").get<std::string>();
      a.statement_text = j.at("statement").get<std::string>();
      a.provenance.platform = parse_platform(j.at("platform").get<std::string>());
      a.provenance.source_id = j.at("source_id").get<std::string>();
      out.push_back(std::move(a));
    } catch (const Json::exception &e) {
      throw DataError("mined assertions line " + std::to_string(i + 1) + ": " +
                      e.what());
    } catch (const DataError &e) {
      throw DataError("mined assertions line " + std::to_string(i + 1) + ": " +
                      e.what());
    }
  }
  return out;
}

std::vector<MinedAssertion> load_mined(const std::filesystem::path &path,
                                       const std::vector<QueryTemplate> &templates) {
  return parse_mined(io::read_file(path), templates);
}

}  // namespace stereokg
