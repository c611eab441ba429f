#include "stereokg/ingest.h"

#include <set>

#include "stereokg/errors.h"
#include "stereokg/io.h"
#include "stereokg/text.h"

namespace stereokg {

using io::Json;

std::string_view platform_name(Platform platform) {
  switch (platform) {
    case Platform::kReddit: return "reddit";
    case Platform::kTwitter: return "twitter";
    case Platform::kOther: return "other";
  }
  return "other";
}

Platform parse_platform(std::string_view name) {
  std::string n = text::to_lower(name);
  if (n == "reddit") return Platform::kReddit;
  if (n == "twitter") return Platform::kTwitter;
  return Platform::kOther;
}

namespace {

std::string id_string(const Json &v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw DataError("field 'id' must be a string or integer");
}

}  // namespace

DumpContents parse_dump(std::string_view content, std::optional<Platform> platform) {
  DumpContents out;
  const auto lines = io::split_lines(content);
  out.report.lines_read = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto skip = [&](std::string reason) {
      out.report.skipped.push_back({line_no, std::move(reason)});
    };
    if (text::trim(lines[i]).empty()) {
      skip("blank line");
      continue;
    }
    Json rec;
    try {
      rec = Json::parse(lines[i]);
    } catch (const Json::exception &) {
      skip("malformed JSON");
      continue;
    }
    if (!rec.is_object()) {
      skip("record is not an object");
      continue;
    }
    RawPost post;
    try {
      if (!rec.contains("id")) {
        skip("missing id");
        continue;
      }
      post.source_id = text::trim(id_string(rec.at("id")));
      if (!rec.contains("body") || !rec.at("body").is_string()) {
        skip("missing body");
        continue;
      }
      post.body = rec.at("body").get<std::string>();
      post.channel = rec.value("channel", std::string());
      if (rec.contains("created_utc") && rec.at("created_utc").is_number()) {
        post.fetched_at = rec.at("created_utc").get<std::int64_t>();
      }
      post.platform = platform ? *platform
                               : parse_platform(rec.value("platform", std::string()));
    } catch (const Json::exception &) {
      skip("field has wrong type");
      continue;
    } catch (const DataError &e) {
      skip(e.what());
      continue;
    }
    if (post.source_id.empty()) {
      skip("empty id");
      continue;
    }
    if (text::trim(post.body).empty()) {
      skip("blank body");
      continue;
    }
    out.posts.push_back(std::move(post));
  }
  return out;
}

DumpContents load_dump(const std::filesystem::path &path,
                       std::optional<Platform> platform) {
  return parse_dump(io::read_file(path), platform);
}

std::string format_dump(const std::vector<RawPost> &posts) {
  std::vector<Json> records;
  records.reserve(posts.size());
  for (const auto &p : posts) {
    Json j;
    j["platform"] = platform_name(p.platform);
    j["id"] = p.source_id;
    j["channel"] = p.channel;
    j["body"] = p.body;
    j["created_utc"] = p.fetched_at;
    records.push_back(std::move(j));
  }
  return io::to_jsonl(records);
}

namespace {

std::string normalize_channel(std::string_view channel) {
  std::string c = text::to_lower(text::trim(channel));
  if (c.rfind("/r/", 0) == 0) c = c.substr(3);
  if (c.rfind("r/", 0) == 0) c = c.substr(2);
  return c;
}

}  // namespace

AllowlistResult apply_allowlist(std::vector<RawPost> posts,
                                const PipelineConfig &config) {
  std::set<std::string> allowed;
  for (const auto &[entity, subs] : config.subreddit_allowlist) {
    for (const auto &s : subs) allowed.insert(normalize_channel(s));
  }
  AllowlistResult result;
  if (allowed.empty()) {
    result.kept = std::move(posts);
    return result;
  }
  for (auto &p : posts) {
    if (p.platform == Platform::kReddit &&
        !allowed.count(normalize_channel(p.channel))) {
      ++result.dropped;
      continue;
    }
    result.kept.push_back(std::move(p));
  }
  return result;
}

}  // namespace stereokg
