#ifndef STEREOKG_INGEST_H_
#define STEREOKG_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stereokg/config.h"

namespace stereokg {

enum class Platform { kReddit, kTwitter, kOther };

std::string_view platform_name(Platform platform);
// Unknown names map to kOther.
Platform parse_platform(std::string_view name);

struct RawPost {
  Platform platform = Platform::kOther;
  std::string source_id;
  std::string channel;  // subreddit name or empty
  std::string body;
  std::int64_t fetched_at = 0;  // created_utc

  bool operator==(const RawPost &) const = default;
};

struct SkippedLine {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct SkipReport {
  std::size_t lines_read = 0;
  std::vector<SkippedLine> skipped;
};

struct DumpContents {
  std::vector<RawPost> posts;
  SkipReport report;
};

// Reads a JSONL dump. Every line yields a post or a skip entry, so
// posts.size() + skipped.size() == lines_read. When `platform` is set it
// overrides the per-record "platform" field. Unreadable file -> DataError.
DumpContents load_dump(const std::filesystem::path &path,
                       std::optional<Platform> platform = std::nullopt);
DumpContents parse_dump(std::string_view content,
                        std::optional<Platform> platform = std::nullopt);

// Inverse of parse_dump for valid posts (input schema, one line per post).
std::string format_dump(const std::vector<RawPost> &posts);

struct AllowlistResult {
  std::vector<RawPost> kept;
  std::size_t dropped = 0;
};

// Keeps non-Reddit posts and Reddit posts whose channel is on any entity's
// allowlist (case-insensitive, optional "r/" prefix). An empty allowlist
// keeps everything.
AllowlistResult apply_allowlist(std::vector<RawPost> posts,
                                const PipelineConfig &config);

}  // namespace stereokg

#endif  // STEREOKG_INGEST_H_
