#ifndef STEREOKG_SCORER_H_
#define STEREOKG_SCORER_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "stereokg/io.h"

namespace stereokg {

// Every learned-model capability the pipeline consumes goes through one
// gateway with one wire schema.
enum class Capability { kEmbed, kSentiment, kAcceptability, kVerbalize, kFillMask };

std::string_view capability_name(Capability capability);
Capability parse_capability(std::string_view name);
// "/embed", "/sentiment", ...
std::string endpoint_path(Capability capability);

enum class SentimentLabel { kPos, kNeu, kNeg };
std::string_view sentiment_name(SentimentLabel label);
SentimentLabel parse_sentiment(std::string_view name);

struct TripleText {
  std::string s;
  std::string p;
  std::string o;
  bool operator==(const TripleText &) const = default;
};

struct ScorerRequest {
  Capability capability = Capability::kEmbed;
  std::vector<std::string> texts;    // all capabilities except verbalize
  std::vector<TripleText> triples;   // verbalize only
  int k = 5;                         // fill_mask only

  std::size_t size() const;
  // The text an item is keyed by in the file cache.
  std::string item_text(std::size_t i) const;
  ScorerRequest slice(std::size_t begin, std::size_t end) const;
};

struct ScorerResult {
  Capability capability = Capability::kEmbed;
  std::vector<std::vector<double>> vectors;
  std::vector<SentimentLabel> labels;
  std::vector<double> scores;
  std::vector<std::string> sentences;
  std::vector<std::vector<std::string>> topk;

  std::size_t size() const;
  void append(ScorerResult &&other);
  ScorerResult slice(std::size_t begin, std::size_t end) const;
  // Length must match the request; scores within [0,1]; vectors share one
  // dimension. Throws ScorerError on violation.
  void validate(std::size_t expected_size) const;
};

// Wire schema shared with the model service.
io::Json encode_request(const ScorerRequest &request);
ScorerRequest decode_request(Capability capability, const io::Json &body);
io::Json encode_result(const ScorerResult &result);
ScorerResult decode_result(Capability capability, const io::Json &body);

// Cache key for one item: "<capability>:<fnv1a64 hex of item text>".
std::string cache_key(Capability capability, std::string_view item_text);

class ScorerBackend {
 public:
  virtual ~ScorerBackend() = default;
  virtual ScorerResult call(const ScorerRequest &request) = 0;
  virtual std::string name() const = 0;
};

struct StubOptions {
  std::uint64_t seed = 0;
  int embed_dim = 16;
  // Masked sentence -> ranked predictions.
  std::map<std::string, std::vector<std::string>> fill_mask_fixture;
};

// Deterministic in-process stand-ins. Each output is a pure function of
// (capability, text, seed).
class StubBackend : public ScorerBackend {
 public:
  explicit StubBackend(StubOptions options = {});

  ScorerResult call(const ScorerRequest &request) override;
  std::string name() const override { return "stub"; }

  std::vector<double> embed(std::string_view text) const;
  SentimentLabel sentiment(std::string_view text) const;
  double acceptability(std::string_view text) const;
  std::string verbalize(const TripleText &triple) const;
  std::vector<std::string> fill_mask(std::string_view masked, int k) const;

  static const std::vector<std::string> &negative_lexicon();
  static const std::vector<std::string> &positive_lexicon();
  static const std::vector<std::string> &fallback_predictions();

 private:
  double unit_hash(std::string_view salt, std::string_view text) const;
  StubOptions options_;
};

struct HttpOptions {
  std::string url = "http://127.0.0.1:8080";
  int timeout_ms = 30000;
  int retries = 3;
  int backoff_ms = 200;
  int max_in_flight = 4;
};

// Non-200 responses and connection failures are retried with exponential
// backoff; exhausting the retries raises TransportError.
class HttpBackend : public ScorerBackend {
 public:
  explicit HttpBackend(HttpOptions options);
  ~HttpBackend() override;

  ScorerResult call(const ScorerRequest &request) override;
  std::string name() const override { return "http"; }

 private:
  struct InFlight;
  HttpOptions options_;
  std::unique_ptr<InFlight> in_flight_;
};

// Replays recorded results. Record file: JSONL of
// {"key": cache_key, "capability": name, "value": <per-item payload>}.
class FileCacheBackend : public ScorerBackend {
 public:
  explicit FileCacheBackend(const std::string &path);

  ScorerResult call(const ScorerRequest &request) override;
  std::string name() const override { return "cache"; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, io::Json> entries_;
};

// Forwards to an inner backend and appends every answered item to a cache
// file usable by FileCacheBackend.
class RecordingBackend : public ScorerBackend {
 public:
  RecordingBackend(std::shared_ptr<ScorerBackend> inner, std::string path);

  ScorerResult call(const ScorerRequest &request) override;
  std::string name() const override { return "record(" + inner_->name() + ")"; }

 private:
  std::shared_ptr<ScorerBackend> inner_;
  std::string path_;
  std::mutex mu_;
};

struct GatewayOptions {
  std::size_t max_batch = 64;
  std::size_t max_parallel = 4;
};

// Chunks requests, dispatches chunks concurrently and reassembles results
// in input order. Safe to call from several threads.
class ScorerGateway {
 public:
  explicit ScorerGateway(std::shared_ptr<ScorerBackend> backend,
                         GatewayOptions options = {});

  ScorerResult call(const ScorerRequest &request) const;

  std::vector<std::vector<double>> embed(const std::vector<std::string> &texts) const;
  std::vector<SentimentLabel> sentiment(const std::vector<std::string> &texts) const;
  std::vector<double> acceptability(const std::vector<std::string> &texts) const;
  std::vector<std::string> verbalize(const std::vector<TripleText> &triples) const;
  std::vector<std::vector<std::string>> fill_mask(
      const std::vector<std::string> &texts, int k) const;

  const ScorerBackend &backend() const { return *backend_; }

 private:
  std::shared_ptr<ScorerBackend> backend_;
  GatewayOptions options_;
};

// Loads a fill-mask fixture JSONL: {"masked": str, "topk": [str]} per line.
std::map<std::string, std::vector<std::string>> load_fill_mask_fixture(
    const std::string &path);

}  // namespace stereokg

#endif  // STEREOKG_SCORER_H_
