#include "stereokg/scorer.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <set>
#include <thread>

#include <httplib.h>

#include "stereokg/errors.h"
#include "stereokg/hashing.h"
#include "stereokg/text.h"
#include "stereokg/verbalize.h"

namespace stereokg {

using io::Json;

std::string_view capability_name(Capability capability) {
  switch (capability) {
    case Capability::kEmbed: return "embed";
    case Capability::kSentiment: return "sentiment";
    case Capability::kAcceptability: return "acceptability";
    case Capability::kVerbalize: return "verbalize";
    case Capability::kFillMask: return "fill_mask";
  }
  return "unknown";
}

Capability parse_capability(std::string_view name) {
  for (auto c : {Capability::kEmbed, Capability::kSentiment, Capability::kAcceptability,
                 Capability::kVerbalize, Capability::kFillMask}) {
    if (capability_name(c) == name) return c;
  }
  throw ScorerError("unknown capability '" + std::string(name) + "'");
}

std::string endpoint_path(Capability capability) {
  return "/" + std::string(capability_name(capability));
}

std::string_view sentiment_name(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::kPos: return "POS";
    case SentimentLabel::kNeu: return "NEU";
    case SentimentLabel::kNeg: return "NEG";
  }
  return "NEU";
}

SentimentLabel parse_sentiment(std::string_view name) {
  if (name == "POS") return SentimentLabel::kPos;
  if (name == "NEU") return SentimentLabel::kNeu;
  if (name == "NEG") return SentimentLabel::kNeg;
  throw ScorerError("invalid sentiment label '" + std::string(name) + "'");
}

std::size_t ScorerRequest::size() const {
  return capability == Capability::kVerbalize ? triples.size() : texts.size();
}

std::string ScorerRequest::item_text(std::size_t i) const {
  switch (capability) {
    case Capability::kVerbalize:
      return triples[i].s + '\t' + triples[i].p + '\t' + triples[i].o;
    case Capability::kFillMask:
      return texts[i] + '\n' + std::to_string(k);
    default:
      return texts[i];
  }
}

ScorerRequest ScorerRequest::slice(std::size_t begin, std::size_t end) const {
  ScorerRequest r;
  r.capability = capability;
  r.k = k;
  if (capability == Capability::kVerbalize) {
    r.triples.assign(triples.begin() + begin, triples.begin() + end);
  } else {
    r.texts.assign(texts.begin() + begin, texts.begin() + end);
  }
  return r;
}

std::size_t ScorerResult::size() const {
  switch (capability) {
    case Capability::kEmbed: return vectors.size();
    case Capability::kSentiment: return labels.size();
    case Capability::kAcceptability: return scores.size();
    case Capability::kVerbalize: return sentences.size();
    case Capability::kFillMask: return topk.size();
  }
  return 0;
}

namespace {

template <typename T>
void move_append(std::vector<T> &dst, std::vector<T> &src) {
  dst.insert(dst.end(), std::make_move_iterator(src.begin()),
             std::make_move_iterator(src.end()));
}

template <typename T>
std::vector<T> sub(const std::vector<T> &v, std::size_t begin, std::size_t end) {
  if (v.empty()) return {};
  return std::vector<T>(v.begin() + begin, v.begin() + end);
}

}  // namespace

void ScorerResult::append(ScorerResult &&other) {
  move_append(vectors, other.vectors);
  move_append(labels, other.labels);
  move_append(scores, other.scores);
  move_append(sentences, other.sentences);
  move_append(topk, other.topk);
}

ScorerResult ScorerResult::slice(std::size_t begin, std::size_t end) const {
  ScorerResult r;
  r.capability = capability;
  r.vectors = sub(vectors, begin, end);
  r.labels = sub(labels, begin, end);
  r.scores = sub(scores, begin, end);
  r.sentences = sub(sentences, begin, end);
  r.topk = sub(topk, begin, end);
  return r;
}

void ScorerResult::validate(std::size_t expected_size) const {
  const std::string cap(capability_name(capability));
  if (size() != expected_size) {
    throw ScorerError(cap + ": expected " + std::to_string(expected_size) +
                      " results, got " + std::to_string(size()));
  }
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw ScorerError(cap + ": score " + std::to_string(s) + " outside [0,1]");
    }
  }
  for (const auto &v : vectors) {
    if (v.empty() || v.size() != vectors.front().size()) {
      throw ScorerError(cap + ": inconsistent embedding dimensions");
    }
  }
}

Json encode_request(const ScorerRequest &request) {
  Json j;
  if (request.capability == Capability::kVerbalize) {
    Json triples = Json::array();
    for (const auto &t : request.triples) {
      triples.push_back({{"s", t.s}, {"p", t.p}, {"o", t.o}});
    }
    j["triples"] = std::move(triples);
  } else {
    j["texts"] = request.texts;
  }
  if (request.capability == Capability::kFillMask) j["k"] = request.k;
  return j;
}

ScorerRequest decode_request(Capability capability, const Json &body) {
  ScorerRequest r;
  r.capability = capability;
  try {
    if (capability == Capability::kVerbalize) {
      for (const auto &t : body.at("triples")) {
        r.triples.push_back({t.at("s").get<std::string>(), t.at("p").get<std::string>(),
                             t.at("o").get<std::string>()});
      }
    } else {
      r.texts = body.at("texts").get<std::vector<std::string>>();
    }
    if (capability == Capability::kFillMask) r.k = body.value("k", 5);
  } catch (const Json::exception &e) {
    throw ScorerError("malformed " + std::string(capability_name(capability)) +
                      " request: " + e.what());
  }
  return r;
}

Json encode_result(const ScorerResult &result) {
  Json j;
  switch (result.capability) {
    case Capability::kEmbed: j["vectors"] = result.vectors; break;
    case Capability::kSentiment: {
      Json labels = Json::array();
      for (auto l : result.labels) labels.push_back(sentiment_name(l));
      j["labels"] = std::move(labels);
      break;
    }
    case Capability::kAcceptability: j["scores"] = result.scores; break;
    case Capability::kVerbalize: j["sentences"] = result.sentences; break;
    case Capability::kFillMask: j["topk"] = result.topk; break;
  }
  return j;
}

ScorerResult decode_result(Capability capability, const Json &body) {
  ScorerResult r;
  r.capability = capability;
  try {
    switch (capability) {
      case Capability::kEmbed:
        r.vectors = body.at("vectors").get<std::vector<std::vector<double>>>();
        break;
      case Capability::kSentiment:
        for (const auto &l : body.at("labels")) {
          r.labels.push_back(parse_sentiment(l.get<std::string>()));
        }
        break;
      case Capability::kAcceptability:
        r.scores = body.at("scores").get<std::vector<double>>();
        break;
      case Capability::kVerbalize:
        r.sentences = body.at("sentences").get<std::vector<std::string>>();
        break;
      case Capability::kFillMask:
        r.topk = body.at("topk").get<std::vector<std::vector<std::string>>>();
        break;
    }
  } catch (const Json::exception &e) {
    throw ScorerError("malformed " + std::string(capability_name(capability)) +
                      " response: " + e.what());
  }
  return r;
}

std::string cache_key(Capability capability, std::string_view item_text) {
  return std::string(capability_name(capability)) + ":" + hex64(fnv1a64(item_text));
}

// ---------------------------------------------------------------------------
// Stub backend

StubBackend::StubBackend(StubOptions options) : options_(std::move(options)) {
  if (options_.embed_dim < 1) throw ConfigError("stub embed_dim must be >= 1");
}

double StubBackend::unit_hash(std::string_view salt, std::string_view text) const {
  std::string key = std::to_string(options_.seed);
  key += ':';
  key += salt;
  key += ':';
  key += text;
  return static_cast<double>(fnv1a64(key) >> 11) * 0x1.0p-53;
}

std::vector<double> StubBackend::embed(std::string_view text) const {
  std::vector<double> v(static_cast<std::size_t>(options_.embed_dim));
  double norm = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = 2.0 * unit_hash("embed:" + std::to_string(i), text) - 1.0;
    norm += v[i] * v[i];
  }
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    v.assign(v.size(), 0.0);
    v[0] = 1.0;
    return v;
  }
  for (double &x : v) x /= norm;
  return v;
}

const std::vector<std::string> &StubBackend::negative_lexicon() {
  static const std::vector<std::string> kWords = {
      "aggressive", "annoying", "arrogant", "awful",   "bad",      "corrupt",
      "cruel",      "dangerous", "dirty",   "disgusting", "evil",  "greedy",
      "hate",       "hateful",  "horrible", "lazy",    "racist",   "rude",
      "stupid",     "terrible", "ugly",     "violent", "weird",    "worst"};
  return kWords;
}

const std::vector<std::string> &StubBackend::positive_lexicon() {
  static const std::vector<std::string> kWords = {
      "beautiful", "best",     "clean",       "friendly", "generous", "good",
      "great",     "happy",    "hardworking", "helpful",  "honest",   "intelligent",
      "kind",      "love",     "loving",      "nice",     "peaceful", "polite",
      "punctual",  "smart",    "welcoming",   "wonderful"};
  return kWords;
}

const std::vector<std::string> &StubBackend::fallback_predictions() {
  static const std::vector<std::string> kWords = {
      "the", "it", "this", "that", "them", "there", "here", "now", "too", "again"};
  return kWords;
}

SentimentLabel StubBackend::sentiment(std::string_view text) const {
  static const std::set<std::string> neg(negative_lexicon().begin(),
                                         negative_lexicon().end());
  static const std::set<std::string> pos(positive_lexicon().begin(),
                                         positive_lexicon().end());
  const auto tokens = text::normalized_tokens(text);
  for (const auto &t : tokens) {
    if (neg.count(t)) return SentimentLabel::kNeg;
  }
  for (const auto &t : tokens) {
    if (pos.count(t)) return SentimentLabel::kPos;
  }
  return SentimentLabel::kNeu;
}

double StubBackend::acceptability(std::string_view text) const {
  const double u = unit_hash("acceptability", text);
  // Texts shaped like "subject verb object" (3+ tokens) land in the upper half.
  return text::split_ws(text).size() >= 3 ? 0.5 + 0.5 * u : 0.5 * u;
}

std::string StubBackend::verbalize(const TripleText &triple) const {
  return verbalize_fallback(triple.s, triple.p, triple.o);
}

std::vector<std::string> StubBackend::fill_mask(std::string_view masked, int k) const {
  auto it = options_.fill_mask_fixture.find(std::string(masked));
  const auto &source = it != options_.fill_mask_fixture.end() ? it->second
                                                              : fallback_predictions();
  const std::size_t n = std::min(source.size(), static_cast<std::size_t>(std::max(k, 0)));
  return std::vector<std::string>(source.begin(), source.begin() + n);
}

ScorerResult StubBackend::call(const ScorerRequest &request) {
  ScorerResult r;
  r.capability = request.capability;
  switch (request.capability) {
    case Capability::kEmbed:
      for (const auto &t : request.texts) r.vectors.push_back(embed(t));
      break;
    case Capability::kSentiment:
      for (const auto &t : request.texts) r.labels.push_back(sentiment(t));
      break;
    case Capability::kAcceptability:
      for (const auto &t : request.texts) r.scores.push_back(acceptability(t));
      break;
    case Capability::kVerbalize:
      for (const auto &t : request.triples) r.sentences.push_back(verbalize(t));
      break;
    case Capability::kFillMask:
      for (const auto &t : request.texts) r.topk.push_back(fill_mask(t, request.k));
      break;
  }
  return r;
}

// ---------------------------------------------------------------------------
// HTTP backend

struct HttpBackend::InFlight {
  explicit InFlight(int limit) : available(std::max(limit, 1)) {}
  void acquire() {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return available > 0; });
    --available;
  }
  void release() {
    {
      std::lock_guard lock(mu);
      ++available;
    }
    cv.notify_one();
  }
  std::mutex mu;
  std::condition_variable cv;
  int available;
};

HttpBackend::HttpBackend(HttpOptions options)
    : options_(std::move(options)),
      in_flight_(std::make_unique<InFlight>(options_.max_in_flight)) {
  if (options_.url.empty()) throw ConfigError("http scorer backend needs a url");
  if (options_.retries < 0) throw ConfigError("scorer retries must be >= 0");
}

HttpBackend::~HttpBackend() = default;

ScorerResult HttpBackend::call(const ScorerRequest &request) {
  const std::string path = endpoint_path(request.capability);
  const std::string body = encode_request(request).dump();
  std::string last_error;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long long>(options_.backoff_ms) << (attempt - 1)));
    }
    in_flight_->acquire();
    httplib::Result res;
    {
      httplib::Client client(options_.url);
      const auto timeout = std::chrono::milliseconds(options_.timeout_ms);
      client.set_connection_timeout(timeout);
      client.set_read_timeout(timeout);
      client.set_write_timeout(timeout);
      res = client.Post(path, body, "application/json");
    }
    in_flight_->release();
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    Json parsed;
    try {
      parsed = Json::parse(res->body);
    } catch (const Json::exception &) {
      throw ScorerError(path + ": response is not valid JSON");
    }
    ScorerResult result = decode_result(request.capability, parsed);
    result.validate(request.size());
    return result;
  }
  throw TransportError(options_.url + path + " failed after " +
                       std::to_string(options_.retries + 1) + " attempts (" +
                       last_error + ")");
}

// ---------------------------------------------------------------------------
// File cache and recorder

namespace {

Json item_value(const ScorerResult &r, std::size_t i) {
  switch (r.capability) {
    case Capability::kEmbed: return Json(r.vectors[i]);
    case Capability::kSentiment: return Json(sentiment_name(r.labels[i]));
    case Capability::kAcceptability: return Json(r.scores[i]);
    case Capability::kVerbalize: return Json(r.sentences[i]);
    case Capability::kFillMask: return Json(r.topk[i]);
  }
  return Json();
}

void append_item(ScorerResult &r, const Json &value) {
  switch (r.capability) {
    case Capability::kEmbed: r.vectors.push_back(value.get<std::vector<double>>()); break;
    case Capability::kSentiment:
      r.labels.push_back(parse_sentiment(value.get<std::string>()));
      break;
    case Capability::kAcceptability: r.scores.push_back(value.get<double>()); break;
    case Capability::kVerbalize: r.sentences.push_back(value.get<std::string>()); break;
    case Capability::kFillMask:
      r.topk.push_back(value.get<std::vector<std::string>>());
      break;
  }
}

}  // namespace

FileCacheBackend::FileCacheBackend(const std::string &path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("scorer cache file not found: " + path);
  }
  const auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    try {
      Json j = Json::parse(lines[i]);
      entries_[j.at("key").get<std::string>()] = j.at("value");
    } catch (const Json::exception &e) {
      throw DataError(path + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
}

ScorerResult FileCacheBackend::call(const ScorerRequest &request) {
  ScorerResult r;
  r.capability = request.capability;
  for (std::size_t i = 0; i < request.size(); ++i) {
    const std::string key = cache_key(request.capability, request.item_text(i));
    auto it = entries_.find(key);
    if (it == entries_.end()) throw CacheMiss(key);
    try {
      append_item(r, it->second);
    } catch (const Json::exception &e) {
      throw ScorerError("cache entry " + key + " is malformed: " + e.what());
    }
  }
  return r;
}

RecordingBackend::RecordingBackend(std::shared_ptr<ScorerBackend> inner, std::string path)
    : inner_(std::move(inner)), path_(std::move(path)) {}

ScorerResult RecordingBackend::call(const ScorerRequest &request) {
  ScorerResult result = inner_->call(request);
  result.validate(request.size());
  std::string lines;
  for (std::size_t i = 0; i < request.size(); ++i) {
    Json j;
    j["key"] = cache_key(request.capability, request.item_text(i));
    j["capability"] = capability_name(request.capability);
    j["value"] = item_value(result, i);
    lines += j.dump() + '\n';
  }
  std::lock_guard lock(mu_);
  if (auto parent = std::filesystem::path(path_).parent_path(); !parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  out << lines;
  if (!out) throw DataError("cannot append to scorer cache " + path_);
  return result;
}

// ---------------------------------------------------------------------------
// Gateway

ScorerGateway::ScorerGateway(std::shared_ptr<ScorerBackend> backend, GatewayOptions options)
    : backend_(std::move(backend)), options_(options) {
  if (!backend_) throw ConfigError("scorer gateway needs a backend");
  if (options_.max_batch == 0) throw ConfigError("max_batch must be >= 1");
  if (options_.max_parallel == 0) options_.max_parallel = 1;
}

ScorerResult ScorerGateway::call(const ScorerRequest &request) const {
  const std::size_t n = request.size();
  if (n == 0) {
    ScorerResult empty;
    empty.capability = request.capability;
    return empty;
  }
  const std::size_t chunks = (n + options_.max_batch - 1) / options_.max_batch;
  std::vector<ScorerResult> parts(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * options_.max_batch;
    const std::size_t end = std::min(n, begin + options_.max_batch);
    try {
      ScorerRequest piece = request.slice(begin, end);
      parts[c] = backend_->call(piece);
      parts[c].capability = request.capability;
      parts[c].validate(end - begin);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  const std::size_t workers = std::min(chunks, options_.max_parallel);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chunks; c = next++) run_chunk(c);
      });
    }
    for (auto &t : pool) t.join();
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  ScorerResult out;
  out.capability = request.capability;
  for (auto &p : parts) out.append(std::move(p));
  return out;
}

std::vector<std::vector<double>> ScorerGateway::embed(
    const std::vector<std::string> &texts) const {
  return call({Capability::kEmbed, texts, {}, 0}).vectors;
}

std::vector<SentimentLabel> ScorerGateway::sentiment(
    const std::vector<std::string> &texts) const {
  return call({Capability::kSentiment, texts, {}, 0}).labels;
}

std::vector<double> ScorerGateway::acceptability(
    const std::vector<std::string> &texts) const {
  return call({Capability::kAcceptability, texts, {}, 0}).scores;
}

std::vector<std::string> ScorerGateway::verbalize(
    const std::vector<TripleText> &triples) const {
  return call({Capability::kVerbalize, {}, triples, 0}).sentences;
}

std::vector<std::vector<std::string>> ScorerGateway::fill_mask(
    const std::vector<std::string> &texts, int k) const {
  return call({Capability::kFillMask, texts, {}, k}).topk;
}

std::map<std::string, std::vector<std::string>> load_fill_mask_fixture(
    const std::string &path) {
  std::map<std::string, std::vector<std::string>> out;
  const auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    try {
      Json j = Json::parse(lines[i]);
      out[j.at("masked").get<std::string>()] = j.at("topk").get<std::vector<std::string>>();
    } catch (const Json::exception &e) {
      throw DataError(path + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace stereokg
