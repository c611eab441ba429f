#ifndef STEREOKG_ERRORS_H_
#define STEREOKG_ERRORS_H_

#include <stdexcept>
#include <string>

namespace stereokg {

// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kUsage = 1,   // bad flags, bad or inconsistent configuration
  kData = 2,    // missing or malformed artifacts, invariant violations
  kScorer = 3,  // scorer backend transport failures and cache misses
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &message)
      : Error(ErrorKind::kUsage, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string &message)
      : Error(ErrorKind::kData, message) {}
};

// Raised when an operation needs a non-empty corpus or table.
class EmptyCorpus : public DataError {
 public:
  explicit EmptyCorpus(const std::string &what)
      : DataError("EmptyCorpus: " + what) {}
};

class ScorerError : public Error {
 public:
  explicit ScorerError(const std::string &message)
      : Error(ErrorKind::kScorer, message) {}
};

class TransportError : public ScorerError {
 public:
  explicit TransportError(const std::string &message)
      : ScorerError("transport error: " + message) {}
};

class CacheMiss : public ScorerError {
 public:
  explicit CacheMiss(const std::string &key)
      : ScorerError("CacheMiss: " + key), key_(key) {}
  const std::string &key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace stereokg

#endif  // STEREOKG_ERRORS_H_
