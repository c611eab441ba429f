#ifndef STEREOKG_SCORER_SERVER_H_
#define STEREOKG_SCORER_SERVER_H_

#include <memory>
#include <string>

#include "stereokg/scorer.h"

namespace stereokg {

// Serves the scorer wire protocol on top of any backend, plus
// GET /health. Used for contract tests and as a stub service for
// cross-process runs.
class ScorerServer {
 public:
  explicit ScorerServer(std::shared_ptr<ScorerBackend> backend);
  ~ScorerServer();

  ScorerServer(const ScorerServer &) = delete;
  ScorerServer &operator=(const ScorerServer &) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  // Returns the bound port.
  int start(const std::string &host = "127.0.0.1", int port = 0);
  // Serves on the calling thread until stop() is called elsewhere.
  void listen(const std::string &host, int port);
  void stop();

  // Answer the next `n` requests with HTTP 503 (retry testing).
  void fail_next(int n);
  int requests_served() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace stereokg

#endif  // STEREOKG_SCORER_SERVER_H_
