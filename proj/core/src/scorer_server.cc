#include "stereokg/scorer_server.h"

#include <atomic>
#include <thread>

#include <httplib.h>

#include "stereokg/errors.h"

namespace stereokg {

using io::Json;

struct ScorerServer::Impl {
  std::shared_ptr<ScorerBackend> backend;
  httplib::Server server;
  std::thread thread;
  std::atomic<int> fail_next{0};
  std::atomic<int> served{0};

  void install_routes() {
    server.Get("/health", [this](const httplib::Request &, httplib::Response &res) {
      Json caps;
      for (auto c : {Capability::kEmbed, Capability::kSentiment, Capability::kAcceptability,
                     Capability::kVerbalize, Capability::kFillMask}) {
        caps[std::string(capability_name(c))] = true;
      }
      res.set_content(Json{{"capabilities", caps}}.dump(), "application/json");
    });
    for (auto c : {Capability::kEmbed, Capability::kSentiment, Capability::kAcceptability,
                   Capability::kVerbalize, Capability::kFillMask}) {
      server.Post(endpoint_path(c), [this, c](const httplib::Request &req,
                                              httplib::Response &res) {
        handle(c, req, res);
      });
    }
  }

  void handle(Capability c, const httplib::Request &req, httplib::Response &res) {
    ++served;
    if (fail_next.load() > 0 && fail_next-- > 0) {
      res.status = 503;
      res.set_content(Json{{"error", "injected failure"}}.dump(), "application/json");
      return;
    }
    ScorerRequest request;
    try {
      request = decode_request(c, Json::parse(req.body));
    } catch (const std::exception &e) {
      res.status = 400;
      res.set_content(Json{{"error", e.what()}}.dump(), "application/json");
      return;
    }
    try {
      ScorerResult result = backend->call(request);
      result.validate(request.size());
      res.set_content(encode_result(result).dump(), "application/json");
    } catch (const std::exception &e) {
      res.status = 503;
      res.set_content(Json{{"error", std::string(capability_name(c)) + ": " + e.what()}}.dump(),
                      "application/json");
    }
  }
};

ScorerServer::ScorerServer(std::shared_ptr<ScorerBackend> backend)
    : impl_(std::make_unique<Impl>()) {
  impl_->backend = std::move(backend);
  impl_->install_routes();
}

ScorerServer::~ScorerServer() { stop(); }

int ScorerServer::start(const std::string &host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    throw TransportError("cannot bind scorer server to " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void ScorerServer::listen(const std::string &host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw TransportError("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void ScorerServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void ScorerServer::fail_next(int n) { impl_->fail_next = n; }

int ScorerServer::requests_served() const { return impl_->served; }

}  // namespace stereokg
