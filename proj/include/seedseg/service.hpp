#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include "seedseg/image.hpp"

namespace seedseg {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 8080;
  std::size_t max_upload_bytes = 16u << 20;
  /// Optional directory served at "/" (the browser client bundle).
  std::string static_dir;
};

/// In-memory session service behind the HTTP API:
///   POST /api/session                      raw PPM -> {"id","width","height"}
///   GET  /api/session/{id}/image           raw PPM
///   POST /api/session/{id}/train           JSON params -> training report
///   POST /api/session/{id}/model           .msf text (load an existing model)
///   GET  /api/session/{id}/model           .msf text
///   POST /api/session/{id}/segment         {"x","y"} -> {"size","runs":[[y,x,len],...]}
///   GET  /api/session/{id}/auto?rng_seed=  -> {"segments","sizes":{label:count}}
///   GET  /api/session/{id}/contours.ppm    contours of the last automatic run
/// Requests on one session run one at a time in arrival order; sessions are independent.
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Registers a session directly (used for an image given on the command line).
  std::string create_session(Image image);

  /// Binds the listening socket and returns the bound port. Throws if the port is busy.
  int bind();
  /// Serves until stop(); bind() must have succeeded.
  void serve();
  /// Safe to call from any thread, before or during serve(); a later serve() returns at once.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace seedseg
