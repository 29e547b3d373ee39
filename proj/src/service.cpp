#include "seedseg/service.hpp"

#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "seedseg/error.hpp"
#include "seedseg/formats.hpp"
#include "seedseg/perceptron.hpp"
#include "seedseg/pipeline.hpp"
#include "seedseg/segmenter.hpp"

namespace seedseg {

namespace {

using json = nlohmann::json;

// Hands out the lock in request-arrival order.
class FifoLock {
 public:
  void lock() {
    std::unique_lock<std::mutex> guard(mutex_);
    const std::uint64_t ticket = next_++;
    cv_.wait(guard, [&] { return serving_ == ticket; });
  }
  void unlock() {
    {
      std::lock_guard<std::mutex> guard(mutex_);
      ++serving_;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::uint64_t next_ = 0;
  std::uint64_t serving_ = 0;
};

struct Session {
  Session(std::string id_, Image image_)
      : id(std::move(id_)), image(std::move(image_)), created_at(std::chrono::system_clock::now()) {}

  const std::string id;
  const Image image;
  const std::chrono::system_clock::time_point created_at;
  FifoLock lock;
  std::optional<Mlp> model;
  std::optional<LabelMap> last_auto;
};

// Client-facing failure with an HTTP status.
struct HttpError : std::runtime_error {
  HttpError(int status_, const std::string& what) : std::runtime_error(what), status(status_) {}
  int status;
};

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw HttpError(400, "request body must be a JSON object");
  return body;
}

template <typename T>
T field(const json& body, const char* name, T fallback) {
  if (!body.contains(name)) return fallback;
  try {
    return body.at(name).get<T>();
  } catch (const json::exception&) {
    throw HttpError(400, std::string("field '") + name + "' has the wrong type");
  }
}

std::string new_session_id() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard<std::mutex> guard(mutex);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

}  // namespace

struct Service::Impl {
  explicit Impl(ServiceOptions opts) : options(std::move(opts)) { routes(); }

  ServiceOptions options;
  httplib::Server server;
  std::mutex sessions_mutex;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions;
  int bound_port = -1;
  // stop() can race a serve() that has not reached the accept loop yet.
  std::mutex run_mutex;
  bool serving = false;
  bool stopped = false;

  std::string add(Image image) {
    std::lock_guard<std::mutex> guard(sessions_mutex);
    std::string id;
    do {
      id = new_session_id();
    } while (sessions.count(id) != 0);
    sessions.emplace(id, std::make_shared<Session>(id, std::move(image)));
    return id;
  }

  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard<std::mutex> guard(sessions_mutex);
    const auto it = sessions.find(id);
    if (it == sessions.end()) throw HttpError(404, "unknown session '" + id + "'");
    return it->second;
  }

  // Runs `fn` with the session's FIFO lock held.
  template <typename Fn>
  auto with_session(const httplib::Request& req, Fn&& fn) {
    auto session = find(req.matches[1]);
    std::lock_guard<FifoLock> guard(session->lock);
    return fn(*session);
  }

  static const Mlp& require_model(const Session& s) {
    if (!s.model) throw HttpError(409, "model not trained");
    return *s.model;
  }

  void routes() {
    server.set_payload_max_length(options.max_upload_bytes);
    // The library default is SO_REUSEPORT, which lets a second server share a busy port.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                    std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const HttpError& e) {
        send_json(res, {{"error", e.what()}}, e.status);
      } catch (const Error& e) {
        send_json(res, {{"error", e.what()}, {"code", to_string(e.code())}}, 400);
      } catch (const std::exception& e) {
        send_json(res, {{"error", e.what()}}, 500);
      }
    });

    server.Post("/api/session", [this](const httplib::Request& req, httplib::Response& res) {
      Image img = load_ppm(req.body);
      const int w = img.width();
      const int h = img.height();
      send_json(res, {{"id", add(std::move(img))}, {"width", w}, {"height", h}});
    });

    server.Get(R"(/api/session/([0-9a-f]+)/image)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 // The image is immutable after upload; no session lock needed.
                 res.set_content(save_ppm(find(req.matches[1])->image), "image/x-portable-pixmap");
               });

    server.Post(R"(/api/session/([0-9a-f]+)/train)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  const json body = parse_body(req);
                  PipelineConfig cfg = PipelineConfig::with_seed(field<std::uint64_t>(body, "rng_seed", 0));
                  cfg.noise.p = field<double>(body, "noise_p", cfg.noise.p);
                  cfg.noise.runs = field<int>(body, "noise_runs", cfg.noise.runs);
                  cfg.hidden_size = field<int>(body, "hidden", cfg.hidden_size);
                  cfg.train.epochs = field<int>(body, "epochs", cfg.train.epochs);
                  cfg.train.learning_rate = field<double>(body, "learning_rate", cfg.train.learning_rate);
                  with_session(req, [&](Session& s) {
                    TrainedModel trained = train_on_image(s.image, cfg);
                    s.model = std::move(trained.mlp);
                    s.last_auto.reset();
                    send_json(res, {{"status", "trained"},
                                    {"pairs", trained.pairs},
                                    {"final_mean_loss", trained.report.final_mean_loss},
                                    {"seconds", trained.seconds}});
                  });
                });

    server.Post(R"(/api/session/([0-9a-f]+)/model)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  Mlp mlp = parse_model(req.body);
                  with_session(req, [&](Session& s) {
                    s.model = std::move(mlp);
                    s.last_auto.reset();
                    send_json(res, {{"status", "loaded"}, {"hidden", s.model->hidden_size()}});
                  });
                });

    server.Get(R"(/api/session/([0-9a-f]+)/model)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 with_session(req, [&](Session& s) {
                   res.set_content(serialize_model(require_model(s)), "text/plain");
                 });
               });

    server.Post(R"(/api/session/([0-9a-f]+)/segment)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  const json body = parse_body(req);
                  if (!body.contains("x") || !body.contains("y")) {
                    throw HttpError(400, "segment request needs integer x and y");
                  }
                  const PixelCoord at{field<int>(body, "x", 0), field<int>(body, "y", 0)};
                  with_session(req, [&](Session& s) {
                    const Mlp& mlp = require_model(s);
                    if (!s.image.contains(at)) throw HttpError(400, "point is outside the image");
                    PointSegmentation seg = segment_from_point(s.image, mlp_decider(mlp), at);
                    json runs = json::array();
                    for (const auto& r : encode_runs(seg.mask)) runs.push_back({r[0], r[1], r[2]});
                    send_json(res, {{"size", seg.mask.size()}, {"runs", std::move(runs)}});
                  });
                });

    server.Get(R"(/api/session/([0-9a-f]+)/auto)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 std::uint64_t seed = 0;
                 if (req.has_param("rng_seed")) {
                   try {
                     seed = std::stoull(req.get_param_value("rng_seed"));
                   } catch (const std::exception&) {
                     throw HttpError(400, "rng_seed must be a non-negative integer");
                   }
                 }
                 with_session(req, [&](Session& s) {
                   AutoSegmentation seg = segment_auto(s.image, mlp_decider(require_model(s)), seed);
                   json sizes = json::object();
                   for (const auto& [label, count] : segment_stats(seg.labels)) {
                     sizes[std::to_string(label)] = count;
                   }
                   s.last_auto = std::move(seg.labels);
                   send_json(res, {{"segments", s.last_auto->max_label()}, {"sizes", std::move(sizes)}});
                 });
               });

    server.Get(R"(/api/session/([0-9a-f]+)/contours.ppm)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 with_session(req, [&](Session& s) {
                   if (!s.last_auto) throw HttpError(409, "no automatic segmentation yet");
                   res.set_content(save_ppm(render_contours(s.image, *s.last_auto)),
                                   "image/x-portable-pixmap");
                 });
               });

    if (!options.static_dir.empty()) {
      if (!server.set_mount_point("/", options.static_dir)) {
        throw std::runtime_error("static directory '" + options.static_dir + "' does not exist");
      }
    } else {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(
            "<!doctype html><title>seedseg</title><p>seedseg API is running. Start the server "
            "with --static-dir to serve the browser client.</p>",
            "text/html");
      });
    }
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() { stop(); }

std::string Service::create_session(Image image) { return impl_->add(std::move(image)); }

int Service::bind() {
  auto& o = impl_->options;
  if (o.port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(o.host);
  } else {
    impl_->bound_port = impl_->server.bind_to_port(o.host, o.port) ? o.port : -1;
  }
  if (impl_->bound_port < 0) {
    throw std::runtime_error("cannot listen on " + o.host + ":" + std::to_string(o.port));
  }
  return impl_->bound_port;
}

void Service::serve() {
  if (impl_->bound_port < 0) throw std::runtime_error("serve() called before bind()");
  {
    std::lock_guard<std::mutex> guard(impl_->run_mutex);
    if (impl_->stopped) return;
    impl_->serving = true;
  }
  impl_->server.listen_after_bind();
}

void Service::stop() {
  if (!impl_) return;
  {
    std::lock_guard<std::mutex> guard(impl_->run_mutex);
    impl_->stopped = true;
    if (!impl_->serving) return;
  }
  impl_->server.wait_until_ready();
  impl_->server.stop();
}

}  // namespace seedseg
