#include "geoseg/service.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "geoseg/error.hpp"
#include "geoseg/harness.hpp"
#include "geoseg/io.hpp"
#include "geoseg/segment.hpp"

namespace geoseg {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

struct CachedMap {
  DistanceMap normalized;
  double min_raw = 0.0;
  double max_raw = 0.0;
  double compute_ms = 0.0;
};
using MapFuture = std::shared_future<std::shared_ptr<const CachedMap>>;

struct CacheEntry {
  DistanceParams params;
  std::uint64_t generation = 0;
  MapFuture future;
};

struct Session {
  Session(std::string session_id, ImageVariants v, std::optional<BinaryMask> g)
      : id(std::move(session_id)), variants(std::move(v)), gt(std::move(g)),
        created_at(Clock::now()) {}

  const std::string id;
  const ImageVariants variants;
  const std::optional<BinaryMask> gt;
  const Clock::time_point created_at;

  std::mutex mutex;  // guards scribbles, generation, cache
  std::optional<ScribbleSet> scribbles;
  std::uint64_t generation = 0;
  std::map<std::string, CacheEntry> cache;

  std::mutex compute_mutex;  // at most one solver run per session
};

class HttpError : public std::runtime_error {
 public:
  HttpError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

std::span<const std::byte> as_bytes(const std::string& body) {
  return {reinterpret_cast<const std::byte*>(body.data()), body.size()};
}

std::string to_body(const std::vector<std::byte>& bytes) {
  return std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

bool same_params(const DistanceParams& a, const DistanceParams& b) {
  return a.lambda == b.lambda && a.connectivity == b.connectivity &&
         a.max_iterations == b.max_iterations && a.convergence_epsilon == b.convergence_epsilon;
}

template <typename T>
std::optional<T> query_number(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  const auto text = req.get_param_value(key);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw HttpError(400, std::string("query parameter '") + key + "' is not a number");
  }
  return value;
}

std::string required_param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) throw HttpError(400, std::string("missing query parameter '") + key + "'");
  return req.get_param_value(key);
}

}  // namespace

struct Service::Impl {
  explicit Impl(ServiceConfig c) : config(std::move(c)), rng(std::random_device{}()) {
    config.interactive_params.validate();
    routes();
  }

  // ---- session store -------------------------------------------------------

  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard lock(store_mutex);
    purge_expired_locked();
    const auto it = sessions.find(id);
    if (it == sessions.end()) throw HttpError(404, "unknown session '" + id + "'");
    it->second.last_touched = Clock::now();
    return it->second.session;
  }

  void purge_expired_locked() {
    const auto now = Clock::now();
    std::erase_if(sessions, [&](const auto& kv) {
      return now - kv.second.last_touched > config.session_ttl;
    });
  }

  std::string new_id_locked() {
    static constexpr char kHex[] = "0123456789abcdef";
    for (;;) {
      std::string id;
      for (int k = 0; k < 2; ++k) {
        auto bits = rng();
        for (int i = 0; i < 16; ++i, bits >>= 4) id.push_back(kHex[bits & 0xF]);
      }
      if (!sessions.contains(id)) return id;
    }
  }

  std::size_t count() {
    std::lock_guard lock(store_mutex);
    purge_expired_locked();
    return sessions.size();
  }

  // ---- distance cache ------------------------------------------------------

  MethodSpec method_for(const std::string& name, const DistanceParams& params) const {
    for (auto& spec : default_methods(params)) {
      if (spec.name == name) return spec;
    }
    throw HttpError(400, "unknown method '" + name +
                             "' (expected features, hyperspectral, rgb or euclidean)");
  }

  struct Computed {
    std::shared_ptr<const CachedMap> map;
    bool initiated = false;
  };

  static std::shared_ptr<const CachedMap> await(Session& session, const std::string& method,
                                                const MapFuture& future,
                                                std::uint64_t generation) {
    std::shared_ptr<const CachedMap> map;
    try {
      map = future.get();
    } catch (const Error& e) {
      std::lock_guard lock(session.mutex);
      const auto it = session.cache.find(method);
      if (it != session.cache.end() && it->second.generation == generation) session.cache.erase(it);
      throw HttpError(422, e.what());
    }
    std::lock_guard lock(session.mutex);
    if (session.generation != generation) {
      throw HttpError(409, "scribbles changed while the map was being computed");
    }
    return map;
  }

  Computed compute(const std::shared_ptr<Session>& session, const MethodSpec& spec) {
    MapFuture future;
    std::uint64_t generation = 0;
    bool initiated = false;
    {
      std::lock_guard lock(session->mutex);
      if (!session->scribbles) throw HttpError(409, "no scribbles set for this session");
      generation = session->generation;
      const auto it = session->cache.find(spec.name);
      if (it != session->cache.end() && same_params(it->second.params, spec.params)) {
        future = it->second.future;
      } else {
        initiated = true;
        future = std::async(std::launch::async,
                            [session, spec, scribbles = *session->scribbles] {
                              std::lock_guard compute_lock(session->compute_mutex);
                              const auto start = Clock::now();
                              const auto raw = compute_method_map(spec, session->variants, scribbles);
                              const auto [lo, hi] =
                                  std::minmax_element(raw.data().begin(), raw.data().end());
                              auto normalized = normalize_map(raw);
                              const double ms =
                                  std::chrono::duration<double, std::milli>(Clock::now() - start)
                                      .count();
                              return std::make_shared<const CachedMap>(
                                  CachedMap{std::move(normalized), *lo, *hi, ms});
                            })
                     .share();
        session->cache[spec.name] = CacheEntry{spec.params, generation, future};
      }
    }
    return {await(*session, spec.name, future, generation), initiated};
  }

  std::shared_ptr<const CachedMap> cached(const std::shared_ptr<Session>& session,
                                          const std::string& method) {
    MapFuture future;
    std::uint64_t generation = 0;
    {
      std::lock_guard lock(session->mutex);
      const auto it = session->cache.find(method);
      if (it == session->cache.end()) {
        throw HttpError(409, "no distance map computed for method '" + method + "'");
      }
      future = it->second.future;
      generation = it->second.generation;
    }
    return await(*session, method, future, generation);
  }

  // ---- handlers ------------------------------------------------------------

  struct Upload {
    ImageVariants variants;
    std::optional<BinaryMask> gt;
  };

  static Upload parse_upload(const httplib::Request& req) {
    std::string stack_body;
    std::optional<std::string> gt_body;
    std::optional<std::string> features_body;
    if (req.is_multipart_form_data()) {
      if (!req.has_file("stack")) throw HttpError(400, "multipart upload needs a 'stack' part");
      stack_body = req.get_file_value("stack").content;
      if (req.has_file("gt")) gt_body = req.get_file_value("gt").content;
      if (req.has_file("features")) features_body = req.get_file_value("features").content;
    } else {
      stack_body = req.body;
    }
    try {
      auto cube = decode_cst(as_bytes(stack_body));
      std::optional<BinaryMask> gt;
      if (gt_body) {
        gt = decode_pgm(as_bytes(*gt_body));
        if (gt->height() != cube.height() || gt->width() != cube.width()) {
          throw HttpError(400, "ground truth size does not match the stack");
        }
      }
      std::optional<ChannelStack> features;
      if (features_body) features = decode_cst(as_bytes(*features_body));
      return Upload{make_variants(std::move(cube), std::move(features)), std::move(gt)};
    } catch (const Error& e) {
      throw HttpError(400, e.what());
    }
  }

  void create_session(const httplib::Request& req, httplib::Response& res) {
    auto upload = parse_upload(req);
    const auto& cube = upload.variants.hyperspectral;
    const json shape{{"height", cube.height()},
                     {"width", cube.width()},
                     {"channels", cube.channels()},
                     {"has_gt", upload.gt.has_value()}};
    std::string id;
    {
      std::lock_guard lock(store_mutex);
      purge_expired_locked();
      id = new_id_locked();
      auto session =
          std::make_shared<Session>(id, std::move(upload.variants), std::move(upload.gt));
      sessions.emplace(id, Entry{std::move(session), Clock::now()});
    }
    json body = shape;
    body["id"] = id;
    send_json(res, 201, body);
  }

  void put_scribbles(const httplib::Request& req, httplib::Response& res) {
    auto session = find(req.matches[1]);
    const auto& cube = session->variants.hyperspectral;
    std::optional<ScribbleSet> scribbles;
    try {
      scribbles = parse_scribbles_json(req.body, cube.height(), cube.width());
      scribbles->foreground_indices();
    } catch (const Error& e) {
      throw HttpError(422, e.what());
    }
    {
      std::lock_guard lock(session->mutex);
      session->scribbles = std::move(scribbles);
      ++session->generation;
      session->cache.clear();
    }
    res.status = 204;
  }

  void compute_distance(const httplib::Request& req, httplib::Response& res) {
    auto session = find(req.matches[1]);
    auto params = config.interactive_params;
    if (auto lambda = query_number<double>(req, "lambda")) params.lambda = *lambda;
    if (auto iters = query_number<std::uint32_t>(req, "iters")) params.max_iterations = *iters;
    try {
      params.validate();
    } catch (const Error& e) {
      throw HttpError(422, e.what());
    }
    const auto spec = method_for(required_param(req, "method"), params);
    const auto computed = compute(session, spec);
    send_json(res, 200,
              {{"method", spec.name},
               {"min_raw", computed.map->min_raw},
               {"max_raw", computed.map->max_raw},
               {"compute_ms", computed.initiated ? computed.map->compute_ms : 0.0},
               {"cached", !computed.initiated}});
  }

  void get_segmentation(const httplib::Request& req, httplib::Response& res) {
    auto session = find(req.matches[1]);
    const auto method = required_param(req, "method");
    const auto t = query_number<double>(req, "t");
    if (!t) throw HttpError(400, "missing query parameter 't'");
    if (!(*t >= 0.0 && *t <= 1.0)) throw HttpError(422, "threshold must be in [0, 1]");
    const auto map = cached(session, method);
    const auto mask = threshold_segment(map->normalized, *t);
    std::optional<double> score;
    if (session->gt) score = dice(mask, *session->gt);

    if (req.has_param("format") && req.get_param_value("format") == "json") {
      json body{{"method", method}, {"threshold", *t}, {"selected", mask.count()},
                {"height", mask.height()}, {"width", mask.width()}};
      body["dice"] = score ? json(*score) : json(nullptr);
      send_json(res, 200, body);
      return;
    }
    if (score) res.set_header("X-Dice", format_float(*score));
    res.status = 200;
    res.set_content(to_body(encode_pgm(mask)), "image/x-portable-graymap");
  }

  void get_dice_curve(const httplib::Request& req, httplib::Response& res) {
    auto session = find(req.matches[1]);
    const auto method = required_param(req, "method");
    if (!session->gt) throw HttpError(409, "session has no ground truth");
    const auto steps = query_number<std::uint32_t>(req, "steps").value_or(config.sweep_steps);
    if (steps < 2) throw HttpError(422, "steps must be >= 2");
    const auto map = cached(session, method);
    const auto curve = dice_sweep(map->normalized, *session->gt, steps);
    if (req.has_param("format") && req.get_param_value("format") == "csv") {
      res.status = 200;
      res.set_content(dice_curve_to_csv(curve), "text/csv");
      return;
    }
    res.status = 200;
    res.set_content(dice_curve_to_json(curve), "application/json");
  }

  void get_map(const httplib::Request& req, httplib::Response& res) {
    auto session = find(req.matches[1]);
    const auto map = cached(session, required_param(req, "method"));
    res.status = 200;
    res.set_content(to_body(encode_cst(to_channel_stack(map->normalized))),
                    "application/octet-stream");
  }

  void get_preview(const httplib::Request& req, httplib::Response& res) {
    auto session = find(req.matches[1]);
    const ChannelStack* source = &session->variants.hyperspectral;
    std::vector<std::uint32_t> picks;
    if (req.has_param("channels")) {
      std::stringstream list(req.get_param_value("channels"));
      std::string item;
      while (std::getline(list, item, ',')) {
        std::uint32_t c = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), c);
        if (ec != std::errc() || ptr != item.data() + item.size() || c >= source->channels()) {
          throw HttpError(422, "bad channel index '" + item + "'");
        }
        picks.push_back(c);
      }
      if (picks.size() != 1 && picks.size() != 3) {
        throw HttpError(422, "channels must list 1 or 3 indices");
      }
    } else if (source->channels() == 1) {
      picks = {0};
    } else {
      if (source->channels() != 3) source = &session->variants.rgb;
      picks = {0, 1, 2};
    }
    float lo = std::numeric_limits<float>::max();
    float hi = std::numeric_limits<float>::lowest();
    for (std::size_t i = 0; i < source->pixel_count(); ++i) {
      for (auto c : picks) {
        lo = std::min(lo, source->pixel(i)[c]);
        hi = std::max(hi, source->pixel(i)[c]);
      }
    }
    const double range = static_cast<double>(hi) - lo;
    std::vector<std::uint8_t> pixels;
    pixels.reserve(source->pixel_count() * picks.size());
    for (std::size_t i = 0; i < source->pixel_count(); ++i) {
      for (auto c : picks) {
        const double v = range > 0.0 ? (source->pixel(i)[c] - lo) / range : 0.0;
        pixels.push_back(static_cast<std::uint8_t>(std::lround(255.0 * v)));
      }
    }
    const auto channels = static_cast<std::uint32_t>(picks.size());
    res.status = 200;
    res.set_content(to_body(encode_pnm8(source->height(), source->width(), channels, pixels)),
                    channels == 1 ? "image/x-portable-graymap" : "image/x-portable-pixmap");
  }

  void delete_session(const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(store_mutex);
    if (sessions.erase(req.matches[1]) == 0) throw HttpError(404, "unknown session");
    res.status = 204;
  }

  template <typename Handler>
  httplib::Server::Handler guarded(Handler handler) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      try {
        (this->*handler)(req, res);
      } catch (const HttpError& e) {
        send_json(res, e.status(), {{"error", e.what()}});
      } catch (const Error& e) {
        send_json(res, 400, {{"error", e.what()}, {"code", to_string(e.code())}});
      } catch (const std::exception& e) {
        send_json(res, 500, {{"error", e.what()}});
      }
    };
  }

  void routes() {
    const std::string sid = "/sessions/([A-Za-z0-9]+)";
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok", "text/plain");
    });
    server.Post("/sessions", guarded(&Impl::create_session));
    server.Put(sid + "/scribbles", guarded(&Impl::put_scribbles));
    server.Post(sid + "/distance", guarded(&Impl::compute_distance));
    server.Get(sid + "/segmentation", guarded(&Impl::get_segmentation));
    server.Get(sid + "/dice-curve", guarded(&Impl::get_dice_curve));
    server.Get(sid + "/map", guarded(&Impl::get_map));
    server.Get(sid + "/preview", guarded(&Impl::get_preview));
    server.Delete(sid, guarded(&Impl::delete_session));
    if (config.static_root) server.set_mount_point("/", config.static_root->string());
  }

  struct Entry {
    std::shared_ptr<Session> session;
    Clock::time_point last_touched;
  };

  ServiceConfig config;
  httplib::Server server;
  mutable std::mutex store_mutex;
  std::map<std::string, Entry> sessions;
  std::mt19937_64 rng;
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
Service::~Service() { stop(); }

bool Service::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int Service::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool Service::listen_after_bind() { return impl_->server.listen_after_bind(); }
void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }
void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}
std::size_t Service::session_count() const { return impl_->count(); }

}  // namespace geoseg
