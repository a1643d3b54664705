#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "geoseg/distance.hpp"

namespace geoseg {

struct ServiceConfig {
  std::chrono::milliseconds session_ttl = std::chrono::minutes(30);
  /// Files served at "/" (the browser UI build), if set.
  std::optional<std::filesystem::path> static_root;
  /// Solver defaults for POST /distance; lambda and iters can be overridden per call.
  DistanceParams interactive_params;
  std::uint32_t sweep_steps = 256;
};

/// HTTP session service for the interactive loop:
///   POST   /sessions                       CST body, or multipart {stack, gt?, features?}
///   PUT    /sessions/{id}/scribbles        JSON [{"x","y","label"}]
///   POST   /sessions/{id}/distance         ?method=&lambda=&iters=
///   GET    /sessions/{id}/segmentation     ?method=&t=[&format=json]
///   GET    /sessions/{id}/dice-curve       ?method=[&format=csv]
///   GET    /sessions/{id}/map              ?method=   (normalized map as CST)
///   GET    /sessions/{id}/preview          ?channels=a[,b,c]
///   DELETE /sessions/{id}
///   GET    /healthz
class Service {
 public:
  explicit Service(ServiceConfig config = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Blocks serving requests until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it; follow with listen_after_bind().
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace geoseg
