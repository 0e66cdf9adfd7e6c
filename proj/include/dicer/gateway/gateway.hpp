#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <utility>

#include "dicer/layers/machine.hpp"

namespace httplib {
class Server;
}

namespace dicer {

struct GatewayOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  bool frames = true;
  bool allow_stepping = false;  // POST /api/v1/sim/step, for lockstep sessions
  int sse_poll_ms = 20;
};

// HTTP + server-sent-events face of the machine.
//   GET  /api/v1/snapshot   latest display snapshot
//   POST /api/v1/command    {type, params, request_id} -> {request_id, status, reason}
//   GET  /api/v1/events     SSE: `snapshot` and `event`
//   GET  /api/v1/recipe     current recipe
//   GET  /api/v1/frames/N.png
class Gateway {
 public:
  explicit Gateway(Machine& machine, GatewayOptions options = {});
  ~Gateway();

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  // Binds and serves on a background thread. Throws std::runtime_error when
  // the port cannot be bound. Returns the bound port.
  int start();
  void stop();
  int port() const { return port_; }

  // The POST /api/v1/command handler without the transport: (status, body).
  std::pair<int, std::string> handle_command(const std::string& body);
  std::string snapshot_body() const;

 private:
  void routes();
  std::string render(const DisplaySnapshot& snap) const;

  struct PngCache {
    bool valid = false;
    std::pair<std::uint64_t, std::uint64_t> key;
    std::string base64;
  };

  Machine& machine_;
  GatewayOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::atomic<bool> stopping_{false};
  int port_ = 0;

  std::mutex ids_mutex_;
  std::set<std::string> request_ids_;

  mutable std::mutex png_mutex_;
  mutable std::array<PngCache, Vve::kChannels> png_cache_;
};

}  // namespace dicer
