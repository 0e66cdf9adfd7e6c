#include "dicer/gateway/gateway.hpp"

#include <chrono>
#include <stdexcept>

#include "dicer/gateway/messages.hpp"
#include "dicer/gateway/png.hpp"
#include "httplib.h"

namespace dicer {

namespace {

constexpr const char* kJson = "application/json";

struct SseCursor {
  bool sent = false;
  std::uint64_t tick = 0;
  std::uint64_t event_seq = 0;
};

}  // namespace

Gateway::Gateway(Machine& machine, GatewayOptions options)
    : machine_(machine), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  // No SO_REUSEPORT: a second gateway on a taken port must fail to bind.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  routes();
}

Gateway::~Gateway() { stop(); }

std::string Gateway::snapshot_body() const { return render(machine_.display_snapshot()); }

// Frames change far less often than snapshots are read; encode each capture once.
std::string Gateway::render(const DisplaySnapshot& snap) const {
  nlohmann::json j = snapshot_message(snap, false);
  if (!options_.frames) return j.dump();
  std::lock_guard lk(png_mutex_);
  for (std::size_t ch = 0; ch < snap.vision.size(); ++ch) {
    const FrameBuffer& f = snap.vision[ch].last_frame;
    if (f.empty()) continue;
    PngCache& c = png_cache_[ch];
    const std::pair<std::uint64_t, std::uint64_t> key{snap.vision[ch].frame_count, f.capture_tick()};
    if (!c.valid || c.key != key) {
      c.base64 = base64_encode(encode_png_gray(f.width(), f.height(), f.pixels()));
      c.key = key;
      c.valid = true;
    }
    j["frames"][ch]["image"]["png_base64"] = c.base64;
  }
  return j.dump();
}

std::pair<int, std::string> Gateway::handle_command(const std::string& body) {
  const CommandParse p = parse_command(body);
  if (!p.command) return {400, response_json({p.request_id, false, p.error}).dump()};
  {
    std::lock_guard lk(ids_mutex_);
    if (!request_ids_.insert(p.request_id).second) {
      return {409, response_json({p.request_id, false, "duplicate request_id"}).dump()};
    }
  }
  return {200, response_json(execute_command(machine_, *p.command)).dump()};
}

void Gateway::routes() {
  auto& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"}, {"Cache-Control", "no-store"}});

  s.Get("/api/v1/snapshot", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(snapshot_body(), kJson);
  });

  s.Get("/api/v1/recipe", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(nlohmann::json(machine_.recipe()).dump(), kJson);
  });

  s.Post("/api/v1/command", [this](const httplib::Request& req, httplib::Response& res) {
    auto [status, body] = handle_command(req.body);
    res.status = status;
    res.set_content(body, kJson);
  });

  s.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  s.Get(R"(/api/v1/frames/(\d+)\.png)", [this](const httplib::Request& req, httplib::Response& res) {
    const int ch = std::stoi(req.matches[1]);
    const DisplaySnapshot snap = machine_.display_snapshot();
    if (ch < 0 || ch >= Vve::kChannels || snap.vision[static_cast<std::size_t>(ch)].last_frame.empty()) {
      res.status = 404;
      return;
    }
    const FrameBuffer& f = snap.vision[static_cast<std::size_t>(ch)].last_frame;
    const auto png = encode_png_gray(f.width(), f.height(), f.pixels());
    res.set_content(std::string(png.begin(), png.end()), "image/png");
  });

  s.Post("/api/v1/sim/step", [this](const httplib::Request& req, httplib::Response& res) {
    if (!options_.allow_stepping) {
      res.status = 404;
      return;
    }
    std::uint64_t ticks = 1;
    try {
      const auto j = nlohmann::json::parse(req.body.empty() ? "{}" : req.body);
      ticks = j.value("ticks", std::uint64_t{1});
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(nlohmann::json{{"error", e.what()}}.dump(), kJson);
      return;
    }
    machine_.step(ticks);
    res.set_content(nlohmann::json{{"tick", machine_.tick()}}.dump(), kJson);
  });

  s.Get("/api/v1/events", [this](const httplib::Request&, httplib::Response& res) {
    auto cursor = std::make_shared<SseCursor>();
    res.set_chunked_content_provider("text/event-stream", [this, cursor](std::size_t, httplib::DataSink& sink) {
      if (stopping_) {
        sink.done();
        return false;
      }
      std::string out;
      const DisplaySnapshot snap = machine_.display_snapshot();
      if (!cursor->sent) cursor->event_seq = snap.event_seq > Machine::kEventTail ? snap.event_seq - Machine::kEventTail : 0;
      for (const auto& e : machine_.events_since(cursor->event_seq)) {
        out += "event: event\ndata: " + event_json(e).dump() + "\n\n";
        cursor->event_seq++;
      }
      if (!cursor->sent || snap.tick != cursor->tick) {
        out += "event: snapshot\ndata: " + render(snap) + "\n\n";
        cursor->sent = true;
        cursor->tick = snap.tick;
      }
      if (out.empty()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(options_.sse_poll_ms));
        return true;
      }
      return sink.write(out.data(), out.size());
    });
  });
}

int Gateway::start() {
  if (thread_.joinable()) return port_;
  stopping_ = false;
  if (options_.port == 0) {
    port_ = server_->bind_to_any_port(options_.host);
    if (port_ <= 0) throw std::runtime_error("gateway: cannot bind " + options_.host);
  } else {
    if (!server_->bind_to_port(options_.host, options_.port)) {
      throw std::runtime_error("gateway: port " + std::to_string(options_.port) + " is busy");
    }
    port_ = options_.port;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void Gateway::stop() {
  stopping_ = true;
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace dicer
