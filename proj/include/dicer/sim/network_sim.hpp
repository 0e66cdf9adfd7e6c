#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace dicer {

struct NetPoll {
  std::optional<std::string> packet;
  std::size_t remaining = 0;  // packets still queued after this one
};

// Machine-side network card plus the far end (factory server). Packets sent
// from either side arrive at the other on the next step.
class NetworkSim {
 public:
  void send(std::string packet);
  NetPoll poll();
  std::size_t pending() const { return connected_ ? inbound_.size() : 0; }

  bool connected() const { return connected_; }
  void set_connected(bool c) { connected_ = c; }

  void step();

  // Far end.
  void server_send(std::string packet) { to_machine_.push_back(std::move(packet)); }
  std::vector<std::string> server_receive();

 private:
  bool connected_ = true;
  std::deque<std::string> outbox_;      // written by the machine, not yet on the wire
  std::deque<std::string> to_machine_;  // in flight from the server
  std::deque<std::string> inbound_;     // delivered, waiting for poll
  std::deque<std::string> at_server_;
};

}  // namespace dicer
