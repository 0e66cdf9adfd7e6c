#include "dicer/sim/network_sim.hpp"

namespace dicer {

void NetworkSim::send(std::string packet) { outbox_.push_back(std::move(packet)); }

NetPoll NetworkSim::poll() {
  NetPoll r;
  if (!connected_ || inbound_.empty()) return r;
  r.packet = std::move(inbound_.front());
  inbound_.pop_front();
  r.remaining = inbound_.size();
  return r;
}

void NetworkSim::step() {
  if (!connected_) return;
  while (!outbox_.empty()) {
    at_server_.push_back(std::move(outbox_.front()));
    outbox_.pop_front();
  }
  while (!to_machine_.empty()) {
    inbound_.push_back(std::move(to_machine_.front()));
    to_machine_.pop_front();
  }
}

std::vector<std::string> NetworkSim::server_receive() {
  std::vector<std::string> out(std::make_move_iterator(at_server_.begin()), std::make_move_iterator(at_server_.end()));
  at_server_.clear();
  return out;
}

}  // namespace dicer
