#include "dicer/gateway/cim.hpp"

#include <fstream>
#include <stdexcept>

namespace dicer {

FactoryServerStub::FactoryServerStub(std::string ndjson_path) : path_(std::move(ndjson_path)) {
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write CIM log " + path_);
  }
}

void FactoryServerStub::pump(NetworkSim& net) {
  std::vector<std::string> got = net.server_receive();
  if (got.empty()) return;
  std::ofstream out;
  if (!path_.empty()) out.open(path_, std::ios::app);
  for (auto& line : got) {
    try {
      records_.push_back(decode_cim(line));
    } catch (const std::exception&) {
      malformed_++;
      continue;
    }
    if (out) out << line << '\n';
    lines_.push_back(std::move(line));
  }
}

void FactoryServerStub::send_order(NetworkSim& net, const Order& o) { net.server_send(encode_order(o)); }

void FactoryServerStub::attach(Machine& m, int period_ticks) {
  m.add_task("factory_server", AgentKind::harness, period_ticks, [this](Machine& mc) { pump(mc.pe().network()); });
}

void FactoryServerStub::send_order(Machine& m, const Order& o) {
  std::lock_guard lk(m.mutex());
  send_order(m.pe().network(), o);
}

}  // namespace dicer
