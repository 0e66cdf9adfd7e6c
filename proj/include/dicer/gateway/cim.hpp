#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dicer/layers/machine.hpp"
#include "dicer/ve/vne.hpp"

namespace dicer {

// Loopback factory server on the far end of the machine's network card.
// Incoming CIM reports are kept and appended to an NDJSON file when a path is
// given. Works on the harness side of the network, so it costs no accesses.
class FactoryServerStub {
 public:
  explicit FactoryServerStub(std::string ndjson_path = {});

  void pump(NetworkSim& net);
  void send_order(NetworkSim& net, const Order& o);

  // Pumps from a machine task every period_ticks; the stub must outlive the machine's run.
  void attach(Machine& m, int period_ticks = 10);
  void send_order(Machine& m, const Order& o);

  const std::vector<CimReport>& records() const { return records_; }
  const std::vector<std::string>& lines() const { return lines_; }
  std::size_t malformed() const { return malformed_; }

 private:
  std::string path_;
  std::vector<CimReport> records_;
  std::vector<std::string> lines_;
  std::size_t malformed_ = 0;
};

}  // namespace dicer
