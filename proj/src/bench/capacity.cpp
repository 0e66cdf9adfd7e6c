#include "dicer/bench/capacity.hpp"

#include <numeric>
#include <stdexcept>

namespace dicer {

void CapacityModel::validate() const {
  if (N < 0.0) throw std::invalid_argument("capacity N must be non-negative");
  for (double v : n_w) {
    if (v < 0.0) throw std::invalid_argument("window load must be non-negative");
  }
  for (double v : n_t) {
    if (v < 0.0) throw std::invalid_argument("thread load must be non-negative");
  }
}

double available_capacity(const CapacityModel& model, ArchitectureMode mode) {
  model.validate();
  const double threads = std::accumulate(model.n_t.begin(), model.n_t.end(), 0.0);
  if (mode == ArchitectureMode::proposed) return model.N - threads;
  const double windows = std::accumulate(model.n_w.begin(), model.n_w.end(), 0.0);
  return model.N - windows - threads;
}

CapacityModel estimate_capacity(const AccessLedger& ledger, double N, double seconds,
                                const std::array<double, kDeviceClassCount>& weights) {
  if (!(seconds > 0.0)) throw std::invalid_argument("load window must be positive");
  CapacityModel m;
  m.N = N;
  const auto& agents = ledger.agents();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    double load = 0.0;
    for (std::size_t c = 0; c < kDeviceClassCount; ++c) {
      load += weights[c] * static_cast<double>(ledger.agent_totals()[i].n[c]);
    }
    load /= seconds;
    if (agents[i].kind == AgentKind::window) m.n_w.push_back(load);
    if (agents[i].kind == AgentKind::thread) m.n_t.push_back(load);
  }
  return m;
}

}  // namespace dicer
