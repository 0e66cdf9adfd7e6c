#pragma once

#include <array>
#include <vector>

#include "dicer/bench/workload.hpp"
#include "dicer/sim/ledger.hpp"

namespace dicer {

// N is the capacity of the system resource per unit time; n_w and n_t are the
// loads of the windows and threads.
struct CapacityModel {
  double N = 0.0;
  std::vector<double> n_w;
  std::vector<double> n_t;

  void validate() const;
};

// typical: N - sum(n_w) - sum(n_t); proposed: N - sum(n_t).
double available_capacity(const CapacityModel& model, ArchitectureMode mode);

// Zero or negative capacity means the computer is predicted to go down.
inline bool failure_predicted(double n_a) { return n_a <= 0.0; }

// Load per agent = accesses per second weighted by device class. Window
// agents become n_w, thread agents n_t; the harness is ignored.
CapacityModel estimate_capacity(const AccessLedger& ledger, double N, double seconds,
                                const std::array<double, kDeviceClassCount>& weights = {1.0, 1.0, 1.0, 1.0});

}  // namespace dicer
