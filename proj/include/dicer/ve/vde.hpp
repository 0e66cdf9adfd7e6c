#pragma once

#include <cstdint>
#include <vector>

#include "dicer/sim/equipment.hpp"

namespace dicer {

struct DaqStatus {
  std::vector<bool> di;
  std::vector<bool> do_;
  std::vector<double> ai;
  std::vector<double> ao;
  std::uint64_t last_update_tick = 0;
};

// Virtual DAQ equipment. Refresh samples the monitored DI and AI ports; the
// setters write through and mirror at once.
class Vde {
 public:
  explicit Vde(PhysicalEquipment& pe, std::vector<int> monitored_di = {0, 1, 2, 3, 4, 5, 6, 7},
               std::vector<int> monitored_ai = {port::ai_vacuum, port::ai_spindle_load});

  void refresh();
  void set_do(int port, bool value);
  void set_ao(int port, double volts);

  const DaqStatus& status() const { return status_; }
  bool di(int p) const { return status_.di.at(static_cast<std::size_t>(p)); }
  bool do_(int p) const { return status_.do_.at(static_cast<std::size_t>(p)); }
  double ai(int p) const { return status_.ai.at(static_cast<std::size_t>(p)); }
  double ao(int p) const { return status_.ao.at(static_cast<std::size_t>(p)); }

  std::size_t reads_per_refresh() const { return monitored_di_.size() + monitored_ai_.size(); }
  const std::vector<int>& monitored_di() const { return monitored_di_; }

 private:
  PhysicalEquipment& pe_;
  std::vector<int> monitored_di_;
  std::vector<int> monitored_ai_;
  DaqStatus status_;
};

}  // namespace dicer
