#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dicer/layers/logical_state.hpp"
#include "dicer/ve/vde.hpp"
#include "dicer/ve/vme.hpp"
#include "dicer/ve/vve.hpp"

namespace dicer {

struct SafetyAction {
  std::uint64_t tick = 0;
  std::string code;
  std::string action;
};

// Machine rules: limits, drive faults, emergency stop, spindle/blade, vacuum,
// coolant and vision. Errors latch until cleared; outputs stay interlocked
// while their error is latched.
class LogicLayer {
 public:
  LogicLayer(const LayerConfig& config, double tick_s);

  void cycle(LogicalState& ls, Vme& vme, Vde& vde, const Vve& vve, std::uint64_t tick,
             std::vector<SafetyAction>& actions);

 private:
  bool held(std::optional<std::uint64_t>& since, bool condition, std::uint64_t tick, double seconds) const;

  LayerConfig config_;
  double tick_s_;
  std::optional<std::uint64_t> spindle_mismatch_since_;
  std::optional<std::uint64_t> coolant_mismatch_since_;
  std::optional<std::uint64_t> vacuum_demand_since_;
  std::uint64_t seen_not_found_ = 0;
  bool pressure_clamped_ = false;
};

}  // namespace dicer
