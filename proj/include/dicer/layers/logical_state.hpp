#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "dicer/layers/event.hpp"
#include "dicer/sim/motion_sim.hpp"

namespace dicer {

struct LayerConfig {
  int bl_period_ticks = 1;
  int ll_period_ticks = 2;
  int dl_period_ticks = 10;
  int pl_period_ticks = 1;
  double spindle_feedback_timeout_s = 0.2;
  double vacuum_min_kpa = -60.0;
  double vacuum_settle_s = 0.5;
  double coolant_timeout_s = 0.2;
  // The basic layer samples DAQ, vision and network only every n-th cycle.
  int daq_sample_divisor = 1;
  int vision_sample_divisor = 1;
  int net_sample_divisor = 1;
  std::array<bool, 2> live_channels{true, true};
  double report_period_s = 60.0;
  std::string product_id = "WFR-300";

  void validate() const;
};

struct LogicalState {
  std::array<bool, kAxisCount> axis_sw_lim{};
  std::array<bool, kAxisCount> axis_hw_lim{};
  std::array<bool, kAxisCount> drive_fault{};
  bool emergency = false;
  bool spindle_error = false;
  bool blade_error = false;
  bool vacuum_error = false;
  bool coolant_error = false;
  bool vision_error = false;

  bool sal = false;
  bool vacuum_demand = false;
  bool coolant_demand = false;
  double vacuum_pressure_kpa = 0.0;

  std::vector<EventMessage> outbox;

  // sw_limit_0..3, hw_limit_0..3, drive_fault_0..3, emergency, spindle_error,
  // blade_error, vacuum_error, coolant_error, vision_error
  static const std::vector<std::string>& error_codes();

  bool* flag(std::string_view code);
  const bool* flag(std::string_view code) const;
  bool any_error() const;
  std::vector<std::string> latched() const;
};

// 0 V is ambient, 10 V full vacuum. Out-of-range input is clamped.
double volts_to_pressure(double volts, bool* clamped = nullptr);

}  // namespace dicer
