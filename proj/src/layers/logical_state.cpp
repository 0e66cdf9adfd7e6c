#include "dicer/layers/logical_state.hpp"

#include <algorithm>
#include <stdexcept>

namespace dicer {

void LayerConfig::validate() const {
  if (bl_period_ticks < 1 || ll_period_ticks < 1 || dl_period_ticks < 1 || pl_period_ticks < 1) {
    throw std::invalid_argument("layer periods must be at least one tick");
  }
  if (daq_sample_divisor < 1 || vision_sample_divisor < 1 || net_sample_divisor < 1) {
    throw std::invalid_argument("sampling divisors must be at least 1");
  }
}

const std::vector<std::string>& LogicalState::error_codes() {
  static const std::vector<std::string> codes = [] {
    std::vector<std::string> c;
    for (const char* stem : {"sw_limit_", "hw_limit_", "drive_fault_"}) {
      for (std::size_t a = 0; a < kAxisCount; ++a) c.push_back(stem + std::to_string(a));
    }
    for (const char* s : {"emergency", "spindle_error", "blade_error", "vacuum_error", "coolant_error", "vision_error"}) {
      c.push_back(s);
    }
    return c;
  }();
  return codes;
}

bool* LogicalState::flag(std::string_view code) {
  return const_cast<bool*>(static_cast<const LogicalState*>(this)->flag(code));
}

const bool* LogicalState::flag(std::string_view code) const {
  auto axis_flag = [&](std::string_view stem, const std::array<bool, kAxisCount>& arr) -> const bool* {
    if (code.size() != stem.size() + 1 || code.substr(0, stem.size()) != stem) return nullptr;
    const char d = code.back();
    if (d < '0' || d >= static_cast<char>('0' + kAxisCount)) return nullptr;
    return &arr[static_cast<std::size_t>(d - '0')];
  };
  if (auto p = axis_flag("sw_limit_", axis_sw_lim)) return p;
  if (auto p = axis_flag("hw_limit_", axis_hw_lim)) return p;
  if (auto p = axis_flag("drive_fault_", drive_fault)) return p;
  if (code == "emergency") return &emergency;
  if (code == "spindle_error") return &spindle_error;
  if (code == "blade_error") return &blade_error;
  if (code == "vacuum_error") return &vacuum_error;
  if (code == "coolant_error") return &coolant_error;
  if (code == "vision_error") return &vision_error;
  return nullptr;
}

bool LogicalState::any_error() const {
  for (const auto& c : error_codes()) {
    if (*flag(c)) return true;
  }
  return false;
}

std::vector<std::string> LogicalState::latched() const {
  std::vector<std::string> out;
  for (const auto& c : error_codes()) {
    if (*flag(c)) out.push_back(c);
  }
  return out;
}

double volts_to_pressure(double volts, bool* clamped) {
  const double v = std::clamp(volts, 0.0, 10.0);
  if (clamped) *clamped = v != volts;
  return -10.0 * v;
}

}  // namespace dicer
