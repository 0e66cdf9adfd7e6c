#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "json.hpp"

#include "dicer/sim/motion_sim.hpp"
#include "dicer/sim/planar.hpp"
#include "dicer/sim/wafer_sim.hpp"

namespace dicer {

struct CameraConfig {
  double station_x = 0.0;  // machine position of the optical axis, mm
  double station_y = 250.0;
  double mm_per_px = 0.05;
  int width = 256;
  int height = 256;
  int template_px = 48;

  Vec2 station() const { return {station_x, station_y}; }
};

struct PlantConfig {
  double spindle_feedback_delay_s = 0.05;
  double coolant_flow_delay_s = 0.02;
  double vacuum_tau_s = 0.1;
  double vacuum_full_scale_v = 8.0;
  double vacuum_leak_v = 3.0;  // level reached with a leaking seal
  double vacuum_ok_v = 6.0;
  double spindle_load_v = 2.0;
  int di_count = 32;
  int do_count = 32;
  int ai_count = 8;
  int ao_count = 8;
};

struct ImageConfig {
  double noise_amplitude = 3.0;
  int supersample = 3;
  std::uint64_t noise_seed = 7;
  double ncc_threshold = 0.7;
};

struct MachineConfig {
  double tick_duration_s = 0.001;
  std::array<AxisConfig, kAxisCount> axes{};
  PlantConfig plant;
  std::array<CameraConfig, 2> cameras{};
  ImageConfig image;
  WaferGeometry wafer;

  static MachineConfig defaults();
};

void to_json(nlohmann::json& j, const MachineConfig& c);
void from_json(const nlohmann::json& j, MachineConfig& c);

// Missing keys take their default values.
MachineConfig load_machine_config(const std::string& path);
MachineConfig parse_machine_config(const std::string& text);

}  // namespace dicer
