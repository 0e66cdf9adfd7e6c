#include "dicer/sim/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dicer {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AxisConfig, sw_lim_neg, sw_lim_pos, hw_lim_neg, hw_lim_pos, v_max,
                                                a_max, jerk, home_switch_width, servo_lag_s, initial_position)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CameraConfig, station_x, station_y, mm_per_px, width, height,
                                                template_px)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PlantConfig, spindle_feedback_delay_s, coolant_flow_delay_s,
                                                vacuum_tau_s, vacuum_full_scale_v, vacuum_leak_v, vacuum_ok_v,
                                                spindle_load_v, di_count, do_count, ai_count, ao_count)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ImageConfig, noise_amplitude, supersample, noise_seed,
                                                ncc_threshold)

void to_json(nlohmann::json& j, const Vec2& v) { j = nlohmann::json::array({v.x, v.y}); }
void from_json(const nlohmann::json& j, Vec2& v) {
  v.x = j.at(0).get<double>();
  v.y = j.at(1).get<double>();
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(WaferGeometry, diameter, fiducial_a, fiducial_b, cross_arm,
                                                cross_half_width, kerf_width)

MachineConfig MachineConfig::defaults() {
  MachineConfig c;
  auto& x = c.axes[index(Axis::x)];
  x = {-200.0, 200.0, -210.0, 210.0, 200.0, 2000.0, 40000.0, 0.05, 0.001, 0.0};
  auto& y = c.axes[index(Axis::y)];
  y = {-120.0, 370.0, -130.0, 380.0, 200.0, 2000.0, 40000.0, 0.05, 0.001, 0.0};
  auto& z = c.axes[index(Axis::z)];
  z = {-2.0, 40.0, -3.0, 45.0, 20.0, 500.0, 10000.0, 0.01, 0.001, 10.0};
  auto& t = c.axes[index(Axis::theta)];
  t = {-200.0, 200.0, -210.0, 210.0, 90.0, 900.0, 18000.0, 0.01, 0.001, 0.0};

  c.cameras[0] = {-40.0, 250.0, 0.1, 256, 256, 24};
  c.cameras[1] = {40.0, 250.0, 0.05, 256, 256, 48};
  return c;
}

void to_json(nlohmann::json& j, const MachineConfig& c) {
  j = nlohmann::json{{"tick_duration_s", c.tick_duration_s},
                     {"axes", c.axes},
                     {"plant", c.plant},
                     {"cameras", c.cameras},
                     {"image", c.image},
                     {"wafer", c.wafer}};
}

void from_json(const nlohmann::json& j, MachineConfig& c) {
  c = MachineConfig::defaults();
  c.tick_duration_s = j.value("tick_duration_s", c.tick_duration_s);
  if (auto it = j.find("axes"); it != j.end()) {
    if (!it->is_array() || it->size() != kAxisCount) throw std::invalid_argument("config: axes needs 4 entries");
    for (std::size_t i = 0; i < kAxisCount; ++i) {
      nlohmann::json merged = c.axes[i];
      merged.update((*it)[i]);
      c.axes[i] = merged.get<AxisConfig>();
    }
  }
  if (auto it = j.find("cameras"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) throw std::invalid_argument("config: cameras needs 2 entries");
    for (std::size_t i = 0; i < 2; ++i) {
      nlohmann::json merged = c.cameras[i];
      merged.update((*it)[i]);
      c.cameras[i] = merged.get<CameraConfig>();
    }
  }
  if (j.contains("plant")) c.plant = j.at("plant").get<PlantConfig>();
  if (j.contains("image")) c.image = j.at("image").get<ImageConfig>();
  if (j.contains("wafer")) c.wafer = j.at("wafer").get<WaferGeometry>();

  if (!(c.tick_duration_s > 0.0)) throw std::invalid_argument("config: tick_duration_s must be positive");
  for (const auto& a : c.axes) {
    if (!(a.hw_lim_neg < a.sw_lim_neg && a.sw_lim_neg < a.sw_lim_pos && a.sw_lim_pos < a.hw_lim_pos)) {
      throw std::invalid_argument("config: hw limits must strictly enclose sw limits");
    }
  }
}

MachineConfig parse_machine_config(const std::string& text) {
  return nlohmann::json::parse(text).get<MachineConfig>();
}

MachineConfig load_machine_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_machine_config(ss.str());
}

}  // namespace dicer
