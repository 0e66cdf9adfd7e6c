#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>

#include "dicer/sim/profile.hpp"
#include "dicer/sim/status_word.hpp"

namespace dicer {

enum class Axis : std::size_t { x = 0, y = 1, z = 2, theta = 3 };
inline constexpr std::size_t kAxisCount = 4;

inline constexpr std::size_t index(Axis a) { return static_cast<std::size_t>(a); }
const char* axis_name(std::size_t axis);

struct AxisConfig {
  double sw_lim_neg = -100.0;
  double sw_lim_pos = 100.0;
  double hw_lim_neg = -105.0;
  double hw_lim_pos = 105.0;
  double v_max = 100.0;   // default commanded speed
  double a_max = 1000.0;  // default acceleration and deceleration
  double jerk = 20000.0;  // default S-curve jerk
  double home_switch_width = 0.05;
  double servo_lag_s = 0.001;  // following error = velocity * lag
  double initial_position = 0.0;
};

struct CommandAck {
  bool accepted = false;
  std::string reason;
  static CommandAck ok() { return {true, {}}; }
  static CommandAck rejected(std::string why) { return {false, std::move(why)}; }
};

struct MotionReading {
  RawStatusWord word = 0;
  double position = 0.0;
  double velocity = 0.0;
  double following_error = 0.0;
};

/// One simulated servo axis of the motion controller.
class AxisSim {
 public:
  enum class Mode { idle, point_to_point, ramp, homing };

  explicit AxisSim(const AxisConfig& config);

  CommandAck command(const MotionProfileSpec& spec);
  void step(double dt);
  MotionReading read() const;
  MotionFlags flags() const;

  // Harness-side fault injection; not accesses.
  void set_emergency(bool on);
  void set_drive_fault(bool on);
  void set_stall(bool on) { stall_ = on; }

  const AxisConfig& config() const { return config_; }
  double position() const { return position_; }
  double velocity() const { return velocity_; }
  bool homed() const { return homed_; }
  Mode mode() const { return mode_; }
  bool emergency() const { return emergency_; }
  bool drive_fault() const { return drive_fault_; }

 private:
  CommandAck reject(std::string why);
  void halt();
  void step_ramp(double dt);
  void clamp_to_hw_limits();

  AxisConfig config_;
  Mode mode_ = Mode::idle;
  double position_;
  double velocity_ = 0.0;
  double accel_ = 0.0;
  bool homed_ = false;
  bool emergency_ = false;
  bool drive_fault_ = false;
  bool stall_ = false;
  bool cmd_error_ = false;

  std::optional<PointToPointProfile> profile_;
  std::optional<HomingProfile> homing_;
  double elapsed_ = 0.0;

  double ramp_target_ = 0.0;
  double ramp_up_ = 0.0;
  double ramp_down_ = 0.0;
};

/// The four-axis motion controller board (X, Y, Z, Theta).
class MotionControllerSim {
 public:
  explicit MotionControllerSim(const std::array<AxisConfig, kAxisCount>& axes);

  AxisSim& axis(std::size_t i) { return axes_.at(i); }
  const AxisSim& axis(std::size_t i) const { return axes_.at(i); }

  void step(double dt);
  /// The hardware e-stop line; shared by all axes.
  void set_emergency(bool on);

 private:
  std::array<AxisSim, kAxisCount> axes_;
};

}  // namespace dicer
