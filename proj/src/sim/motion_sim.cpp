#include "dicer/sim/motion_sim.hpp"

#include <cmath>

namespace dicer {

const char* axis_name(std::size_t axis) {
  static constexpr const char* names[kAxisCount] = {"X", "Y", "Z", "T"};
  return axis < kAxisCount ? names[axis] : "?";
}

AxisSim::AxisSim(const AxisConfig& config) : config_(config), position_(config.initial_position) {}

CommandAck AxisSim::reject(std::string why) {
  cmd_error_ = true;
  return CommandAck::rejected(std::move(why));
}

void AxisSim::halt() {
  mode_ = Mode::idle;
  velocity_ = 0.0;
  accel_ = 0.0;
  profile_.reset();
  homing_.reset();
}

CommandAck AxisSim::command(const MotionProfileSpec& spec) {
  if (!spec.valid()) return reject("invalid profile parameters");

  if (spec.is_stop()) {
    cmd_error_ = false;
    if (spec.immediate || mode_ == Mode::idle || velocity_ == 0.0) {
      halt();
    } else {
      mode_ = Mode::ramp;
      profile_.reset();
      homing_.reset();
      ramp_target_ = 0.0;
      ramp_down_ = spec.a2;
      ramp_up_ = spec.a2;
    }
    return CommandAck::ok();
  }

  if (emergency_ && spec.kind != ProfileKind::home) return reject("emergency active");
  if (drive_fault_) return reject("drive fault");

  switch (spec.kind) {
    case ProfileKind::trapezoidal:
    case ProfileKind::scurve: {
      if (spec.target > config_.sw_lim_pos || spec.target < config_.sw_lim_neg) {
        return reject("target outside software limits");
      }
      if (velocity_ != 0.0 || mode_ == Mode::homing) return reject("axis moving");
      profile_.emplace(spec, position_);
      homing_.reset();
      elapsed_ = 0.0;
      mode_ = Mode::point_to_point;
      cmd_error_ = false;
      if (profile_->duration() == 0.0) halt();
      return CommandAck::ok();
    }
    case ProfileKind::jog: {
      if (mode_ == Mode::homing) return reject("axis homing");
      profile_.reset();
      mode_ = Mode::ramp;
      ramp_target_ = spec.direction * spec.v;
      ramp_up_ = spec.a1;
      ramp_down_ = spec.a2;
      cmd_error_ = false;
      return CommandAck::ok();
    }
    case ProfileKind::home: {
      if (velocity_ != 0.0) return reject("axis moving");
      homing_.emplace(spec, position_);
      profile_.reset();
      elapsed_ = 0.0;
      mode_ = Mode::homing;
      homed_ = false;
      cmd_error_ = false;
      return CommandAck::ok();
    }
  }
  return reject("unsupported command");
}

void AxisSim::step_ramp(double dt) {
  double remaining = dt;
  while (remaining > 0.0) {
    const double v0 = velocity_;
    double goal = ramp_target_;
    // Reversal passes through rest first.
    if (v0 != 0.0 && goal != 0.0 && std::signbit(v0) != std::signbit(goal)) goal = 0.0;
    if (v0 == goal) {
      position_ += v0 * remaining;
      accel_ = 0.0;
      break;
    }
    const bool speeding_up = std::abs(goal) > std::abs(v0);
    const double rate = speeding_up ? ramp_up_ : ramp_down_;
    const double dir = goal > v0 ? 1.0 : -1.0;
    const double t_reach = std::abs(goal - v0) / rate;
    accel_ = dir * rate;
    if (t_reach <= remaining) {
      position_ += 0.5 * (v0 + goal) * t_reach;
      velocity_ = goal;
      remaining -= t_reach;
    } else {
      const double v1 = v0 + dir * rate * remaining;
      position_ += 0.5 * (v0 + v1) * remaining;
      velocity_ = v1;
      remaining = 0.0;
    }
  }
  if (ramp_target_ == 0.0 && velocity_ == 0.0) halt();
}

void AxisSim::clamp_to_hw_limits() {
  if (position_ >= config_.hw_lim_pos) {
    position_ = config_.hw_lim_pos;
    halt();
  } else if (position_ <= config_.hw_lim_neg) {
    position_ = config_.hw_lim_neg;
    halt();
  }
}

void AxisSim::step(double dt) {
  if (dt <= 0.0) return;
  switch (mode_) {
    case Mode::idle:
      accel_ = 0.0;
      return;
    case Mode::point_to_point: {
      elapsed_ += dt;
      const ProfileSample s = profile_->at(elapsed_);
      position_ = s.position;
      velocity_ = s.velocity;
      accel_ = s.acceleration;
      if (s.done) halt();
      break;
    }
    case Mode::homing: {
      elapsed_ += dt;
      const ProfileSample s = homing_->at(elapsed_);
      position_ = s.position;
      velocity_ = s.velocity;
      accel_ = s.acceleration;
      if (s.done) {
        position_ = 0.0;
        homed_ = true;
        halt();
      }
      break;
    }
    case Mode::ramp:
      step_ramp(dt);
      break;
  }
  clamp_to_hw_limits();
}

MotionFlags AxisSim::flags() const {
  MotionFlags f;
  f.home_limit = std::abs(position_) <= config_.home_switch_width;
  f.hw_lim_neg = position_ <= config_.hw_lim_neg;
  f.hw_lim_pos = position_ >= config_.hw_lim_pos;
  f.sw_lim_neg = position_ < config_.sw_lim_neg;
  f.sw_lim_pos = position_ > config_.sw_lim_pos;
  f.moving = mode_ != Mode::idle;
  f.decel = f.moving && accel_ * velocity_ < 0.0;
  f.stall = stall_;
  f.drive_fault = drive_fault_;
  f.in_position = mode_ == Mode::idle && !emergency_ && !drive_fault_;
  f.cmd_error = cmd_error_;
  f.emergency = emergency_;
  return f;
}

MotionReading AxisSim::read() const {
  return {encode_status(flags()), position_, velocity_, velocity_ * config_.servo_lag_s};
}

void AxisSim::set_emergency(bool on) {
  emergency_ = on;
  if (on) halt();
}

void AxisSim::set_drive_fault(bool on) {
  drive_fault_ = on;
  if (on) halt();
}

MotionControllerSim::MotionControllerSim(const std::array<AxisConfig, kAxisCount>& axes)
    : axes_{AxisSim(axes[0]), AxisSim(axes[1]), AxisSim(axes[2]), AxisSim(axes[3])} {}

void MotionControllerSim::step(double dt) {
  for (auto& a : axes_) a.step(dt);
}

void MotionControllerSim::set_emergency(bool on) {
  for (auto& a : axes_) a.set_emergency(on);
}

}  // namespace dicer
