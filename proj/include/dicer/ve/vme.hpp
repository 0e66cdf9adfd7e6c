#pragma once

#include <array>
#include <cstdint>
#include <deque>

#include "dicer/sim/equipment.hpp"

namespace dicer {

enum class CommandPolicy { queue, reject_while_busy };

// Status flags of one axis, mirroring the motion controller's member variables.
struct AxisStatus {
  double pos = 0.0;
  double vel = 0.0;
  double err = 0.0;
  bool hom_lim = false;
  bool hw_lim_n = false;
  bool sw_lim_n = false;
  bool hw_lim_p = false;
  bool sw_lim_p = false;
  bool moving = false;
  bool decel = false;
  bool stall = false;
  bool drv_fault = false;
  bool in_position = false;
  bool cmd_error = false;
  bool emergency = false;
  RawStatusWord raw = 0;
  std::uint64_t last_update_tick = 0;

  bool operator==(const AxisStatus&) const = default;
};

AxisStatus decode_axis(const MotionReading& r, std::uint64_t tick);

// Virtual motion equipment.
class Vme {
 public:
  explicit Vme(PhysicalEquipment& pe, CommandPolicy policy = CommandPolicy::reject_while_busy);

  // One status read per axis; dispatches queued commands of idle axes.
  void update_status();

  const AxisStatus& status(std::size_t axis) const { return status_.at(axis); }
  const std::array<AxisStatus, kAxisCount>& axes() const { return status_; }

  CommandAck smove(std::size_t axis, double p, double v, double a1, double a2, double j1, double j2);
  CommandAck tmove(std::size_t axis, double p, double v, double a1, double a2);
  CommandAck sjog(std::size_t axis, double v, double a, double j);
  CommandAck tjog(std::size_t axis, double v, double a);
  CommandAck shome(std::size_t axis, int mode, double v, double v2, double v3, double a1, double a2, double j1,
                   double j2);
  CommandAck thome(std::size_t axis, int mode, double v, double vb, double vf, double a1, double a2);
  CommandAck stop(std::size_t axis);
  CommandAck estop(std::size_t axis);
  CommandAck command(std::size_t axis, const MotionProfileSpec& spec);

  // A command was issued and the flags have not yet shown it finished.
  bool busy(std::size_t axis) const;
  std::size_t queued(std::size_t axis) const { return queue_.at(axis).size(); }

  CommandPolicy policy() const { return policy_; }
  void set_policy(CommandPolicy p) { policy_ = p; }

 private:
  struct Activity {
    bool active = false;
    std::uint64_t issued_tick = 0;
  };

  CommandAck dispatch(std::size_t axis, const MotionProfileSpec& spec);
  void check_axis(std::size_t axis) const;

  PhysicalEquipment& pe_;
  CommandPolicy policy_;
  std::array<AxisStatus, kAxisCount> status_{};
  std::array<Activity, kAxisCount> activity_{};
  std::array<std::deque<MotionProfileSpec>, kAxisCount> queue_{};
};

}  // namespace dicer
