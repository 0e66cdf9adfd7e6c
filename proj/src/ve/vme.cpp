#include "dicer/ve/vme.hpp"

#include <cmath>
#include <stdexcept>

namespace dicer {

AxisStatus decode_axis(const MotionReading& r, std::uint64_t tick) {
  const MotionFlags f = decode_status(r.word);
  AxisStatus s;
  s.pos = r.position;
  s.vel = r.velocity;
  s.err = r.following_error;
  s.hom_lim = f.home_limit;
  s.hw_lim_n = f.hw_lim_neg;
  s.sw_lim_n = f.sw_lim_neg;
  s.hw_lim_p = f.hw_lim_pos;
  s.sw_lim_p = f.sw_lim_pos;
  s.moving = f.moving;
  s.decel = f.decel;
  s.stall = f.stall;
  s.drv_fault = f.drive_fault;
  s.in_position = f.in_position;
  s.cmd_error = f.cmd_error;
  s.emergency = f.emergency;
  s.raw = r.word;
  s.last_update_tick = tick;
  return s;
}

Vme::Vme(PhysicalEquipment& pe, CommandPolicy policy) : pe_(pe), policy_(policy) {}

void Vme::check_axis(std::size_t axis) const {
  if (axis >= kAxisCount) throw std::out_of_range("axis index out of range");
}

void Vme::update_status() {
  const std::uint64_t tick = pe_.tick();
  for (std::size_t a = 0; a < kAxisCount; ++a) status_[a] = decode_axis(pe_.pe_motion_read_status(a), tick);
  for (std::size_t a = 0; a < kAxisCount; ++a) {
    if (!queue_[a].empty() && !busy(a) && status_[a].in_position) {
      const MotionProfileSpec next = queue_[a].front();
      queue_[a].pop_front();
      dispatch(a, next);
    }
  }
}

bool Vme::busy(std::size_t axis) const {
  const auto& act = activity_.at(axis);
  if (!act.active) return false;
  const auto& s = status_[axis];
  return !(s.last_update_tick > act.issued_tick && !s.moving);
}

CommandAck Vme::dispatch(std::size_t axis, const MotionProfileSpec& spec) {
  CommandAck ack = pe_.pe_motion_command(axis, spec);
  activity_[axis] = {ack.accepted, pe_.tick()};
  return ack;
}

CommandAck Vme::command(std::size_t axis, const MotionProfileSpec& spec) {
  check_axis(axis);
  if (!spec.valid()) return CommandAck::rejected("invalid profile parameters");
  if (spec.is_stop()) {
    queue_[axis].clear();
    return dispatch(axis, spec);
  }
  if (busy(axis) || !queue_[axis].empty()) {
    if (policy_ == CommandPolicy::reject_while_busy) return CommandAck::rejected("busy");
    queue_[axis].push_back(spec);
    return CommandAck::ok();
  }
  return dispatch(axis, spec);
}

CommandAck Vme::smove(std::size_t axis, double p, double v, double a1, double a2, double j1, double j2) {
  return command(axis, MotionProfileSpec::scurve(p, v, a1, a2, j1, j2));
}

CommandAck Vme::tmove(std::size_t axis, double p, double v, double a1, double a2) {
  return command(axis, MotionProfileSpec::trapezoid(p, v, a1, a2));
}

CommandAck Vme::sjog(std::size_t axis, double v, double a, double) {
  return command(axis, MotionProfileSpec::jog(v < 0.0 ? -1 : 1, std::abs(v), a, a));
}

CommandAck Vme::tjog(std::size_t axis, double v, double a) {
  return command(axis, MotionProfileSpec::jog(v < 0.0 ? -1 : 1, std::abs(v), a, a));
}

CommandAck Vme::shome(std::size_t axis, int mode, double v, double v2, double v3, double a1, double a2, double j1,
                      double j2) {
  return command(axis, MotionProfileSpec::home(mode, v, v2, v3, a1, a2, j1, j2));
}

CommandAck Vme::thome(std::size_t axis, int mode, double v, double vb, double vf, double a1, double a2) {
  return command(axis, MotionProfileSpec::home(mode, v, vb, vf, a1, a2));
}

CommandAck Vme::stop(std::size_t axis) {
  check_axis(axis);
  return command(axis, MotionProfileSpec::stop(pe_.config().axes[axis].a_max));
}

CommandAck Vme::estop(std::size_t axis) { return command(axis, MotionProfileSpec::halt()); }

}  // namespace dicer
