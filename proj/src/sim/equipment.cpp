#include "dicer/sim/equipment.hpp"

#include <algorithm>
#include <cmath>

namespace dicer {

namespace {
constexpr double kEdgeMinContrast = 20.0;
}

PhysicalEquipment::PhysicalEquipment(const MachineConfig& config, const Misalignment& misalignment,
                                     std::uint64_t bin_ticks)
    : config_(config),
      ledger_(bin_ticks),
      mc_(config.axes),
      fg_(config.cameras, config.image),
      daq_(config.plant),
      wafer_(config.wafer, misalignment) {
  clock_.tick_duration = config.tick_duration_s;
}

void PhysicalEquipment::count(DeviceClass c) {
  if (forbid_windows_ && ledger_.agents()[agent_].kind == AgentKind::window) {
    throw AccessViolation("window agent '" + ledger_.agents()[agent_].name + "' accessed " +
                          std::string(to_string(c)) + " equipment");
  }
  ledger_.record(c, clock_.tick, agent_);
}

CommandAck PhysicalEquipment::pe_motion_command(std::size_t axis, const MotionProfileSpec& spec) {
  count(DeviceClass::motion);
  return mc_.axis(axis).command(spec);
}

MotionReading PhysicalEquipment::pe_motion_read_status(std::size_t axis) {
  count(DeviceClass::motion);
  return mc_.axis(axis).read();
}

FrameBuffer PhysicalEquipment::pe_fg_capture(int channel) {
  count(DeviceClass::vision);
  return fg_.capture(channel, wafer_, stage(), theta(), clock_.tick);
}

FgStatus PhysicalEquipment::pe_fg_read_status(int channel) {
  count(DeviceClass::vision);
  return fg_.status(channel);
}

PatternMatch PhysicalEquipment::pe_fg_find_pattern(const FrameBuffer& frame, const FrameBuffer& templ) {
  count(DeviceClass::vision);
  return find_pattern(frame, templ, config_.image.ncc_threshold);
}

EdgeResult PhysicalEquipment::pe_fg_find_edge(const FrameBuffer& frame, GrooveAxis axis, double expected_px,
                                              double window_px) {
  count(DeviceClass::vision);
  return find_groove(frame, axis, expected_px, window_px, kEdgeMinContrast);
}

bool PhysicalEquipment::pe_daq_read_di(int p) {
  count(DeviceClass::daq);
  return daq_.read_di(p);
}

bool PhysicalEquipment::pe_daq_read_do(int p) {
  count(DeviceClass::daq);
  return daq_.read_do(p);
}

double PhysicalEquipment::pe_daq_read_ai(int p) {
  count(DeviceClass::daq);
  return daq_.read_ai(p);
}

double PhysicalEquipment::pe_daq_read_ao(int p) {
  count(DeviceClass::daq);
  return daq_.read_ao(p);
}

void PhysicalEquipment::pe_daq_write_do(int p, bool value) {
  count(DeviceClass::daq);
  daq_.write_do(p, value);
}

void PhysicalEquipment::pe_daq_write_ao(int p, double volts) {
  count(DeviceClass::daq);
  daq_.write_ao(p, volts);
}

void PhysicalEquipment::pe_net_send(std::string packet) {
  count(DeviceClass::net);
  net_.send(std::move(packet));
}

NetPoll PhysicalEquipment::pe_net_poll() {
  count(DeviceClass::net);
  return net_.poll();
}

Vec2 PhysicalEquipment::stage() const {
  return {mc_.axis(index(Axis::x)).position(), mc_.axis(index(Axis::y)).position()};
}

double PhysicalEquipment::theta() const { return mc_.axis(index(Axis::theta)).position(); }

Vec2 PhysicalEquipment::blade_on_wafer() const { return wafer_.machine_to_wafer({0.0, 0.0}, stage(), theta()); }

void PhysicalEquipment::track_cut() {
  const double z = mc_.axis(index(Axis::z)).position();
  if (!cutting_) {
    if (z < 0.0) {
      cutting_ = true;
      cut_start_ = blade_on_wafer();
      cut_min_z_ = z;
      cut_max_feed_ = 0.0;
    }
    return;
  }
  if (z < 0.0) {
    cut_min_z_ = std::min(cut_min_z_, z);
    cut_max_feed_ = std::max(cut_max_feed_, std::abs(mc_.axis(index(Axis::x)).velocity()));
    return;
  }
  cutting_ = false;
  const Vec2 end = blade_on_wafer();
  CutRecordEntry e;
  const bool along_x = std::abs(end.x - cut_start_.x) >= std::abs(end.y - cut_start_.y);
  e.direction = along_x ? CutDirection::x_pass : CutDirection::y_pass;
  e.coordinate = along_x ? (cut_start_.y + end.y) / 2.0 : (cut_start_.x + end.x) / 2.0;
  const double a = along_x ? cut_start_.x : cut_start_.y;
  const double b = along_x ? end.x : end.y;
  e.from = std::min(a, b);
  e.to = std::max(a, b);
  e.depth = -cut_min_z_;
  e.feed = cut_max_feed_;
  e.tick = clock_.tick;
  wafer_.append_cut(e);
}

void PhysicalEquipment::step(std::uint64_t n_ticks) {
  const double dt = clock_.tick_duration;
  for (std::uint64_t i = 0; i < n_ticks; ++i) {
    mc_.step(dt);
    daq_.step(dt);
    net_.step();
    clock_.tick++;
    track_cut();
    if (log_trajectory_) {
      TrajectorySample s;
      s.tick = clock_.tick;
      for (std::size_t a = 0; a < kAxisCount; ++a) {
        s.position[a] = mc_.axis(a).position();
        s.velocity[a] = mc_.axis(a).velocity();
      }
      trajectory_.push_back(s);
    }
  }
}

}  // namespace dicer
