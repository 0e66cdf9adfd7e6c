#include "dicer/sim/daq_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dicer {

namespace {
constexpr double kTimeEps = 1e-9;
}

const char* to_string(IoKind k) {
  switch (k) {
    case IoKind::di: return "di";
    case IoKind::do_: return "do";
    case IoKind::ai: return "ai";
    case IoKind::ao: return "ao";
  }
  return "?";
}

DaqSim::DaqSim(const PlantConfig& plant) : plant_(plant) {
  bank_.di.assign(static_cast<std::size_t>(plant.di_count), false);
  bank_.do_.assign(static_cast<std::size_t>(plant.do_count), false);
  bank_.ai.assign(static_cast<std::size_t>(plant.ai_count), 0.0);
  bank_.ao.assign(static_cast<std::size_t>(plant.ao_count), 0.0);
}

void DaqSim::check(IoKind kind, int port) const {
  std::size_t size = 0;
  switch (kind) {
    case IoKind::di: size = bank_.di.size(); break;
    case IoKind::do_: size = bank_.do_.size(); break;
    case IoKind::ai: size = bank_.ai.size(); break;
    case IoKind::ao: size = bank_.ao.size(); break;
  }
  if (port < 0 || static_cast<std::size_t>(port) >= size) {
    throw std::out_of_range(std::string(to_string(kind)) + " port " + std::to_string(port) + " out of range");
  }
}

bool DaqSim::read_di(int p) const {
  check(IoKind::di, p);
  return bank_.di[static_cast<std::size_t>(p)];
}

bool DaqSim::read_do(int p) const {
  check(IoKind::do_, p);
  return bank_.do_[static_cast<std::size_t>(p)];
}

double DaqSim::read_ai(int p) const {
  check(IoKind::ai, p);
  return bank_.ai[static_cast<std::size_t>(p)];
}

double DaqSim::read_ao(int p) const {
  check(IoKind::ao, p);
  return bank_.ao[static_cast<std::size_t>(p)];
}

void DaqSim::write_do(int p, bool value) {
  check(IoKind::do_, p);
  bank_.do_[static_cast<std::size_t>(p)] = value;
  if (p == port::do_spindle && !value) spindle_on_s_ = 0.0;
  if (p == port::do_coolant && !value) coolant_on_s_ = 0.0;
  update_inputs();
}

void DaqSim::write_ao(int p, double volts) {
  check(IoKind::ao, p);
  bank_.ao[static_cast<std::size_t>(p)] = volts;
}

void DaqSim::set_blade_broken(bool b) {
  bank_.di[port::di_blade_broken] = b;
}

void DaqSim::set_estop_button(bool pressed) { bank_.di[port::di_estop] = pressed; }
void DaqSim::set_door_open(bool open) { bank_.di[port::di_door_open] = open; }
void DaqSim::set_air_low(bool low) { bank_.di[port::di_air_low] = low; }

void DaqSim::update_inputs() {
  const auto& d = bank_.do_;
  bank_.di[port::di_spindle_running] =
      d[port::do_spindle] && !spindle_failed_ && spindle_on_s_ + kTimeEps >= plant_.spindle_feedback_delay_s;
  bank_.di[port::di_coolant_flow] =
      d[port::do_coolant] && !coolant_blocked_ && coolant_on_s_ + kTimeEps >= plant_.coolant_flow_delay_s;
  bank_.di[port::di_vacuum_ok] = bank_.ai[port::ai_vacuum] >= plant_.vacuum_ok_v;
  bank_.di[port::di_lamp_ok] = d[port::do_lamp];
  bank_.ai[port::ai_spindle_load] = bank_.di[port::di_spindle_running] ? plant_.spindle_load_v : 0.0;
}

void DaqSim::step(double dt) {
  if (dt <= 0.0) return;
  const auto& d = bank_.do_;
  if (d[port::do_spindle]) spindle_on_s_ += dt;
  if (d[port::do_coolant]) coolant_on_s_ += dt;

  double goal = 0.0;
  if (d[port::do_vacuum]) goal = vacuum_leak_ ? plant_.vacuum_leak_v : plant_.vacuum_full_scale_v;
  double& v = bank_.ai[port::ai_vacuum];
  v = goal + (v - goal) * std::exp(-dt / plant_.vacuum_tau_s);
  update_inputs();
}

}  // namespace dicer
