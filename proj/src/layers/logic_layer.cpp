#include "dicer/layers/logic_layer.hpp"

namespace dicer {

LogicLayer::LogicLayer(const LayerConfig& config, double tick_s) : config_(config), tick_s_(tick_s) {}

bool LogicLayer::held(std::optional<std::uint64_t>& since, bool condition, std::uint64_t tick, double seconds) const {
  if (!condition) {
    since.reset();
    return false;
  }
  if (!since) since = tick;
  return static_cast<double>(tick - *since) * tick_s_ + 1e-9 >= seconds;
}

void LogicLayer::cycle(LogicalState& ls, Vme& vme, Vde& vde, const Vve& vve, std::uint64_t tick,
                       std::vector<SafetyAction>& actions) {
  auto latch = [&](bool& f, const std::string& code, const std::string& text) {
    f = true;
    ls.outbox.push_back({tick, Severity::error, code, text});
  };
  auto act = [&](const std::string& code, const std::string& what) { actions.push_back({tick, code, what}); };
  auto output_off = [&](int p, const std::string& code, const char* name) {
    if (!vde.do_(p)) return;
    vde.set_do(p, false);
    act(code, std::string(name) + " off");
  };

  for (std::size_t a = 0; a < kAxisCount; ++a) {
    const AxisStatus& st = vme.status(a);
    const std::string n = std::to_string(a);

    const bool sw = st.sw_lim_n || st.sw_lim_p;
    if (sw && !ls.axis_sw_lim[a]) {
      latch(ls.axis_sw_lim[a], "sw_limit_" + n,
            std::string(st.sw_lim_p ? "positive" : "negative") + " software limit on axis " + axis_name(a));
      vme.stop(a);
      act("sw_limit_" + n, std::string("stop axis ") + axis_name(a));
    } else if (sw) {
      const bool toward = (st.sw_lim_p && st.vel > 0.0) || (st.sw_lim_n && st.vel < 0.0);
      if (toward && !st.decel) {
        vme.stop(a);
        act("sw_limit_" + n, std::string("stop axis ") + axis_name(a));
      }
    }

    if ((st.hw_lim_n || st.hw_lim_p) && !ls.axis_hw_lim[a]) {
      latch(ls.axis_hw_lim[a], "hw_limit_" + n, std::string("hardware limit on axis ") + axis_name(a));
      vme.estop(a);
      act("hw_limit_" + n, std::string("halt axis ") + axis_name(a));
    }

    if (st.drv_fault && !ls.drive_fault[a]) {
      latch(ls.drive_fault[a], "drive_fault_" + n, std::string("drive fault on axis ") + axis_name(a));
      vme.estop(a);
      act("drive_fault_" + n, std::string("halt axis ") + axis_name(a));
    }
  }

  bool estop = vde.di(port::di_estop);
  for (const auto& st : vme.axes()) estop = estop || st.emergency;
  if (estop && !ls.emergency) {
    latch(ls.emergency, "emergency", "emergency stop");
    for (std::size_t a = 0; a < kAxisCount; ++a) vme.estop(a);
    act("emergency", "halt all axes");
    output_off(port::do_spindle, "emergency", "spindle");
    output_off(port::do_coolant, "emergency", "coolant");
  }

  ls.sal = vde.do_(port::do_spindle) && !ls.spindle_error;
  if (held(spindle_mismatch_since_, ls.sal && !vde.di(port::di_spindle_running), tick,
           config_.spindle_feedback_timeout_s)) {
    latch(ls.spindle_error, "spindle_error", "spindle feedback missing");
    output_off(port::do_spindle, "spindle_error", "spindle");
    ls.sal = false;
    spindle_mismatch_since_.reset();
  }

  if (vde.di(port::di_blade_broken) && !ls.blade_error) {
    latch(ls.blade_error, "blade_error", "blade broken");
    output_off(port::do_spindle, "blade_error", "spindle");
  }

  bool clamped = false;
  ls.vacuum_pressure_kpa = volts_to_pressure(vde.ai(port::ai_vacuum), &clamped);
  if (clamped && !pressure_clamped_) {
    ls.outbox.push_back({tick, Severity::warn, "pressure_range", "vacuum sensor voltage out of range"});
  }
  pressure_clamped_ = clamped;
  ls.vacuum_demand = vde.do_(port::do_vacuum);
  if (held(vacuum_demand_since_, ls.vacuum_demand, tick, config_.vacuum_settle_s) &&
      ls.vacuum_pressure_kpa > config_.vacuum_min_kpa && !ls.vacuum_error) {
    latch(ls.vacuum_error, "vacuum_error", "chuck vacuum below minimum");
    output_off(port::do_vacuum, "vacuum_error", "vacuum");
  }

  ls.coolant_demand = vde.do_(port::do_coolant);
  if (held(coolant_mismatch_since_, ls.coolant_demand && !vde.di(port::di_coolant_flow), tick,
           config_.coolant_timeout_s) &&
      !ls.coolant_error) {
    latch(ls.coolant_error, "coolant_error", "coolant flow missing");
    output_off(port::do_coolant, "coolant_error", "coolant");
    coolant_mismatch_since_.reset();
  }

  const std::uint64_t nf = vve.not_found_total();
  if (nf > seen_not_found_ && !ls.vision_error) latch(ls.vision_error, "vision_error", "pattern not found");
  seen_not_found_ = nf;

  // Interlocks hold while the error stays latched.
  if (ls.spindle_error || ls.blade_error || ls.emergency) output_off(port::do_spindle, "interlock", "spindle");
  if (ls.vacuum_error) output_off(port::do_vacuum, "interlock", "vacuum");
  if (ls.coolant_error || ls.emergency) output_off(port::do_coolant, "interlock", "coolant");
  ls.sal = vde.do_(port::do_spindle) && !ls.spindle_error;
}

}  // namespace dicer
