#include "dicer/bench/workload.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dicer {

const char* to_string(ArchitectureMode m) { return m == ArchitectureMode::typical ? "typical" : "proposed"; }

ArchitectureMode parse_mode(const std::string& s) {
  if (s == "typical") return ArchitectureMode::typical;
  if (s == "proposed") return ArchitectureMode::proposed;
  throw std::invalid_argument("unknown architecture '" + s + "'");
}

void to_json(nlohmann::json& j, const Misalignment& m) {
  j = nlohmann::json{{"dx", m.dx}, {"dy", m.dy}, {"dtheta_deg", m.dtheta_deg}};
}
void from_json(const nlohmann::json& j, Misalignment& m) {
  m.dx = j.value("dx", m.dx);
  m.dy = j.value("dy", m.dy);
  m.dtheta_deg = j.value("dtheta_deg", m.dtheta_deg);
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(WindowSpec, name, period_ticks, motion_reads, di_reads, do_reads,
                                                live_vision)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(WorkloadSpec, live_channels, signals_per_axis, axes, monitored_di,
                                                driven_do, alignment_steps, cut_steps, error_monitors, windows,
                                                motion_monitor_period_ticks, motion_monitor_reads,
                                                io_monitor_period_ticks, io_monitor_reads, net_poll_period_ticks,
                                                daq_sample_divisor, vision_sample_divisor, net_sample_divisor,
                                                verify_kerf, misalignment, recipe, max_ticks)

void WorkloadSpec::validate() const {
  recipe.validate();
  if (live_channels < 0 || live_channels > 2) throw std::invalid_argument("workload: live_channels must be 0..2");
  if (axes != 4) throw std::invalid_argument("workload: the machine has 4 axes");
  if (monitored_di < 0 || monitored_di > 8) throw std::invalid_argument("workload: monitored_di must be 0..8");
  if (driven_do < 0 || driven_do > 5) throw std::invalid_argument("workload: driven_do must be 0..5");
  if (cut_steps != recipe.lines_x + recipe.lines_y) {
    throw std::invalid_argument("workload: cut_steps does not match the recipe line count");
  }
  if (alignment_steps != 24) throw std::invalid_argument("workload: the alignment script has 24 steps");
  for (const auto& w : windows) {
    if (w.period_ticks < 1 || w.motion_reads < 0 || w.di_reads < 0 || w.do_reads < 0) {
      throw std::invalid_argument("workload: bad window " + w.name);
    }
  }
  if (motion_monitor_period_ticks < 1 || io_monitor_period_ticks < 1 || net_poll_period_ticks < 1 ||
      daq_sample_divisor < 1 || vision_sample_divisor < 1 || net_sample_divisor < 1) {
    throw std::invalid_argument("workload: periods and divisors must be at least 1");
  }
  if (motion_monitor_reads < 0 || io_monitor_reads < 0) throw std::invalid_argument("workload: negative reads");
  if (max_ticks == 0) throw std::invalid_argument("workload: max_ticks must be positive");
}

nlohmann::json workload_to_json(const WorkloadSpec& w) { return w; }

WorkloadSpec parse_workload(const std::string& text) {
  WorkloadSpec w = nlohmann::json::parse(text).get<WorkloadSpec>();
  w.validate();
  return w;
}

WorkloadSpec load_workload(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open workload " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_workload(ss.str());
}

}  // namespace dicer
