#include "dicer/bench/typical.hpp"

#include "dicer/layers/logical_state.hpp"
#include "dicer/ve/vne.hpp"

namespace dicer {

namespace {

// Inputs the error monitor watches, in polling order.
constexpr std::array<int, 7> kWatchedDi{port::di_estop,     port::di_blade_broken, port::di_spindle_running,
                                        port::di_coolant_flow, port::di_vacuum_ok, port::di_door_open,
                                        port::di_air_low};
constexpr double kReportPeriodS = 60.0;

bool active(ProcessPhase p) {
  return p == ProcessPhase::aligning || p == ProcessPhase::cutting || p == ProcessPhase::verifying;
}

}  // namespace

DirectIo::DirectIo(PhysicalEquipment& pe, std::map<std::string, FrameBuffer> templates)
    : pe_(pe), templates_(std::move(templates)) {}

CommandAck DirectIo::move(std::size_t axis, double target, double v) {
  const AxisConfig& c = pe_.config().axes[axis];
  issued_[axis] = pe_.tick();
  settled_[axis] = false;
  return pe_.pe_motion_command(axis, MotionProfileSpec::scurve(target, v, c.a_max, c.a_max, c.jerk, c.jerk));
}

bool DirectIo::settled(std::size_t axis) {
  if (settled_[axis]) return true;
  if (pe_.tick() <= issued_[axis] || last_read_tick_ == pe_.tick()) return false;
  last_read_tick_ = pe_.tick();
  const MotionFlags f = decode_status(pe_.pe_motion_read_status(axis).word);
  settled_[axis] = !f.moving && f.in_position;
  return settled_[axis];
}

PatternMatch DirectIo::find(int channel, const std::string& template_id) {
  const FrameBuffer frame = pe_.pe_fg_capture(channel);
  return pe_.pe_fg_find_pattern(frame, templates_.at(template_id));
}

EdgeResult DirectIo::find_edge(int channel, GrooveAxis axis, double expected_px, double window_px) {
  const FrameBuffer frame = pe_.pe_fg_capture(channel);
  return pe_.pe_fg_find_edge(frame, axis, expected_px, window_px);
}

void DirectIo::set_do(int port, bool on) { pe_.pe_daq_write_do(port, on); }
bool DirectIo::di(int port) { return pe_.pe_daq_read_di(port); }
double DirectIo::vacuum_kpa() { return volts_to_pressure(pe_.pe_daq_read_ai(port::ai_vacuum)); }

void DirectIo::stop_all() {
  for (std::size_t a = 0; a < kAxisCount; ++a) {
    settled_[a] = false;
    pe_.pe_motion_command(a, MotionProfileSpec::stop(pe_.config().axes[a].a_max));
  }
}

namespace {
std::map<std::string, FrameBuffer> fiducial_templates(const PhysicalEquipment& pe) {
  return {{kCoarseTemplate, pe.framegrabber().make_fiducial_template(0, pe.config().wafer)},
          {kFineTemplate, pe.framegrabber().make_fiducial_template(1, pe.config().wafer)}};
}
}  // namespace

TypicalController::TypicalController(const MachineConfig& config, const WorkloadSpec& workload, std::uint64_t seed,
                                     std::uint64_t bin_ticks)
    : config_(config),
      workload_(workload),
      pe_(config_, workload.misalignment, bin_ticks),
      io_(pe_, fiducial_templates(pe_)),
      seq_(config_, io_) {
  workload_.validate();
  std::mt19937_64 rng(seed);
  auto periodic = [&](const std::string& name, AgentKind kind, int period) {
    Periodic p;
    p.agent = pe_.register_agent(name, kind);
    p.period = period;
    p.phase = static_cast<int>(rng() % static_cast<std::uint64_t>(period));
    return p;
  };
  for (const auto& w : workload_.windows) windows_.push_back(periodic(w.name + "_window", AgentKind::window, w.period_ticks));
  motion_monitor_ = periodic("motion_monitor", AgentKind::thread, workload_.motion_monitor_period_ticks);
  io_monitor_ = periodic("io_monitor", AgentKind::thread, workload_.io_monitor_period_ticks);
  net_ = periodic("network_thread", AgentKind::thread, workload_.net_poll_period_ticks);
  process_agent_ = pe_.register_agent("process_thread", AgentKind::thread);
}

CommandAck TypicalController::start() {
  SequencerOptions o;
  o.verify_kerf_after_cut = workload_.verify_kerf;
  auto scope = pe_.act_as(process_agent_);
  return seq_.start(workload_.recipe, o);
}

void TypicalController::window(const WindowSpec& w) {
  for (int i = 0; i < w.motion_reads; ++i) pe_.pe_motion_read_status(static_cast<std::size_t>(i) % kAxisCount);
  for (int i = 0; i < w.di_reads; ++i) pe_.pe_daq_read_di(i % workload_.monitored_di);
  for (int i = 0; i < w.do_reads; ++i) pe_.pe_daq_read_do(i % workload_.driven_do);
  const ProcessPhase p = seq_.state().phase;
  if (w.live_vision && (p == ProcessPhase::aligning || p == ProcessPhase::verifying)) {
    for (int ch = 0; ch < workload_.live_channels; ++ch) {
      pe_.pe_fg_capture(ch);
      pe_.pe_fg_read_status(ch);
    }
  }
}

void TypicalController::motion_monitor() {
  for (int i = 0; i < workload_.motion_monitor_reads; ++i) {
    const std::size_t axis = motion_cursor_++ % kAxisCount;
    const MotionFlags f = decode_status(pe_.pe_motion_read_status(axis).word);
    const bool fault = f.hw_lim_neg || f.hw_lim_pos || f.sw_lim_neg || f.sw_lim_pos || f.drive_fault || f.emergency;
    if (fault && seq_.running()) seq_.abort(std::string("axis fault on ") + axis_name(axis));
  }
}

void TypicalController::io_monitor() {
  for (int i = 0; i < workload_.io_monitor_reads; ++i) {
    const int p = kWatchedDi[io_cursor_++ % kWatchedDi.size()];
    const bool on = pe_.pe_daq_read_di(p);
    if ((p == port::di_estop || p == port::di_blade_broken) && on && seq_.running()) {
      pe_.pe_daq_write_do(port::do_spindle, false);
      seq_.abort(p == port::di_estop ? "emergency stop" : "blade broken");
    }
  }
}

void TypicalController::net_thread() {
  NetPoll r;
  do {
    r = pe_.pe_net_poll();
    if (!r.packet) break;
    auto o = decode_order(*r.packet);
    if (!o) continue;
    if (o->kind == OrderKind::start_process) start();
    if (o->kind == OrderKind::stop_process) seq_.stop("stopped by factory order");
  } while (r.remaining > 0);
}

void TypicalController::report() {
  CimReport r;
  r.product_id = "WFR-300";
  r.piece_count = pieces_;
  r.working_time_s = static_cast<double>(working_ticks_) * config_.tick_duration_s;
  r.blade_cuts = blade_cuts_;
  pe_.pe_net_send(encode_cim(r));
  reports_++;
  last_report_tick_ = pe_.tick();
}

void TypicalController::process_thread() {
  seq_.cycle(pe_.tick());
  const ProcessPhase phase = seq_.state().phase;
  if (active(phase)) working_ticks_++;
  const bool was_running = active(last_phase_) || last_phase_ == ProcessPhase::suspended;
  if (was_running && !seq_.running()) {
    blade_cuts_ += seq_.strokes_completed();
    if (phase == ProcessPhase::done) {
      pieces_++;
      report();
    }
  }
  last_phase_ = phase;
  const auto period = static_cast<std::uint64_t>(kReportPeriodS / config_.tick_duration_s + 0.5);
  if (pe_.tick() - last_report_tick_ >= period) report();
}

void TypicalController::step(std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t t = pe_.tick();
    for (std::size_t w = 0; w < windows_.size(); ++w) {
      if (!windows_[w].due(t)) continue;
      auto scope = pe_.act_as(windows_[w].agent);
      window(workload_.windows[w]);
    }
    if (motion_monitor_.due(t)) {
      auto scope = pe_.act_as(motion_monitor_.agent);
      motion_monitor();
    }
    if (io_monitor_.due(t)) {
      auto scope = pe_.act_as(io_monitor_.agent);
      io_monitor();
    }
    if (net_.due(t)) {
      auto scope = pe_.act_as(net_.agent);
      net_thread();
    }
    {
      auto scope = pe_.act_as(process_agent_);
      process_thread();
    }
    pe_.step(1);
  }
}

}  // namespace dicer
