#include "dicer/layers/machine.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace dicer {

namespace {

bool active(ProcessPhase p) {
  return p == ProcessPhase::aligning || p == ProcessPhase::cutting || p == ProcessPhase::verifying;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

}  // namespace

// ---- VE process io -----------------------------------------------------------

CommandAck VeProcessIo::move(std::size_t axis, double target, double v) {
  const AxisConfig& c = config_.axes[axis];
  return vme_.smove(axis, target, v, c.a_max, c.a_max, c.jerk, c.jerk);
}

bool VeProcessIo::settled(std::size_t axis) { return !vme_.busy(axis) && vme_.status(axis).in_position; }

PatternMatch VeProcessIo::find(int channel, const std::string& template_id) {
  return vve_.capture_and_find(channel, template_id);
}

EdgeResult VeProcessIo::find_edge(int channel, GrooveAxis axis, double expected_px, double window_px) {
  return vve_.capture_and_find_edge(channel, axis, expected_px, window_px);
}

void VeProcessIo::set_do(int port, bool on) { vde_.set_do(port, on); }
bool VeProcessIo::di(int port) { return vde_.di(port); }
double VeProcessIo::vacuum_kpa() { return volts_to_pressure(vde_.ai(port::ai_vacuum)); }

void VeProcessIo::stop_all() {
  for (std::size_t a = 0; a < kAxisCount; ++a) vme_.stop(a);
}

// ---- machine -------------------------------------------------------------------

Machine::Machine(const MachineConfig& config, const LayerConfig& layers, const Misalignment& misalignment,
                 std::uint64_t bin_ticks)
    : config_(config),
      layers_(layers),
      pe_(config_, misalignment, bin_ticks),
      vme_(pe_),
      vve_(pe_),
      vde_(pe_),
      vne_(pe_),
      io_(config_, vme_, vve_, vde_),
      seq_(config_, io_),
      ll_(layers_, config_.tick_duration_s) {
  layers_.validate();
  agents_.basic = pe_.register_agent("basic_layer", AgentKind::thread);
  agents_.logic = pe_.register_agent("logic_layer", AgentKind::thread);
  agents_.process = pe_.register_agent("process_layer", AgentKind::thread);
  agents_.display = pe_.register_agent("display_layer", AgentKind::window);
  agents_.gateway = pe_.register_agent("gateway", AgentKind::window);
  agents_.command = pe_.register_agent("operator_command", AgentKind::thread);
  pe_.set_window_access_forbidden(true);

  for (int ch = 0; ch < Vve::kChannels; ++ch) {
    vve_.set_live(ch, layers_.live_channels[static_cast<std::size_t>(ch)]);
  }
  vve_.register_template(kCoarseTemplate, pe_.framegrabber().make_fiducial_template(0, config_.wafer));
  vve_.register_template(kFineTemplate, pe_.framegrabber().make_fiducial_template(1, config_.wafer));
  vne_.counters().product_id = layers_.product_id;

  seq_.set_event_handler([this](Severity s, const std::string& code, const std::string& text) { log(s, code, text); });
  seq_options_.vacuum_min_kpa = layers_.vacuum_min_kpa;
  display_ = compose();
}

Machine::~Machine() { stop_realtime(); }

void Machine::log(Severity s, std::string code, std::string text) {
  events_.push_back({pe_.tick(), s, std::move(code), std::move(text)});
}

void Machine::drain_outbox() {
  for (auto& e : ls_.outbox) events_.push_back(std::move(e));
  ls_.outbox.clear();
}

void Machine::step(std::uint64_t n) {
  std::lock_guard lk(mutex_);
  for (std::uint64_t i = 0; i < n; ++i) tick_once();
}

bool Machine::run_until(const std::function<bool(const Machine&)>& pred, std::uint64_t max_ticks) {
  std::lock_guard lk(mutex_);
  for (std::uint64_t i = 0; i < max_ticks; ++i) {
    if (pred(*this)) return true;
    tick_once();
  }
  return pred(*this);
}

std::uint64_t Machine::tick() const {
  std::lock_guard lk(mutex_);
  return pe_.tick();
}

void Machine::add_task(std::string name, AgentKind kind, int period_ticks, TaskFn fn) {
  if (period_ticks < 1) throw std::invalid_argument("task period must be at least one tick");
  std::lock_guard lk(mutex_);
  const std::size_t agent = pe_.register_agent(name, kind);
  tasks_.push_back({std::move(name), agent, period_ticks, std::move(fn)});
}

void Machine::tick_once() {
  const std::uint64_t t = pe_.tick();
  auto due = [t](int period) { return t % static_cast<std::uint64_t>(period) == 0; };
  if (due(layers_.bl_period_ticks)) basic_cycle();
  if (due(layers_.ll_period_ticks)) logic_cycle();
  if (due(layers_.pl_period_ticks)) process_cycle();
  if (due(layers_.dl_period_ticks)) display_cycle();
  for (auto& task : tasks_) {
    if (!due(task.period)) continue;
    auto scope = pe_.act_as(task.agent);
    task.fn(*this);
  }
  pe_.step(1);
}

void Machine::basic_cycle() {
  std::lock_guard lk(mutex_);
  auto scope = pe_.act_as(agents_.basic);
  const auto n = bl_cycles_++;
  vme_.update_status();
  if (n % static_cast<std::uint64_t>(layers_.daq_sample_divisor) == 0) vde_.refresh();
  if (n % static_cast<std::uint64_t>(layers_.vision_sample_divisor) == 0) vve_.poll_live();
  if (n % static_cast<std::uint64_t>(layers_.net_sample_divisor) == 0) vne_.poll();
}

void Machine::logic_cycle() {
  std::lock_guard lk(mutex_);
  auto scope = pe_.act_as(agents_.logic);
  ll_.cycle(ls_, vme_, vde_, vve_, pe_.tick(), safety_);
  drain_outbox();
}

void Machine::process_cycle() {
  std::lock_guard lk(mutex_);
  auto scope = pe_.act_as(agents_.process);
  if (seq_.running() && ls_.any_error()) seq_.abort("error latched: " + join(ls_.latched()));
  handle_orders();
  seq_.cycle(pe_.tick());

  const ProcessPhase phase = seq_.state().phase;
  if (active(phase)) working_ticks_++;
  const bool was_running = active(last_phase_) || last_phase_ == ProcessPhase::suspended;
  if (was_running && !seq_.running()) {
    CimReport& c = vne_.counters();
    c.blade_cuts += seq_.strokes_completed();
    if (phase == ProcessPhase::done) {
      c.piece_count++;
      send_report();
    }
  }
  last_phase_ = phase;

  if (layers_.report_period_s > 0.0) {
    const auto period = static_cast<std::uint64_t>(std::llround(layers_.report_period_s / config_.tick_duration_s));
    if (period > 0 && pe_.tick() - last_report_tick_ >= period) send_report();
  }
}

void Machine::send_report() {
  CimReport& c = vne_.counters();
  c.working_time_s = static_cast<double>(working_ticks_) * config_.tick_duration_s;
  c.events.clear();
  for (std::size_t i = reported_events_; i < events_.size(); ++i) c.events.push_back(events_[i].code);
  reported_events_ = events_.size();
  vne_.report(c);
  last_report_tick_ = pe_.tick();
}

void Machine::handle_orders() {
  while (auto o = vne_.take_order()) {
    switch (o->kind) {
      case OrderKind::start_process: {
        const CommandAck ack = process_start();
        if (!ack.accepted) log(Severity::warn, "order_rejected", "start_process: " + ack.reason);
        break;
      }
      case OrderKind::stop_process: {
        const CommandAck ack = seq_.stop("stopped by factory order");
        if (!ack.accepted) log(Severity::warn, "order_rejected", "stop_process: " + ack.reason);
        break;
      }
      case OrderKind::change_tool:
        vne_.counters().blade_cuts = 0;
        log(Severity::info, "tool_changed", "blade changed to " + o->tool);
        break;
      case OrderKind::event_message:
        log(Severity::info, "factory_message", o->text);
        break;
    }
  }
}

void Machine::display_cycle() {
  std::lock_guard lk(mutex_);
  auto scope = pe_.act_as(agents_.display);
  display_ = compose();
}

DisplaySnapshot Machine::compose() const {
  DisplaySnapshot s;
  s.tick = pe_.tick();
  s.sim_time_s = pe_.clock().time_s();
  s.axes = vme_.axes();
  s.daq = vde_.status();
  s.vision = vve_.channels();
  s.logic = ls_;
  s.logic.outbox.clear();
  s.process = seq_.state();
  s.strokes_completed = seq_.strokes_completed();
  s.alignment = seq_.alignment();
  s.kerf = seq_.kerf();
  const std::size_t from = events_.size() > kEventTail ? events_.size() - kEventTail : 0;
  s.events.assign(events_.begin() + static_cast<std::ptrdiff_t>(from), events_.end());
  s.event_seq = events_.size();
  s.cim = vne_.state().counters;
  return s;
}

DisplaySnapshot Machine::snapshot() const {
  std::lock_guard lk(mutex_);
  auto scope = const_cast<PhysicalEquipment&>(pe_).act_as(agents_.gateway);
  return compose();
}

DisplaySnapshot Machine::display_snapshot() const {
  std::lock_guard lk(mutex_);
  return display_;
}

// ---- commands --------------------------------------------------------------------

CommandAck Machine::process_start() {
  std::lock_guard lk(mutex_);
  auto scope = pe_.act_as(agents_.command);
  if (ls_.any_error()) return CommandAck::rejected("error latched: " + join(ls_.latched()));
  return seq_.start(recipe_, seq_options_);
}

CommandAck Machine::process_suspend() {
  std::lock_guard lk(mutex_);
  return seq_.suspend();
}

CommandAck Machine::process_resume() {
  std::lock_guard lk(mutex_);
  if (ls_.any_error()) return CommandAck::rejected("error latched: " + join(ls_.latched()));
  return seq_.resume();
}

CommandAck Machine::process_stop() {
  std::lock_guard lk(mutex_);
  auto scope = pe_.act_as(agents_.command);
  return seq_.stop();
}

CommandAck Machine::clear_error(const std::string& code) {
  std::lock_guard lk(mutex_);
  if (code == "all") {
    for (const auto& c : LogicalState::error_codes()) *ls_.flag(c) = false;
    log(Severity::info, "error_cleared", "all");
    return CommandAck::ok();
  }
  bool* f = ls_.flag(code);
  if (!f) return CommandAck::rejected("unknown error code " + code);
  *f = false;
  log(Severity::info, "error_cleared", code);
  return CommandAck::ok();
}

CommandAck Machine::load_recipe(const DicingRecipe& recipe) {
  std::lock_guard lk(mutex_);
  if (seq_.running()) return CommandAck::rejected("process running");
  try {
    recipe.validate();
  } catch (const std::exception& e) {
    return CommandAck::rejected(e.what());
  }
  recipe_ = recipe;
  log(Severity::info, "recipe_loaded", "recipe loaded");
  return CommandAck::ok();
}

DicingRecipe Machine::recipe() const {
  std::lock_guard lk(mutex_);
  return recipe_;
}

void Machine::set_sequencer_options(const SequencerOptions& o) {
  std::lock_guard lk(mutex_);
  seq_options_ = o;
}

CommandAck Machine::guard_manual(std::size_t axis) const {
  if (axis >= kAxisCount) return CommandAck::rejected("axis index out of range");
  if (seq_.running()) return CommandAck::rejected("process running");
  return CommandAck::ok();
}

CommandAck Machine::jog_start(std::size_t axis, double v) {
  std::lock_guard lk(mutex_);
  if (auto g = guard_manual(axis); !g.accepted) return g;
  if (v == 0.0 || !std::isfinite(v)) return CommandAck::rejected("jog velocity must be non-zero");
  auto scope = pe_.act_as(agents_.command);
  return vme_.tjog(axis, v, config_.axes[axis].a_max);
}

CommandAck Machine::jog_stop(std::size_t axis) {
  std::lock_guard lk(mutex_);
  if (axis >= kAxisCount) return CommandAck::rejected("axis index out of range");
  auto scope = pe_.act_as(agents_.command);
  return vme_.stop(axis);
}

CommandAck Machine::move_abs(std::size_t axis, double position, std::optional<double> v) {
  std::lock_guard lk(mutex_);
  if (auto g = guard_manual(axis); !g.accepted) return g;
  const AxisConfig& c = config_.axes[axis];
  const double speed = v.value_or(c.v_max);
  if (!(speed > 0.0) || !std::isfinite(position)) return CommandAck::rejected("invalid move parameters");
  auto scope = pe_.act_as(agents_.command);
  return vme_.smove(axis, position, speed, c.a_max, c.a_max, c.jerk, c.jerk);
}

CommandAck Machine::home(std::size_t axis) {
  std::lock_guard lk(mutex_);
  if (auto g = guard_manual(axis); !g.accepted) return g;
  const AxisConfig& c = config_.axes[axis];
  auto scope = pe_.act_as(agents_.command);
  return vme_.thome(axis, 0, c.v_max / 4.0, c.v_max / 20.0, c.v_max / 40.0, c.a_max, c.a_max);
}

CommandAck Machine::set_do(int port, bool value) {
  std::lock_guard lk(mutex_);
  if (port < 0 || port >= config_.plant.do_count) return CommandAck::rejected("DO port out of range");
  if (value) {
    std::vector<std::string> blocking;
    if (port == port::do_spindle) {
      for (const char* c : {"spindle_error", "blade_error", "emergency"}) {
        if (*ls_.flag(c)) blocking.push_back(c);
      }
    } else if (port == port::do_vacuum && ls_.vacuum_error) {
      blocking.push_back("vacuum_error");
    } else if (port == port::do_coolant) {
      for (const char* c : {"coolant_error", "emergency"}) {
        if (*ls_.flag(c)) blocking.push_back(c);
      }
    }
    if (!blocking.empty()) return CommandAck::rejected("interlock: " + join(blocking) + " latched");
  }
  auto scope = pe_.act_as(agents_.command);
  vde_.set_do(port, value);
  return CommandAck::ok();
}

CommandAck Machine::set_ao(int port, double volts) {
  std::lock_guard lk(mutex_);
  if (port < 0 || port >= config_.plant.ao_count) return CommandAck::rejected("AO port out of range");
  if (!std::isfinite(volts)) return CommandAck::rejected("invalid voltage");
  auto scope = pe_.act_as(agents_.command);
  vde_.set_ao(port, volts);
  return CommandAck::ok();
}

CommandAck Machine::verify_kerf(const std::vector<int>& lines) {
  std::lock_guard lk(mutex_);
  if (ls_.any_error()) return CommandAck::rejected("error latched: " + join(ls_.latched()));
  return seq_.start_verify(recipe_, lines, seq_options_);
}

// ---- realtime ------------------------------------------------------------------------

void Machine::start_realtime(double speed) {
  if (!(speed > 0.0)) throw std::invalid_argument("realtime speed must be positive");
  std::lock_guard lk(mutex_);
  if (ticker_.joinable()) return;
  pe_.set_clock_mode(ClockMode::realtime);
  using clock = std::chrono::steady_clock;
  const auto period =
      std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(config_.tick_duration_s / speed));
  ticker_ = std::jthread([this, period](std::stop_token st) {
    auto next = clock::now();
    while (!st.stop_requested()) {
      next += period;
      std::this_thread::sleep_until(next);
      const auto now = clock::now();
      if (now - next > std::chrono::milliseconds(100)) next = now;
      std::lock_guard lk(mutex_);
      tick_once();
    }
  });
}

void Machine::stop_realtime() {
  if (!ticker_.joinable()) return;
  ticker_.request_stop();
  ticker_.join();
  ticker_ = std::jthread();
  std::lock_guard lk(mutex_);
  pe_.set_clock_mode(ClockMode::lockstep);
}

// ---- logs ----------------------------------------------------------------------------

std::vector<EventMessage> Machine::events() const {
  std::lock_guard lk(mutex_);
  return events_;
}

std::vector<EventMessage> Machine::events_since(std::uint64_t seq) const {
  std::lock_guard lk(mutex_);
  if (seq >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(seq), events_.end()};
}

std::uint64_t Machine::event_seq() const {
  std::lock_guard lk(mutex_);
  return events_.size();
}

std::vector<SafetyAction> Machine::safety_log() const {
  std::lock_guard lk(mutex_);
  return safety_;
}

std::string to_json_line(const EventMessage& e) {
  nlohmann::json j{{"tick", e.tick}, {"severity", to_string(e.severity)}, {"code", e.code}, {"text", e.text}};
  return j.dump();
}

std::string Machine::events_ndjson() const {
  std::lock_guard lk(mutex_);
  std::ostringstream out;
  for (const auto& e : events_) out << to_json_line(e) << '\n';
  return out.str();
}

}  // namespace dicer
