#include "dicer/dicing/sequencer.hpp"

#include <algorithm>
#include <cmath>

#include "dicer/sim/daq_sim.hpp"

namespace dicer {

namespace {
constexpr std::size_t kX = index(Axis::x);
constexpr std::size_t kY = index(Axis::y);
constexpr std::size_t kZ = index(Axis::z);
constexpr std::size_t kT = index(Axis::theta);
}  // namespace

const char* to_string(ProcessPhase p) {
  switch (p) {
    case ProcessPhase::idle: return "idle";
    case ProcessPhase::aligning: return "aligning";
    case ProcessPhase::cutting: return "cutting";
    case ProcessPhase::verifying: return "verifying";
    case ProcessPhase::done: return "done";
    case ProcessPhase::suspended: return "suspended";
    case ProcessPhase::aborted: return "aborted";
  }
  return "?";
}

const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::setup: return "setup";
    case StepKind::alignment: return "alignment";
    case StepKind::rotation: return "rotation";
    case StepKind::cut: return "cut";
    case StepKind::verify: return "verify";
    case StepKind::teardown: return "teardown";
  }
  return "?";
}

DicingSequencer::DicingSequencer(const MachineConfig& config, ProcessIo& io) : config_(config), io_(io) {}

bool DicingSequencer::running() const {
  switch (state_.phase) {
    case ProcessPhase::aligning:
    case ProcessPhase::cutting:
    case ProcessPhase::verifying:
    case ProcessPhase::suspended: return true;
    default: return false;
  }
}

void DicingSequencer::emit(Severity s, const std::string& code, const std::string& text) {
  if (on_event_) on_event_(s, code, text);
}

Vec2 DicingSequencer::fiducial(int which) const {
  return which == 0 ? config_.wafer.fiducial_a : config_.wafer.fiducial_b;
}

// ---- actions ---------------------------------------------------------------

DicingSequencer::Action DicingSequencer::move_axes(std::vector<std::pair<std::size_t, Target>> moves,
                                                   std::function<double()> speed) {
  auto axes = std::make_shared<std::vector<std::size_t>>();
  for (const auto& m : moves) axes->push_back(m.first);
  Action a;
  a.issue = [this, moves, speed] {
    for (const auto& [axis, target] : moves) {
      const double t = target();
      const double v = speed ? speed() : config_.axes[axis].v_max;
      const CommandAck ack = io_.move(axis, t, v);
      if (!ack.accepted) {
        fail(std::string("motion command rejected on axis ") + axis_name(axis) + ": " + ack.reason);
        return false;
      }
      cmd_[axis] = t;
    }
    return true;
  };
  a.complete = [this, axes] {
    for (std::size_t axis : *axes) {
      if (!io_.settled(axis)) return false;
    }
    return true;
  };
  return a;
}

DicingSequencer::Action DicingSequencer::find_fiducial(int channel, int which) {
  Action a;
  a.issue = [this, channel, which] {
    const PatternMatch m = io_.find(channel, channel == 0 ? kCoarseTemplate : kFineTemplate);
    if (!m.found) {
      fail("vision_error: fiducial not found");
      return false;
    }
    const CameraConfig& cam = config_.cameras[static_cast<std::size_t>(channel)];
    const Vec2 seen = cam.station() + Vec2{m.dx, m.dy} * cam.mm_per_px;
    measured_[static_cast<std::size_t>(which)] = chuck_point(seen, {cmd_[kX], cmd_[kY]}, cmd_[kT]);
    pass_min_score_ = std::min(pass_min_score_, m.score);
    return true;
  };
  a.complete = [] { return true; };
  return a;
}

DicingSequencer::Action DicingSequencer::set_output(int port, bool on) {
  Action a;
  a.issue = [this, port, on] {
    io_.set_do(port, on);
    return true;
  };
  a.complete = [] { return true; };
  return a;
}

DicingSequencer::Action DicingSequencer::wait_for(std::function<bool()> cond, std::string what) {
  Action a;
  a.issue = [] { return true; };
  a.complete = [this, cond, what] {
    if (cond()) return true;
    const double waited = static_cast<double>(now_ - action_start_) * config_.tick_duration_s;
    if (waited > options_.io_timeout_s) fail("timeout waiting for " + what);
    return false;
  };
  return a;
}

DicingSequencer::Action DicingSequencer::check(std::function<bool()> cond, std::string what) {
  Action a;
  a.issue = [this, cond, what] {
    if (cond()) return true;
    fail(what);
    return false;
  };
  a.complete = [] { return true; };
  return a;
}

// ---- program -----------------------------------------------------------------

void DicingSequencer::add(ProcessPhase phase, StepKind kind, bool counted, std::string label,
                          std::vector<Action> actions) {
  program_.push_back({std::move(label), kind, phase, counted, std::move(actions)});
}

void DicingSequencer::build_setup() {
  auto vac_ok = [this] { return io_.vacuum_kpa() <= options_.vacuum_min_kpa; };
  add(ProcessPhase::aligning, StepKind::setup, false, "chuck vacuum on",
      {set_output(port::do_lamp, true), set_output(port::do_vacuum, true), wait_for(vac_ok, "chuck vacuum")});
}

void DicingSequencer::build_alignment() {
  const auto P = ProcessPhase::aligning;
  const auto K = StepKind::alignment;
  const double clearance = recipe_.index_clearance;
  auto z_up = [this, clearance, P, K](std::string label) {
    add(P, K, true, std::move(label), {move_axes({{kZ, [clearance] { return clearance; }}})});
  };
  auto theta_to = [this, P, K](std::string label, Target t) { add(P, K, true, std::move(label), {move_axes({{kT, t}})}); };
  auto xy_to = [this, P, K](std::string label, int channel, int which) {
    const Vec2 station = config_.cameras[static_cast<std::size_t>(channel)].station();
    auto target = [this, station, which] { return stage_for(station, fiducial(which), cmd_[kT], est_); };
    add(P, K, true, std::move(label),
        {move_axes({{kX, [target] { return target().x; }}, {kY, [target] { return target().y; }}})});
  };
  auto find = [this, P, K](std::string label, int channel, int which) {
    Action f = find_fiducial(channel, which);
    if (which == 0) {
      auto inner = f.issue;
      f.issue = [this, inner] {
        if (!inner()) return false;
        est_ = estimate_from_one(measured_[0], fiducial(0), est_.dtheta_deg);
        return true;
      };
    } else {
      auto inner = f.issue;
      f.issue = [this, inner] {
        if (!inner()) return false;
        est_ = estimate_from_fiducials(measured_[0], measured_[1], fiducial(0), fiducial(1));
        return true;
      };
    }
    add(P, K, true, std::move(label), {f});
  };
  auto correct = [this] { return -est_.dtheta_deg; };

  z_up("Z to clearance");
  theta_to("theta to zero", [] { return 0.0; });
  xy_to("fiducial A under coarse camera", 0, 0);
  find("find A (coarse)", 0, 0);
  xy_to("fiducial B under coarse camera", 0, 1);
  find("find B (coarse)", 0, 1);
  theta_to("theta correction 1", correct);
  for (int pass = 0; pass < 2; ++pass) {
    const std::string n = std::to_string(pass + 1);
    xy_to("fiducial A under fine camera, pass " + n, 1, 0);
    find("find A (fine), pass " + n, 1, 0);
    xy_to("fiducial B under fine camera, pass " + n, 1, 1);
    find("find B (fine), pass " + n, 1, 1);
    theta_to("theta correction " + std::to_string(pass + 2), correct);
  }
  xy_to("verify: fiducial A under fine camera", 1, 0);
  {
    Action f = find_fiducial(1, 0);
    auto inner = f.issue;
    f.issue = [this, inner] {
      pass_min_score_ = 1.0;
      return inner();
    };
    add(P, K, true, "verify: find A", {f});
  }
  xy_to("verify: fiducial B under fine camera", 1, 1);
  {
    Action f = find_fiducial(1, 1);
    auto inner = f.issue;
    f.issue = [this, inner] {
      if (!inner()) return false;
      const AlignmentEstimate e = estimate_from_fiducials(measured_[0], measured_[1], fiducial(0), fiducial(1));
      alignment_.dx = e.dx;
      alignment_.dy = e.dy;
      alignment_.dtheta_deg = e.dtheta_deg;
      alignment_.residual_dtheta_deg = cmd_[kT] + e.dtheta_deg;
      alignment_.residual_score = pass_min_score_;
      alignment_.converged = std::abs(alignment_.residual_dtheta_deg) < options_.theta_tolerance_deg;
      est_ = e;
      if (!alignment_.converged) {
        fail("alignment did not converge");
        return false;
      }
      return true;
    };
    add(P, K, true, "verify: find B", {f});
  }
  theta_to("theta trim", correct);
  add(P, K, true, "wafer centre under blade",
      {move_axes({{kX, [this] { return stage_for({0.0, 0.0}, {0.0, 0.0}, cmd_[kT], est_).x; }},
                  {kY, [this] { return stage_for({0.0, 0.0}, {0.0, 0.0}, cmd_[kT], est_).y; }}})});
  z_up("Z to clearance");
}

void DicingSequencer::build_cutting() {
  const auto P = ProcessPhase::cutting;
  const double clearance = recipe_.index_clearance;
  auto spindle_ok = [this] { return io_.di(port::di_spindle_running); };
  add(P, StepKind::setup, false, "spindle and coolant on",
      {set_output(port::do_spindle, true), wait_for(spindle_ok, "spindle feedback"),
       set_output(port::do_coolant, true), wait_for([this] { return io_.di(port::di_coolant_flow); }, "coolant flow")});

  for (std::size_t k = 0; k < path_.strokes.size(); ++k) {
    const CutStroke s = path_.strokes[k];
    auto plan = [this, s] {
      plan_ = plan_stroke(s, est_, -est_.dtheta_deg, recipe_.wafer_diameter, options_.overtravel_mm);
      return plan_;
    };
    if (k == path_.rotation_index) {
      add(P, StepKind::rotation, false, "rotate 90 degrees", {move_axes({{kT, [plan] { return plan().theta; }}})});
    }
    const std::string n = std::to_string(s.line_index);
    Action index = move_axes({{kX, [plan] { return plan().x_start; }}, {kY, [this] { return plan_.y; }}});
    Action safe = check(spindle_ok, "spindle not running; cut refused");
    Action down = move_axes({{kZ, [s] { return s.z_depth; }}});
    Action feed = move_axes({{kX, [this] { return plan_.x_end; }}}, [s] { return s.feed; });
    Action up = move_axes({{kZ, [clearance] { return clearance; }}});
    auto bump = [this](Action a) {
      auto inner = a.complete;
      a.complete = [this, inner] {
        if (!inner()) return false;
        strokes_done_++;
        return true;
      };
      return a;
    };
    if (options_.steps_are_strokes) {
      add(P, StepKind::cut, true, "stroke " + n, {index, safe, down, feed, bump(up)});
    } else {
      add(P, StepKind::cut, true, "stroke " + n + " index", {index});
      add(P, StepKind::cut, true, "stroke " + n + " lower", {safe, down});
      add(P, StepKind::cut, true, "stroke " + n + " feed", {feed});
      add(P, StepKind::cut, true, "stroke " + n + " raise", {bump(up)});
    }
  }
  add(P, StepKind::teardown, false, "spindle and coolant off",
      {set_output(port::do_spindle, false), set_output(port::do_coolant, false)});
}

void DicingSequencer::build_verify(const std::vector<int>& lines) {
  const auto P = ProcessPhase::verifying;
  const double clearance = recipe_.index_clearance;
  add(P, StepKind::verify, false, "Z to clearance", {move_axes({{kZ, [clearance] { return clearance; }}})});
  auto result = std::make_shared<KerfResult>();
  add(P, StepKind::verify, false, "start inspection", {check([this, result] {
        *result = KerfResult{};
        kerf_.reset();
        return true;
      }, "")});
  const CameraConfig cam = config_.cameras[1];
  for (int line : lines) {
    const CutStroke s = path_.strokes.at(static_cast<std::size_t>(line));
    const double u = options_.kerf_probe_offset_mm;
    const Vec2 w = s.direction == CutDirection::x_pass ? Vec2{u, s.coordinate} : Vec2{s.coordinate, u};
    auto target = [this, cam, w] { return stage_for(cam.station(), w, cmd_[kT], est_); };
    Action probe;
    probe.issue = [this, s, cam, line, result] {
      const double phi = deg_to_rad(cmd_[kT] + est_.dtheta_deg + (s.direction == CutDirection::y_pass ? 90.0 : 0.0));
      const GrooveAxis axis =
          std::abs(std::cos(phi)) >= std::abs(std::sin(phi)) ? GrooveAxis::horizontal : GrooveAxis::vertical;
      const double pitch = s.direction == CutDirection::x_pass ? recipe_.street_pitch_y : recipe_.street_pitch_x;
      const EdgeResult e = io_.find_edge(1, axis, 0.0, pitch / 2.0 / cam.mm_per_px);
      result->offsets_px.push_back(e.position);
      if (!e.found || std::abs(e.position) > options_.kerf_tolerance_px) {
        result->pass = false;
        result->failed_lines.push_back(line);
      }
      return true;
    };
    probe.complete = [] { return true; };
    add(P, StepKind::verify, false, "inspect line " + std::to_string(line),
        {move_axes({{kX, [target] { return target().x; }}, {kY, [target] { return target().y; }}}), probe});
  }
  add(P, StepKind::verify, false, "inspection result", {check([this, result] {
        kerf_ = *result;
        if (kerf_->pass) {
          emit(Severity::info, "kerf_pass", "kerf inspection passed");
        } else {
          std::string lines;
          for (int l : kerf_->failed_lines) lines += (lines.empty() ? "" : ",") + std::to_string(l);
          emit(Severity::warn, "kerf_fail", "kerf inspection failed on lines " + lines);
        }
        return true;
      }, "")});
}

void DicingSequencer::build_teardown() {
  add(ProcessPhase::verifying, StepKind::teardown, false, "release wafer",
      {set_output(port::do_vacuum, false), set_output(port::do_lamp, false)});
}

void DicingSequencer::begin(ProcessPhase first) {
  step_ = 0;
  action_ = 0;
  issued_ = false;
  fail_reason_.clear();
  state_.phase = first;
  state_.resume_phase = first;
  state_.step_index = 0;
  state_.abort_reason.clear();
  records_.clear();
  strokes_done_ = 0;
  pass_min_score_ = 1.0;
}

CommandAck DicingSequencer::start(const DicingRecipe& recipe, const SequencerOptions& options) {
  if (running()) return CommandAck::rejected("process already running");
  try {
    path_ = generate_tool_path(recipe);
  } catch (const std::exception& e) {
    return CommandAck::rejected(e.what());
  }
  for (int l : options.kerf_samples) {
    if (l < 0 || static_cast<std::size_t>(l) >= path_.strokes.size()) {
      return CommandAck::rejected("kerf sample line " + std::to_string(l) + " outside the tool path");
    }
  }
  recipe_ = recipe;
  options_ = options;
  program_.clear();
  est_ = {};
  alignment_ = {};
  kerf_.reset();
  verify_only_ = false;

  build_setup();
  build_alignment();
  build_cutting();
  if (options_.verify_kerf_after_cut && !options_.kerf_samples.empty()) build_verify(options_.kerf_samples);
  build_teardown();

  begin(ProcessPhase::aligning);
  const int per_stroke = options_.steps_are_strokes ? 1 : 4;
  state_.total_steps = kAlignmentSteps + per_stroke * static_cast<int>(path_.strokes.size());
  emit(Severity::info, "process_started", "dicing started");
  return CommandAck::ok();
}

CommandAck DicingSequencer::start_verify(const DicingRecipe& recipe, const std::vector<int>& lines,
                                         const SequencerOptions& options) {
  if (running()) return CommandAck::rejected("process already running");
  ToolPath path;
  try {
    path = generate_tool_path(recipe);
  } catch (const std::exception& e) {
    return CommandAck::rejected(e.what());
  }
  for (int l : lines) {
    if (l < 0 || static_cast<std::size_t>(l) >= path.strokes.size()) {
      return CommandAck::rejected("line " + std::to_string(l) + " outside the tool path");
    }
  }
  path_ = std::move(path);
  recipe_ = recipe;
  options_ = options;
  program_.clear();
  verify_only_ = true;
  if (lines.empty()) {
    kerf_ = KerfResult{};
    state_.phase = ProcessPhase::idle;
    return CommandAck::ok();
  }
  build_verify(lines);
  const int steps_before = state_.step_index;
  const int total_before = state_.total_steps;
  begin(ProcessPhase::verifying);
  state_.step_index = steps_before;
  state_.total_steps = total_before;
  return CommandAck::ok();
}

CommandAck DicingSequencer::suspend() {
  if (state_.phase == ProcessPhase::suspended) return CommandAck::rejected("already suspended");
  if (!running()) return CommandAck::rejected("process not running");
  state_.resume_phase = state_.phase;
  state_.phase = ProcessPhase::suspended;
  emit(Severity::info, "process_suspended", "suspended at step " + std::to_string(state_.step_index));
  return CommandAck::ok();
}

CommandAck DicingSequencer::resume() {
  if (state_.phase != ProcessPhase::suspended) return CommandAck::rejected("process not suspended");
  state_.phase = state_.resume_phase;
  emit(Severity::info, "process_resumed", "resumed at step " + std::to_string(state_.step_index));
  return CommandAck::ok();
}

CommandAck DicingSequencer::stop(const std::string& reason) {
  if (!running()) return CommandAck::rejected("process not running");
  abort(reason);
  return CommandAck::ok();
}

void DicingSequencer::abort(const std::string& reason) {
  if (!running()) return;
  io_.stop_all();
  state_.abort_reason = reason;
  state_.phase = ProcessPhase::aborted;
  action_ = 0;
  issued_ = false;
  emit(Severity::error, "process_aborted", reason);
}

void DicingSequencer::fail(std::string reason) { fail_reason_ = std::move(reason); }

void DicingSequencer::finish_step() {
  const Step& s = program_[step_];
  if (s.counted) state_.step_index++;
  records_.push_back({now_, s.kind, s.counted, s.label});
  if (s.kind == StepKind::alignment && state_.step_index == kAlignmentSteps && s.counted) {
    emit(Severity::info, "alignment_done", "wafer aligned");
  }
  action_ = 0;
  issued_ = false;
  step_++;
  if (step_ >= program_.size()) {
    if (verify_only_) {
      state_.phase = ProcessPhase::idle;
      state_.resume_phase = ProcessPhase::idle;
    } else {
      state_.phase = ProcessPhase::done;
      state_.resume_phase = ProcessPhase::done;
      emit(Severity::info, "process_done", "dicing complete");
    }
    return;
  }
  const ProcessPhase next = program_[step_].phase;
  if (state_.phase == ProcessPhase::suspended) {
    state_.resume_phase = next;
  } else {
    if (next == ProcessPhase::cutting && state_.phase != ProcessPhase::cutting) {
      emit(Severity::info, "cutting_started", "cutting started");
    }
    state_.phase = next;
  }
}

void DicingSequencer::cycle(std::uint64_t tick) {
  now_ = tick;
  if (!running()) return;
  if (state_.phase == ProcessPhase::suspended && !in_step()) return;
  Step& s = program_[step_];
  Action& a = s.actions[action_];
  if (!issued_) {
    action_start_ = tick;
    if (!a.issue()) {
      abort(fail_reason_);
      return;
    }
    issued_ = true;
    return;
  }
  const bool complete = a.complete();
  if (!fail_reason_.empty()) {
    abort(fail_reason_);
    return;
  }
  if (!complete) return;
  issued_ = false;
  action_++;
  if (action_ >= s.actions.size()) finish_step();
}

}  // namespace dicer
