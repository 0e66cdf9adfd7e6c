#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dicer/dicing/geometry.hpp"
#include "dicer/dicing/recipe.hpp"
#include "dicer/dicing/tool_path.hpp"
#include "dicer/layers/event.hpp"
#include "dicer/sim/config.hpp"
#include "dicer/sim/image.hpp"

namespace dicer {

// What the process logic needs from the machine. The layered machine answers
// from virtual-equipment flags; the event-based baseline reads the boards.
class ProcessIo {
 public:
  virtual ~ProcessIo() = default;
  virtual CommandAck move(std::size_t axis, double target, double v) = 0;
  virtual bool settled(std::size_t axis) = 0;
  virtual PatternMatch find(int channel, const std::string& template_id) = 0;
  virtual EdgeResult find_edge(int channel, GrooveAxis axis, double expected_px, double window_px) = 0;
  virtual void set_do(int port, bool on) = 0;
  virtual bool di(int port) = 0;
  virtual double vacuum_kpa() = 0;
  virtual void stop_all() = 0;
};

enum class ProcessPhase { idle, aligning, cutting, verifying, done, suspended, aborted };
const char* to_string(ProcessPhase p);

struct ProcessState {
  ProcessPhase phase = ProcessPhase::idle;
  ProcessPhase resume_phase = ProcessPhase::idle;  // meaningful while suspended
  int step_index = 0;
  int total_steps = 0;
  std::string abort_reason;
  bool operator==(const ProcessState&) const = default;
};

struct AlignmentResult {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta_deg = 0.0;
  double residual_dtheta_deg = 0.0;
  double residual_score = 0.0;  // lowest match score of the verification pass
  bool converged = false;
};

struct KerfResult {
  bool pass = true;
  std::vector<int> failed_lines;
  std::vector<double> offsets_px;
};

enum class StepKind { setup, alignment, rotation, cut, verify, teardown };
const char* to_string(StepKind k);

struct StepRecord {
  std::uint64_t tick = 0;  // completion tick
  StepKind kind = StepKind::setup;
  bool counted = false;
  std::string label;
};

struct SequencerOptions {
  bool verify_kerf_after_cut = true;
  std::vector<int> kerf_samples{0, 71, 143};
  bool steps_are_strokes = true;
  double kerf_tolerance_px = 2.0;
  double theta_tolerance_deg = 0.01;
  double vacuum_min_kpa = -60.0;
  double io_timeout_s = 2.0;
  double overtravel_mm = 3.0;
  double kerf_probe_offset_mm = 20.0;
};

inline constexpr int kAlignmentSteps = 24;
inline const char* const kCoarseTemplate = "fiducial_coarse";
inline const char* const kFineTemplate = "fiducial_fine";

// Alignment, cutting and kerf inspection of one wafer, advanced one action per
// process-layer cycle.
class DicingSequencer {
 public:
  using EventFn = std::function<void(Severity, const std::string& code, const std::string& text)>;

  DicingSequencer(const MachineConfig& config, ProcessIo& io);

  CommandAck start(const DicingRecipe& recipe, const SequencerOptions& options = {});
  CommandAck start_verify(const DicingRecipe& recipe, const std::vector<int>& lines,
                          const SequencerOptions& options = {});
  CommandAck suspend();
  CommandAck resume();
  CommandAck stop(const std::string& reason = "stopped by operator");
  void abort(const std::string& reason);

  void cycle(std::uint64_t tick);

  const ProcessState& state() const { return state_; }
  bool running() const;
  bool in_step() const { return action_ > 0 || issued_; }
  const AlignmentResult& alignment() const { return alignment_; }
  const AlignmentEstimate& estimate() const { return est_; }
  const ToolPath& path() const { return path_; }
  const std::optional<KerfResult>& kerf() const { return kerf_; }
  const std::vector<StepRecord>& steps() const { return records_; }
  int strokes_completed() const { return strokes_done_; }

  void set_event_handler(EventFn fn) { on_event_ = std::move(fn); }

 private:
  struct Action {
    std::function<bool()> issue;
    std::function<bool()> complete;
  };
  struct Step {
    std::string label;
    StepKind kind = StepKind::setup;
    ProcessPhase phase = ProcessPhase::aligning;
    bool counted = false;
    std::vector<Action> actions;
  };

  using Target = std::function<double()>;

  Action move_axes(std::vector<std::pair<std::size_t, Target>> moves, std::function<double()> speed = {});
  Action find_fiducial(int channel, int which);
  Action set_output(int port, bool on);
  Action wait_for(std::function<bool()> cond, std::string what);
  Action check(std::function<bool()> cond, std::string what);

  void add(ProcessPhase phase, StepKind kind, bool counted, std::string label, std::vector<Action> actions);
  void build_setup();
  void build_alignment();
  void build_cutting();
  void build_verify(const std::vector<int>& lines);
  void build_teardown();
  void begin(ProcessPhase first);
  void finish_step();
  void fail(std::string reason);
  void emit(Severity s, const std::string& code, const std::string& text);
  Vec2 fiducial(int which) const;

  MachineConfig config_;
  ProcessIo& io_;
  EventFn on_event_;

  DicingRecipe recipe_;
  SequencerOptions options_;
  ToolPath path_;
  ProcessState state_;
  bool verify_only_ = false;

  std::vector<Step> program_;
  std::size_t step_ = 0;
  std::size_t action_ = 0;
  bool issued_ = false;
  std::uint64_t now_ = 0;
  std::uint64_t action_start_ = 0;
  std::string fail_reason_;

  std::array<double, kAxisCount> cmd_{};  // last commanded axis targets
  AlignmentEstimate est_;
  std::array<Vec2, 2> measured_{};
  double pass_min_score_ = 1.0;
  AlignmentResult alignment_;
  StrokePlan plan_;
  int strokes_done_ = 0;
  std::optional<KerfResult> kerf_;
  std::vector<StepRecord> records_;
};

}  // namespace dicer
