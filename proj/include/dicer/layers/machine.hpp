#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dicer/dicing/recipe.hpp"
#include "dicer/dicing/sequencer.hpp"
#include "dicer/layers/event.hpp"
#include "dicer/layers/logic_layer.hpp"
#include "dicer/layers/logical_state.hpp"
#include "dicer/sim/equipment.hpp"
#include "dicer/ve/vde.hpp"
#include "dicer/ve/vme.hpp"
#include "dicer/ve/vne.hpp"
#include "dicer/ve/vve.hpp"

namespace dicer {

// Everything the display side may see, copied out of the VEs and layers.
struct DisplaySnapshot {
  std::uint64_t tick = 0;
  double sim_time_s = 0.0;
  std::array<AxisStatus, kAxisCount> axes{};
  DaqStatus daq;
  std::array<ChannelStatus, Vve::kChannels> vision{};
  LogicalState logic;
  ProcessState process;
  int strokes_completed = 0;
  AlignmentResult alignment;
  std::optional<KerfResult> kerf;
  std::vector<EventMessage> events;  // tail
  std::uint64_t event_seq = 0;       // events ever logged
  CimReport cim;
};

class Machine;

// Process I/O answered from VE status flags and VE commands.
class VeProcessIo : public ProcessIo {
 public:
  VeProcessIo(const MachineConfig& config, Vme& vme, Vve& vve, Vde& vde)
      : config_(config), vme_(vme), vve_(vve), vde_(vde) {}

  CommandAck move(std::size_t axis, double target, double v) override;
  bool settled(std::size_t axis) override;
  PatternMatch find(int channel, const std::string& template_id) override;
  EdgeResult find_edge(int channel, GrooveAxis axis, double expected_px, double window_px) override;
  void set_do(int port, bool on) override;
  bool di(int port) override;
  double vacuum_kpa() override;
  void stop_all() override;

 private:
  const MachineConfig& config_;
  Vme& vme_;
  Vve& vve_;
  Vde& vde_;
};

// The layered machine: PE, VEs, and the basic/logic/process/display layers on
// one scheduler. Public entry points are serialized on one mutex.
class Machine {
 public:
  using TaskFn = std::function<void(Machine&)>;
  static constexpr std::size_t kEventTail = 50;

  explicit Machine(const MachineConfig& config = MachineConfig::defaults(), const LayerConfig& layers = {},
                   const Misalignment& misalignment = {}, std::uint64_t bin_ticks = 1000);
  ~Machine();

  Machine(const Machine&) = delete;
  Machine& operator=(const Machine&) = delete;

  // Lockstep: run every due layer, then advance the plant one tick.
  void step(std::uint64_t n = 1);
  bool run_until(const std::function<bool(const Machine&)>& pred, std::uint64_t max_ticks);
  std::uint64_t tick() const;

  // Periodic task scheduled after the layers, acting as its own agent.
  void add_task(std::string name, AgentKind kind, int period_ticks, TaskFn fn);

  // Single layer cycles, for isolating their accesses.
  void basic_cycle();
  void logic_cycle();
  void process_cycle();
  void display_cycle();

  // Fresh copy of the VE and layer state; never touches the equipment.
  DisplaySnapshot snapshot() const;
  // Copy assembled by the last display cycle.
  DisplaySnapshot display_snapshot() const;

  CommandAck process_start();
  CommandAck process_suspend();
  CommandAck process_resume();
  CommandAck process_stop();
  CommandAck clear_error(const std::string& code);
  CommandAck load_recipe(const DicingRecipe& recipe);
  CommandAck jog_start(std::size_t axis, double v);
  CommandAck jog_stop(std::size_t axis);
  CommandAck move_abs(std::size_t axis, double position, std::optional<double> v = {});
  CommandAck home(std::size_t axis);
  CommandAck set_do(int port, bool value);
  CommandAck set_ao(int port, double volts);
  CommandAck verify_kerf(const std::vector<int>& lines);

  DicingRecipe recipe() const;
  void set_sequencer_options(const SequencerOptions& o);
  const SequencerOptions& sequencer_options() const { return seq_options_; }

  // Realtime mode: a ticker thread steps the machine against the wall clock.
  void start_realtime(double speed = 1.0);
  void stop_realtime();
  bool realtime() const { return ticker_.joinable(); }

  std::vector<EventMessage> events() const;
  // Events with sequence number >= seq (the first event ever logged is 0).
  std::vector<EventMessage> events_since(std::uint64_t seq) const;
  std::uint64_t event_seq() const;
  std::string events_ndjson() const;
  std::vector<SafetyAction> safety_log() const;

  // Direct access for tests and the benchmark harness; the caller serializes.
  PhysicalEquipment& pe() { return pe_; }
  const PhysicalEquipment& pe() const { return pe_; }
  Vme& vme() { return vme_; }
  const Vme& vme() const { return vme_; }
  Vve& vve() { return vve_; }
  const Vve& vve() const { return vve_; }
  Vde& vde() { return vde_; }
  const Vde& vde() const { return vde_; }
  Vne& vne() { return vne_; }
  const Vne& vne() const { return vne_; }
  const LogicalState& logic() const { return ls_; }
  DicingSequencer& sequencer() { return seq_; }
  const DicingSequencer& sequencer() const { return seq_; }
  const LayerConfig& layer_config() const { return layers_; }
  const MachineConfig& config() const { return config_; }
  std::recursive_mutex& mutex() const { return mutex_; }

  struct Agents {
    std::size_t basic = 0;
    std::size_t logic = 0;
    std::size_t process = 0;
    std::size_t display = 0;
    std::size_t gateway = 0;
    std::size_t command = 0;
  };
  const Agents& agents() const { return agents_; }

 private:
  struct Task {
    std::string name;
    std::size_t agent = 0;
    int period = 1;
    TaskFn fn;
  };

  void tick_once();
  DisplaySnapshot compose() const;
  void log(Severity s, std::string code, std::string text);
  void drain_outbox();
  void handle_orders();
  void send_report();
  CommandAck guard_manual(std::size_t axis) const;

  MachineConfig config_;
  LayerConfig layers_;
  PhysicalEquipment pe_;
  Vme vme_;
  Vve vve_;
  Vde vde_;
  Vne vne_;
  VeProcessIo io_;
  DicingSequencer seq_;
  LogicLayer ll_;
  LogicalState ls_;
  Agents agents_;

  DicingRecipe recipe_;
  SequencerOptions seq_options_;
  std::vector<Task> tasks_;
  std::uint64_t bl_cycles_ = 0;

  std::vector<EventMessage> events_;
  std::size_t reported_events_ = 0;
  std::vector<SafetyAction> safety_;
  DisplaySnapshot display_;

  ProcessPhase last_phase_ = ProcessPhase::idle;
  std::uint64_t working_ticks_ = 0;
  std::uint64_t last_report_tick_ = 0;

  mutable std::recursive_mutex mutex_;
  std::jthread ticker_;
};

std::string to_json_line(const EventMessage& e);

}  // namespace dicer
