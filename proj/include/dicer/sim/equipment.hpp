#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicer/sim/config.hpp"
#include "dicer/sim/daq_sim.hpp"
#include "dicer/sim/frame_grabber_sim.hpp"
#include "dicer/sim/image.hpp"
#include "dicer/sim/ledger.hpp"
#include "dicer/sim/motion_sim.hpp"
#include "dicer/sim/network_sim.hpp"
#include "dicer/sim/wafer_sim.hpp"

namespace dicer {

enum class ClockMode { lockstep, realtime };

struct SimClock {
  std::uint64_t tick = 0;
  double tick_duration = 0.001;
  ClockMode mode = ClockMode::lockstep;
  double time_s() const { return static_cast<double>(tick) * tick_duration; }
};

// Thrown when an agent that must not touch physical equipment does.
class AccessViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct TrajectorySample {
  std::uint64_t tick = 0;
  std::array<double, kAxisCount> position{};
  std::array<double, kAxisCount> velocity{};
};

// The physical equipment of the machine: motion controller, framegrabber,
// DAQ board and network card. Every pe_* call is one access in the ledger,
// attributed to the agent currently acting. Stepping is not an access.
class PhysicalEquipment {
 public:
  explicit PhysicalEquipment(const MachineConfig& config, const Misalignment& misalignment = {},
                             std::uint64_t bin_ticks = 1000);

  PhysicalEquipment(const PhysicalEquipment&) = delete;
  PhysicalEquipment& operator=(const PhysicalEquipment&) = delete;

  const MachineConfig& config() const { return config_; }
  const SimClock& clock() const { return clock_; }
  std::uint64_t tick() const { return clock_.tick; }
  void set_clock_mode(ClockMode m) { clock_.mode = m; }

  AccessLedger& ledger() { return ledger_; }
  const AccessLedger& ledger() const { return ledger_; }

  std::size_t register_agent(std::string name, AgentKind kind) { return ledger_.register_agent(std::move(name), kind); }
  std::size_t current_agent() const { return agent_; }

  class AgentScope {
   public:
    AgentScope(PhysicalEquipment& pe, std::size_t agent) : pe_(&pe), prev_(pe.agent_) { pe.agent_ = agent; }
    ~AgentScope() { pe_->agent_ = prev_; }
    AgentScope(const AgentScope&) = delete;
    AgentScope& operator=(const AgentScope&) = delete;

   private:
    PhysicalEquipment* pe_;
    std::size_t prev_;
  };
  [[nodiscard]] AgentScope act_as(std::size_t agent) { return AgentScope(*this, agent); }

  // When set, any pe_* call made while a window agent acts throws AccessViolation.
  void set_window_access_forbidden(bool f) { forbid_windows_ = f; }
  bool window_access_forbidden() const { return forbid_windows_; }

  CommandAck pe_motion_command(std::size_t axis, const MotionProfileSpec& spec);
  MotionReading pe_motion_read_status(std::size_t axis);

  FrameBuffer pe_fg_capture(int channel);
  FgStatus pe_fg_read_status(int channel);
  PatternMatch pe_fg_find_pattern(const FrameBuffer& frame, const FrameBuffer& templ);
  EdgeResult pe_fg_find_edge(const FrameBuffer& frame, GrooveAxis axis, double expected_px, double window_px);

  bool pe_daq_read_di(int port);
  bool pe_daq_read_do(int port);
  double pe_daq_read_ai(int port);
  double pe_daq_read_ao(int port);
  void pe_daq_write_do(int port, bool value);
  void pe_daq_write_ao(int port, double volts);

  void pe_net_send(std::string packet);
  NetPoll pe_net_poll();

  void step(std::uint64_t n_ticks = 1);

  // Harness access for fault injection and inspection; never counted.
  MotionControllerSim& motion() { return mc_; }
  const MotionControllerSim& motion() const { return mc_; }
  DaqSim& daq() { return daq_; }
  const DaqSim& daq() const { return daq_; }
  NetworkSim& network() { return net_; }
  FrameGrabberSim& framegrabber() { return fg_; }
  const FrameGrabberSim& framegrabber() const { return fg_; }
  WaferSim& wafer() { return wafer_; }
  const WaferSim& wafer() const { return wafer_; }
  void set_emergency(bool on) { mc_.set_emergency(on); }

  Vec2 stage() const;
  double theta() const;
  // Wafer-frame point currently under the blade.
  Vec2 blade_on_wafer() const;

  void enable_trajectory_log(bool on) { log_trajectory_ = on; }
  const std::vector<TrajectorySample>& trajectory() const { return trajectory_; }

 private:
  void count(DeviceClass c);
  void track_cut();

  MachineConfig config_;
  SimClock clock_;
  AccessLedger ledger_;
  std::size_t agent_ = AccessLedger::kHarnessAgent;
  bool forbid_windows_ = false;

  MotionControllerSim mc_;
  FrameGrabberSim fg_;
  DaqSim daq_;
  NetworkSim net_;
  WaferSim wafer_;

  bool cutting_ = false;
  Vec2 cut_start_;
  double cut_min_z_ = 0.0;
  double cut_max_feed_ = 0.0;

  bool log_trajectory_ = false;
  std::vector<TrajectorySample> trajectory_;
};

}  // namespace dicer
