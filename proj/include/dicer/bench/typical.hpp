#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "dicer/bench/workload.hpp"
#include "dicer/dicing/sequencer.hpp"
#include "dicer/sim/equipment.hpp"

namespace dicer {

// Process I/O that goes straight to the boards whenever the process needs a
// value. The motion wait loop reads one axis status per cycle.
class DirectIo : public ProcessIo {
 public:
  DirectIo(PhysicalEquipment& pe, std::map<std::string, FrameBuffer> templates);

  CommandAck move(std::size_t axis, double target, double v) override;
  bool settled(std::size_t axis) override;
  PatternMatch find(int channel, const std::string& template_id) override;
  EdgeResult find_edge(int channel, GrooveAxis axis, double expected_px, double window_px) override;
  void set_do(int port, bool on) override;
  bool di(int port) override;
  double vacuum_kpa() override;
  void stop_all() override;

 private:
  PhysicalEquipment& pe_;
  std::map<std::string, FrameBuffer> templates_;
  std::array<std::uint64_t, kAxisCount> issued_{};
  std::array<bool, kAxisCount> settled_{};
  std::uint64_t last_read_tick_ = ~std::uint64_t{0};
};

// The event-based program: windows and threads each read the boards
// directly on their own schedule.
class TypicalController {
 public:
  TypicalController(const MachineConfig& config, const WorkloadSpec& workload, std::uint64_t seed,
                    std::uint64_t bin_ticks = 1000);

  TypicalController(const TypicalController&) = delete;
  TypicalController& operator=(const TypicalController&) = delete;

  CommandAck start();
  void step(std::uint64_t n = 1);

  PhysicalEquipment& pe() { return pe_; }
  const PhysicalEquipment& pe() const { return pe_; }
  const DicingSequencer& sequencer() const { return seq_; }
  std::uint64_t reports_sent() const { return reports_; }

 private:
  struct Periodic {
    std::size_t agent = 0;
    int period = 1;
    int phase = 0;
    bool due(std::uint64_t t) const { return (t + static_cast<std::uint64_t>(phase)) % static_cast<std::uint64_t>(period) == 0; }
  };

  void window(const WindowSpec& w);
  void motion_monitor();
  void io_monitor();
  void net_thread();
  void process_thread();
  void report();

  MachineConfig config_;
  WorkloadSpec workload_;
  PhysicalEquipment pe_;
  DirectIo io_;
  DicingSequencer seq_;

  std::vector<Periodic> windows_;
  Periodic motion_monitor_;
  Periodic io_monitor_;
  Periodic net_;
  std::size_t process_agent_ = 0;
  std::size_t motion_cursor_ = 0;
  std::size_t io_cursor_ = 0;

  ProcessPhase last_phase_ = ProcessPhase::idle;
  std::int64_t pieces_ = 0;
  std::int64_t blade_cuts_ = 0;
  std::uint64_t working_ticks_ = 0;
  std::uint64_t last_report_tick_ = 0;
  std::uint64_t reports_ = 0;
};

}  // namespace dicer
