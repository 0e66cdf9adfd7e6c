#pragma once

#include <cstdint>
#include <memory>

#include "dicer/bench/typical.hpp"
#include "dicer/bench/workload.hpp"
#include "dicer/layers/machine.hpp"

namespace dicer {

// Layer configuration the proposed architecture runs the workload with.
LayerConfig bench_layer_config(const WorkloadSpec& w);

// One dicing run of the workload under one architecture. The process is
// started at tick 0.
class BenchmarkRun {
 public:
  BenchmarkRun(const WorkloadSpec& workload, ArchitectureMode mode, std::uint64_t seed,
               const MachineConfig& config = MachineConfig::defaults(), std::uint64_t bin_ticks = 1000);
  ~BenchmarkRun();

  void advance(std::uint64_t n);
  std::uint64_t tick() const;
  bool finished() const;  // the process is no longer running
  const DicingSequencer& sequencer() const;
  const PhysicalEquipment& pe() const;

  // Ledger padded to the current tick and stamped with the run metadata.
  AccessLedger ledger() const;

  Machine* machine() { return machine_.get(); }

 private:
  ArchitectureMode mode_;
  std::uint64_t seed_;
  std::unique_ptr<Machine> machine_;
  std::unique_ptr<TypicalController> typical_;
};

AccessLedger run_benchmark(const WorkloadSpec& workload, ArchitectureMode mode, std::uint64_t ticks,
                           std::uint64_t seed);

struct Comparison {
  AccessLedger typical;
  AccessLedger proposed;
  std::uint64_t typical_done_tick = 0;
  std::uint64_t proposed_done_tick = 0;
  ProcessState typical_state;
  ProcessState proposed_state;
  int typical_strokes = 0;
  int proposed_strokes = 0;
};

// Runs both modes to completion, then extends the shorter run so both ledgers
// cover the same span.
Comparison run_full_comparison(const WorkloadSpec& workload, std::uint64_t seed);

}  // namespace dicer
