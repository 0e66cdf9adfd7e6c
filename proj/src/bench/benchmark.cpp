#include "dicer/bench/benchmark.hpp"

#include <algorithm>

namespace dicer {

namespace {
MachineConfig seeded(MachineConfig c, std::uint64_t seed) {
  c.image.noise_seed = seed;
  return c;
}
}  // namespace

LayerConfig bench_layer_config(const WorkloadSpec& w) {
  LayerConfig lc;
  lc.daq_sample_divisor = w.daq_sample_divisor;
  lc.vision_sample_divisor = w.vision_sample_divisor;
  lc.net_sample_divisor = w.net_sample_divisor;
  lc.live_channels = {w.live_channels > 0, w.live_channels > 1};
  return lc;
}

BenchmarkRun::BenchmarkRun(const WorkloadSpec& workload, ArchitectureMode mode, std::uint64_t seed,
                           const MachineConfig& config, std::uint64_t bin_ticks)
    : mode_(mode), seed_(seed) {
  workload.validate();
  const MachineConfig mc = seeded(config, seed);
  if (mode == ArchitectureMode::typical) {
    typical_ = std::make_unique<TypicalController>(mc, workload, seed, bin_ticks);
    typical_->start();
    return;
  }
  machine_ = std::make_unique<Machine>(mc, bench_layer_config(workload), workload.misalignment, bin_ticks);
  for (const auto& w : workload.windows) {
    machine_->add_task(w.name + "_window", AgentKind::window, w.period_ticks,
                       [](Machine& m) { (void)m.display_snapshot(); });
  }
  SequencerOptions o;
  o.verify_kerf_after_cut = workload.verify_kerf;
  o.vacuum_min_kpa = machine_->layer_config().vacuum_min_kpa;
  machine_->set_sequencer_options(o);
  machine_->load_recipe(workload.recipe);
  machine_->process_start();
}

BenchmarkRun::~BenchmarkRun() = default;

void BenchmarkRun::advance(std::uint64_t n) {
  if (machine_) {
    machine_->step(n);
  } else {
    typical_->step(n);
  }
}

std::uint64_t BenchmarkRun::tick() const { return pe().tick(); }

const DicingSequencer& BenchmarkRun::sequencer() const {
  return machine_ ? machine_->sequencer() : typical_->sequencer();
}

const PhysicalEquipment& BenchmarkRun::pe() const { return machine_ ? machine_->pe() : typical_->pe(); }

bool BenchmarkRun::finished() const { return !sequencer().running(); }

AccessLedger BenchmarkRun::ledger() const {
  AccessLedger l = pe().ledger();
  l.close(tick());
  l.mode = to_string(mode_);
  l.seed = seed_;
  return l;
}

AccessLedger run_benchmark(const WorkloadSpec& workload, ArchitectureMode mode, std::uint64_t ticks,
                           std::uint64_t seed) {
  BenchmarkRun run(workload, mode, seed);
  run.advance(ticks);
  return run.ledger();
}

Comparison run_full_comparison(const WorkloadSpec& workload, std::uint64_t seed) {
  BenchmarkRun typ(workload, ArchitectureMode::typical, seed);
  BenchmarkRun prop(workload, ArchitectureMode::proposed, seed);
  constexpr std::uint64_t kChunk = 1000;
  auto finish = [&](BenchmarkRun& r) {
    while (!r.finished() && r.tick() < workload.max_ticks) r.advance(kChunk);
    return r.tick();
  };
  Comparison c;
  c.typical_done_tick = finish(typ);
  c.proposed_done_tick = finish(prop);
  const std::uint64_t end = std::max(c.typical_done_tick, c.proposed_done_tick);
  typ.advance(end - typ.tick());
  prop.advance(end - prop.tick());
  c.typical = typ.ledger();
  c.proposed = prop.ledger();
  c.typical_state = typ.sequencer().state();
  c.proposed_state = prop.sequencer().state();
  c.typical_strokes = typ.sequencer().strokes_completed();
  c.proposed_strokes = prop.sequencer().strokes_completed();
  return c;
}

}  // namespace dicer
