#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dicer/dicing/recipe.hpp"
#include "dicer/sim/wafer_sim.hpp"
#include "json.hpp"

namespace dicer {

enum class ArchitectureMode { typical, proposed };
const char* to_string(ArchitectureMode m);
ArchitectureMode parse_mode(const std::string& s);

// A window of the operating program. In the typical architecture it reads
// its signals straight from the boards on every refresh; in the proposed one
// it reads the display snapshot.
struct WindowSpec {
  std::string name;
  int period_ticks = 50;
  int motion_reads = 0;
  int di_reads = 0;
  int do_reads = 0;
  bool live_vision = false;  // shows the cameras while images are processed
  bool operator==(const WindowSpec&) const = default;
};

struct WorkloadSpec {
  int live_channels = 2;
  int signals_per_axis = 7;
  int axes = 4;
  int monitored_di = 8;
  int driven_do = 5;
  int alignment_steps = 24;
  int cut_steps = 144;
  std::vector<std::string> error_monitors{"hw_limit", "sw_limit", "drive_fault", "emergency",
                                          "spindle",  "blade",    "vacuum",      "coolant"};

  std::vector<WindowSpec> windows{
      {"main", 50, 28, 8, 5, true},
      {"motion", 50, 28, 0, 0},
      {"io", 50, 0, 8, 5},
  };

  // Typical architecture: monitor threads polling the boards.
  int motion_monitor_period_ticks = 4;
  int motion_monitor_reads = 11;
  int io_monitor_period_ticks = 7;
  int io_monitor_reads = 7;
  int net_poll_period_ticks = 20;

  // Proposed architecture: basic-layer sampling divisors.
  int daq_sample_divisor = 42;
  int vision_sample_divisor = 20;
  int net_sample_divisor = 20;

  bool verify_kerf = true;
  Misalignment misalignment{1.0, -0.5, 0.3};
  DicingRecipe recipe;
  std::uint64_t max_ticks = 3'000'000;

  // Checks the counts against the recipe and periods against zero.
  void validate() const;
  bool operator==(const WorkloadSpec&) const = default;
};

nlohmann::json workload_to_json(const WorkloadSpec& w);

WorkloadSpec parse_workload(const std::string& text);
WorkloadSpec load_workload(const std::string& path);

}  // namespace dicer
