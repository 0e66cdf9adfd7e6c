#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dicer/sim/ledger.hpp"
#include "json.hpp"

namespace dicer {

struct Stat {
  double max = 0.0;
  double avg = 0.0;
  bool operator==(const Stat&) const = default;
};

struct ClassComparison {
  std::string name;  // motion, vision, daq, net or total
  Stat typical;
  Stat proposed;
  Stat difference;  // proposed - typical
  int rate_max = 0;  // percent, truncated toward zero
  int rate_avg = 0;
  bool operator==(const ClassComparison&) const = default;
};

struct BenchReport {
  std::uint64_t seed = 0;
  std::uint64_t ticks = 0;
  std::uint64_t bin_ticks = 0;
  std::vector<ClassComparison> rows;

  const ClassComparison& row(const std::string& name) const;
  bool operator==(const BenchReport&) const = default;
};

// 100 * difference / typical, truncated toward zero; 0 when typical is 0.
int rate_percent(double difference, double typical);

ClassComparison compare_stats(const std::string& name, const Stat& typical, const Stat& proposed);

// Max and mean over the binned series; class nullopt means the total.
Stat summarize(const std::vector<ClassCounts>& series, std::optional<DeviceClass> c);

// Throws std::invalid_argument when the ledgers cover different spans.
BenchReport compare(const AccessLedger& typical, const AccessLedger& proposed);

nlohmann::json report_to_json(const BenchReport& r);
BenchReport report_from_json(const nlohmann::json& j);

// Single-run report: {mode, seed, ticks, bin_ticks, bins, totals, summary}.
nlohmann::json ledger_to_json(const AccessLedger& l, double tick_s = 0.001);
AccessLedger ledger_from_json(const nlohmann::json& j);
std::string ledger_csv(const AccessLedger& l, double tick_s = 0.001);

std::string dump_canonical(const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);
// Throws std::runtime_error when the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

// Writes <dir>/<mode>.json and <dir>/<mode>.csv; returns the JSON path.
std::string emit_run(const AccessLedger& l, const std::string& dir);
void emit_report(const BenchReport& r, const std::string& path);
BenchReport load_report(const std::string& path);

}  // namespace dicer
