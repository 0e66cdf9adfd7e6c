#include "dicer/sim/ledger.hpp"

#include <stdexcept>

namespace dicer {

std::string_view to_string(DeviceClass c) {
  switch (c) {
    case DeviceClass::motion: return "motion";
    case DeviceClass::vision: return "vision";
    case DeviceClass::daq: return "daq";
    case DeviceClass::net: return "net";
  }
  return "unknown";
}

std::uint64_t ClassCounts::total() const {
  std::uint64_t sum = 0;
  for (auto v : n) sum += v;
  return sum;
}

ClassCounts& ClassCounts::operator+=(const ClassCounts& other) {
  for (std::size_t i = 0; i < kDeviceClassCount; ++i) n[i] += other.n[i];
  return *this;
}

ClassCounts operator-(const ClassCounts& later, const ClassCounts& earlier) {
  ClassCounts out;
  for (std::size_t i = 0; i < kDeviceClassCount; ++i) out.n[i] = later.n[i] - earlier.n[i];
  return out;
}

AccessLedger::AccessLedger(std::uint64_t bin_ticks) : bin_ticks_(bin_ticks) {
  if (bin_ticks_ == 0) throw std::invalid_argument("ledger bin width must be positive");
  agents_.push_back({"harness", AgentKind::harness});
  agent_totals_.emplace_back();
}

void AccessLedger::record(DeviceClass c, std::uint64_t tick, std::size_t agent) {
  const std::size_t bin = static_cast<std::size_t>(tick / bin_ticks_);
  if (bin >= series_.size()) series_.resize(bin + 1);
  ++series_[bin][c];
  ++totals_[c];
  ++agent_totals_.at(agent)[c];
}

void AccessLedger::close(std::uint64_t run_ticks) {
  ticks = run_ticks;
  const std::size_t bins = static_cast<std::size_t>((run_ticks + bin_ticks_ - 1) / bin_ticks_);
  if (bins > series_.size()) series_.resize(bins);
}

void AccessLedger::record(DeviceClass c, std::uint64_t tick, std::size_t agent, std::uint64_t count) {
  const std::size_t bin = static_cast<std::size_t>(tick / bin_ticks_);
  if (bin >= series_.size()) series_.resize(bin + 1);
  series_[bin][c] += count;
  totals_[c] += count;
  agent_totals_.at(agent)[c] += count;
}

void AccessLedger::attribute(std::size_t agent, const ClassCounts& counts) {
  ClassCounts& h = agent_totals_.at(kHarnessAgent);
  for (std::size_t c = 0; c < kDeviceClassCount; ++c) {
    if (counts.n[c] > h.n[c]) throw std::invalid_argument("attributed counts exceed the unattributed total");
  }
  h = h - counts;
  agent_totals_.at(agent) += counts;
}

std::size_t AccessLedger::register_agent(std::string name, AgentKind kind) {
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i].name == name) {
      if (agents_[i].kind != kind) throw std::invalid_argument("agent re-registered with another kind: " + name);
      return i;
    }
  }
  agents_.push_back({std::move(name), kind});
  agent_totals_.emplace_back();
  return agents_.size() - 1;
}

}  // namespace dicer
