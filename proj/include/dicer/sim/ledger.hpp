#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dicer {

/// The four physical-equipment classes whose accesses are counted.
enum class DeviceClass : std::uint8_t { motion = 0, vision = 1, daq = 2, net = 3 };

inline constexpr std::size_t kDeviceClassCount = 4;
inline constexpr std::array<DeviceClass, kDeviceClassCount> kDeviceClasses{
    DeviceClass::motion, DeviceClass::vision, DeviceClass::daq, DeviceClass::net};

std::string_view to_string(DeviceClass c);

struct ClassCounts {
  std::array<std::uint64_t, kDeviceClassCount> n{};

  std::uint64_t& operator[](DeviceClass c) { return n[static_cast<std::size_t>(c)]; }
  std::uint64_t operator[](DeviceClass c) const { return n[static_cast<std::size_t>(c)]; }
  std::uint64_t total() const;

  ClassCounts& operator+=(const ClassCounts& other);
  bool operator==(const ClassCounts&) const = default;
};

/// Componentwise difference; callers guarantee `later` dominates `earlier`.
ClassCounts operator-(const ClassCounts& later, const ClassCounts& earlier);

/// Who performed an access. Windows are the agents the layered architecture
/// forbids from touching physical equipment.
enum class AgentKind : std::uint8_t { harness, thread, window };

struct AgentInfo {
  std::string name;
  AgentKind kind = AgentKind::harness;
  bool operator==(const AgentInfo&) const = default;
};

/// Number-of-access counters per device class, binned over simulation ticks
/// and attributed to the agent that performed each access.
class AccessLedger {
 public:
  static constexpr std::size_t kHarnessAgent = 0;

  explicit AccessLedger(std::uint64_t bin_ticks = 1000);

  void record(DeviceClass c, std::uint64_t tick, std::size_t agent = kHarnessAgent);
  void record(DeviceClass c, std::uint64_t tick, std::size_t agent, std::uint64_t count);

  /// Pads the binned series so it covers ticks [0, ticks).
  void close(std::uint64_t ticks);

  std::size_t register_agent(std::string name, AgentKind kind);

  /// Moves counts already recorded for the harness onto another agent; for
  /// rebuilding a ledger from its serialized form. The series is untouched.
  void attribute(std::size_t agent, const ClassCounts& counts);

  std::uint64_t bin_ticks() const { return bin_ticks_; }
  const ClassCounts& totals() const { return totals_; }
  std::uint64_t total(DeviceClass c) const { return totals_[c]; }
  std::uint64_t grand_total() const { return totals_.total(); }
  const std::vector<ClassCounts>& series() const { return series_; }
  const std::vector<AgentInfo>& agents() const { return agents_; }
  const std::vector<ClassCounts>& agent_totals() const { return agent_totals_; }

  std::string mode;
  std::uint64_t seed = 0;
  std::uint64_t ticks = 0;

  bool operator==(const AccessLedger&) const = default;

 private:
  std::uint64_t bin_ticks_;
  ClassCounts totals_;
  std::vector<ClassCounts> series_;
  std::vector<AgentInfo> agents_;
  std::vector<ClassCounts> agent_totals_;
};

}  // namespace dicer
