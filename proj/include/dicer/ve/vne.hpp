#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dicer/sim/equipment.hpp"

namespace dicer {

enum class OrderKind { start_process, stop_process, change_tool, event_message };
const char* to_string(OrderKind k);

struct Order {
  OrderKind kind = OrderKind::event_message;
  std::string text;  // event_message
  std::string tool;  // change_tool
  bool operator==(const Order&) const = default;
};

// Machine-to-factory status record.
struct CimReport {
  std::string product_id;
  std::int64_t piece_count = 0;
  double working_time_s = 0.0;
  std::vector<std::string> events;
  std::int64_t blade_cuts = 0;
  bool operator==(const CimReport&) const = default;
};

// One JSON object on a single line, keys in canonical order, no trailing newline.
std::string encode_cim(const CimReport& r);
CimReport decode_cim(std::string_view line);

std::string encode_order(const Order& o);
std::optional<Order> decode_order(std::string_view packet);

struct VneState {
  std::deque<Order> orders;
  std::uint64_t packets_in = 0;
  std::uint64_t malformed = 0;
  std::vector<std::string> malformed_log;
  std::uint64_t reports_sent = 0;
  CimReport counters;
  std::uint64_t last_update_tick = 0;
};

// Virtual network equipment.
class Vne {
 public:
  explicit Vne(PhysicalEquipment& pe);

  // Drains the inbound queue: max(1, k) reads for k waiting packets.
  void poll();
  void report(const CimReport& r);
  std::optional<Order> take_order();

  const VneState& state() const { return state_; }
  CimReport& counters() { return state_.counters; }

 private:
  PhysicalEquipment& pe_;
  VneState state_;
};

}  // namespace dicer
