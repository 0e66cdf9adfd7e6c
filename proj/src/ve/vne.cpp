#include "dicer/ve/vne.hpp"

#include <stdexcept>

#include "json.hpp"

namespace dicer {

using nlohmann::json;

const char* to_string(OrderKind k) {
  switch (k) {
    case OrderKind::start_process: return "start_process";
    case OrderKind::stop_process: return "stop_process";
    case OrderKind::change_tool: return "change_tool";
    case OrderKind::event_message: return "event_message";
  }
  return "?";
}

std::string encode_cim(const CimReport& r) {
  json j{{"product_id", r.product_id},
         {"piece_count", r.piece_count},
         {"working_time_s", r.working_time_s},
         {"events", r.events},
         {"tool_usage", {{"blade_cuts", r.blade_cuts}}}};
  return j.dump();
}

CimReport decode_cim(std::string_view line) {
  const json j = json::parse(line);
  CimReport r;
  r.product_id = j.at("product_id").get<std::string>();
  r.piece_count = j.at("piece_count").get<std::int64_t>();
  r.working_time_s = j.at("working_time_s").get<double>();
  r.events = j.at("events").get<std::vector<std::string>>();
  r.blade_cuts = j.at("tool_usage").at("blade_cuts").get<std::int64_t>();
  return r;
}

std::string encode_order(const Order& o) {
  json j{{"order", to_string(o.kind)}};
  if (o.kind == OrderKind::change_tool) j["tool"] = o.tool;
  if (o.kind == OrderKind::event_message) j["text"] = o.text;
  return j.dump();
}

std::optional<Order> decode_order(std::string_view packet) {
  const json j = json::parse(packet, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  auto it = j.find("order");
  if (it == j.end() || !it->is_string()) return std::nullopt;
  const std::string name = it->get<std::string>();
  Order o;
  if (name == "start_process") {
    o.kind = OrderKind::start_process;
  } else if (name == "stop_process") {
    o.kind = OrderKind::stop_process;
  } else if (name == "change_tool") {
    o.kind = OrderKind::change_tool;
    o.tool = j.value("tool", std::string{});
  } else if (name == "event_message") {
    o.kind = OrderKind::event_message;
    o.text = j.value("text", std::string{});
  } else {
    return std::nullopt;
  }
  return o;
}

Vne::Vne(PhysicalEquipment& pe) : pe_(pe) {}

void Vne::poll() {
  NetPoll r;
  do {
    r = pe_.pe_net_poll();
    if (!r.packet) break;
    state_.packets_in++;
    if (auto o = decode_order(*r.packet)) {
      state_.orders.push_back(std::move(*o));
    } else {
      state_.malformed++;
      state_.malformed_log.push_back(*r.packet);
    }
  } while (r.remaining > 0);
  state_.last_update_tick = pe_.tick();
}

void Vne::report(const CimReport& r) {
  pe_.pe_net_send(encode_cim(r));
  state_.reports_sent++;
}

std::optional<Order> Vne::take_order() {
  if (state_.orders.empty()) return std::nullopt;
  Order o = std::move(state_.orders.front());
  state_.orders.pop_front();
  return o;
}

}  // namespace dicer
