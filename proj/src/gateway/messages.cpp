#include "dicer/gateway/messages.hpp"

#include <stdexcept>

#include "dicer/gateway/png.hpp"

namespace dicer {

namespace {

using nlohmann::json;

json axis_json(std::size_t i, const AxisStatus& a) {
  return {{"index", i},
          {"name", axis_name(i)},
          {"pos", a.pos},
          {"vel", a.vel},
          {"err", a.err},
          {"flags",
           {{"homLim", a.hom_lim},
            {"hwLimN", a.hw_lim_n},
            {"swLimN", a.sw_lim_n},
            {"hwLimP", a.hw_lim_p},
            {"swLimP", a.sw_lim_p},
            {"moving", a.moving},
            {"decel", a.decel},
            {"stall", a.stall},
            {"drvFault", a.drv_fault},
            {"inPosition", a.in_position},
            {"cmdError", a.cmd_error},
            {"emergency", a.emergency}}},
          {"last_update_tick", a.last_update_tick}};
}

json frame_json(int ch, const ChannelStatus& c, bool include_pixels) {
  json j{{"channel", ch},
         {"live", c.live},
         {"frame_count", c.frame_count},
         {"score", c.score ? json(*c.score) : json(nullptr)},
         {"found", c.found},
         {"found_dx", c.found_dx},
         {"found_dy", c.found_dy},
         {"edge_found", c.edge_found},
         {"edge_position", c.edge_position},
         {"processing_time_s", c.processing_time_s},
         {"not_found_count", c.not_found_count}};
  const FrameBuffer& f = c.last_frame;
  if (f.empty()) {
    j["image"] = nullptr;
  } else {
    json img{{"width", f.width()}, {"height", f.height()}, {"capture_tick", f.capture_tick()}};
    img["png_base64"] =
        include_pixels ? json(base64_encode(encode_png_gray(f.width(), f.height(), f.pixels()))) : json(nullptr);
    j["image"] = img;
  }
  return j;
}

std::size_t parse_axis(const json& v) {
  if (v.is_number_integer()) {
    const auto a = v.get<long long>();
    if (a < 0 || a >= static_cast<long long>(kAxisCount)) throw std::invalid_argument("axis out of range");
    return static_cast<std::size_t>(a);
  }
  if (v.is_string()) {
    static constexpr const char* names[kAxisCount] = {"x", "y", "z", "theta"};
    const std::string s = v.get<std::string>();
    for (std::size_t a = 0; a < kAxisCount; ++a) {
      if (s == names[a] || s == axis_name(a)) return a;
    }
  }
  throw std::invalid_argument("axis must be 0..3 or one of x, y, z, theta");
}

int parse_do_port(const json& v) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "spindle") return port::do_spindle;
    if (s == "vacuum") return port::do_vacuum;
    if (s == "coolant") return port::do_coolant;
    if (s == "lamp") return port::do_lamp;
    if (s == "buzzer") return port::do_buzzer;
  }
  throw std::invalid_argument("port must be a number or spindle, vacuum, coolant, lamp, buzzer");
}

double number(const json& params, const char* key) {
  if (!params.contains(key) || !params.at(key).is_number()) {
    throw std::invalid_argument(std::string("missing numeric parameter '") + key + "'");
  }
  return params.at(key).get<double>();
}

const json& need(const json& params, const char* key) {
  if (!params.contains(key)) throw std::invalid_argument(std::string("missing parameter '") + key + "'");
  return params.at(key);
}

}  // namespace

json event_json(const EventMessage& e) {
  return {{"tick", e.tick}, {"severity", to_string(e.severity)}, {"code", e.code}, {"text", e.text}};
}

json snapshot_message(const DisplaySnapshot& s, bool include_frames) {
  json axes = json::array();
  for (std::size_t i = 0; i < kAxisCount; ++i) axes.push_back(axis_json(i, s.axes[i]));

  json di = json::array();
  json dout = json::array();
  for (int p = 0; p < kDisplayedDi; ++p) di.push_back(static_cast<bool>(s.daq.di.at(static_cast<std::size_t>(p))));
  for (int p = 0; p < kDisplayedDo; ++p) dout.push_back(static_cast<bool>(s.daq.do_.at(static_cast<std::size_t>(p))));

  json errors = json::object();
  for (const auto& c : LogicalState::error_codes()) errors[c] = *s.logic.flag(c);

  json events = json::array();
  for (const auto& e : s.events) events.push_back(event_json(e));

  json frames = json::array();
  for (int ch = 0; ch < Vve::kChannels; ++ch) {
    frames.push_back(frame_json(ch, s.vision[static_cast<std::size_t>(ch)], include_frames));
  }

  json kerf = nullptr;
  if (s.kerf) kerf = {{"pass", s.kerf->pass}, {"failed_lines", s.kerf->failed_lines}, {"offsets_px", s.kerf->offsets_px}};

  return {{"tick", s.tick},
          {"sim_time_s", s.sim_time_s},
          {"axes", axes},
          {"dio", {{"di", di}, {"do", dout}}},
          {"ai", s.daq.ai},
          {"vacuum_kPa", s.logic.vacuum_pressure_kpa},
          {"errors", errors},
          {"any_error", s.logic.any_error()},
          {"interlocks",
           {{"sal", s.logic.sal}, {"vacuum_demand", s.logic.vacuum_demand}, {"coolant_demand", s.logic.coolant_demand}}},
          {"process",
           {{"phase", to_string(s.process.phase)},
            {"resume_phase", to_string(s.process.resume_phase)},
            {"step_index", s.process.step_index},
            {"total_steps", s.process.total_steps},
            {"strokes_completed", s.strokes_completed},
            {"abort_reason", s.process.abort_reason}}},
          {"alignment",
           {{"dx", s.alignment.dx},
            {"dy", s.alignment.dy},
            {"dtheta_deg", s.alignment.dtheta_deg},
            {"residual_dtheta_deg", s.alignment.residual_dtheta_deg},
            {"residual_score", s.alignment.residual_score},
            {"converged", s.alignment.converged}}},
          {"kerf", kerf},
          {"events", events},
          {"event_seq", s.event_seq},
          {"cim",
           {{"product_id", s.cim.product_id},
            {"piece_count", s.cim.piece_count},
            {"working_time_s", s.cim.working_time_s},
            {"tool_usage", {{"blade_cuts", s.cim.blade_cuts}}}}},
          {"frames", frames}};
}

std::string serialize_snapshot(const DisplaySnapshot& s, bool include_frames) {
  return snapshot_message(s, include_frames).dump();
}

const char* to_string(CommandType t) {
  switch (t) {
    case CommandType::jog_start: return "jog_start";
    case CommandType::jog_stop: return "jog_stop";
    case CommandType::move_abs: return "move_abs";
    case CommandType::home: return "home";
    case CommandType::set_do: return "set_do";
    case CommandType::set_ao: return "set_ao";
    case CommandType::process_start: return "process_start";
    case CommandType::process_suspend: return "process_suspend";
    case CommandType::process_resume: return "process_resume";
    case CommandType::process_stop: return "process_stop";
    case CommandType::clear_error: return "clear_error";
    case CommandType::load_recipe: return "load_recipe";
    case CommandType::verify_kerf: return "verify_kerf";
  }
  return "?";
}

CommandParse parse_command(const std::string& body) {
  CommandParse out;
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error&) {
    out.error = "body is not valid JSON";
    return out;
  }
  if (!j.is_object()) {
    out.error = "command must be a JSON object";
    return out;
  }
  if (j.contains("request_id") && j["request_id"].is_string()) out.request_id = j["request_id"].get<std::string>();
  if (out.request_id.empty()) {
    out.error = "missing request_id";
    return out;
  }
  if (!j.contains("type") || !j["type"].is_string()) {
    out.error = "missing command type";
    return out;
  }
  const std::string type = j["type"].get<std::string>();
  const json params = j.value("params", json::object());
  if (!params.is_object()) {
    out.error = "params must be an object";
    return out;
  }

  CommandMessage c;
  c.request_id = out.request_id;
  try {
    bool known = false;
    for (int k = 0; k <= static_cast<int>(CommandType::verify_kerf); ++k) {
      if (type == to_string(static_cast<CommandType>(k))) {
        c.type = static_cast<CommandType>(k);
        known = true;
      }
    }
    if (!known) throw std::invalid_argument("unknown command type '" + type + "'");
    switch (c.type) {
      case CommandType::jog_start:
        c.axis = parse_axis(need(params, "axis"));
        c.v = number(params, "v");
        break;
      case CommandType::jog_stop:
      case CommandType::home:
        c.axis = parse_axis(need(params, "axis"));
        break;
      case CommandType::move_abs:
        c.axis = parse_axis(need(params, "axis"));
        c.position = number(params, "position");
        if (params.contains("v")) c.velocity = number(params, "v");
        break;
      case CommandType::set_do:
        c.port = parse_do_port(need(params, "port"));
        if (!need(params, "value").is_boolean()) throw std::invalid_argument("value must be a boolean");
        c.value = params["value"].get<bool>();
        break;
      case CommandType::set_ao:
        c.port = need(params, "port").get<int>();
        c.volts = number(params, "volts");
        break;
      case CommandType::clear_error:
        if (!need(params, "code").is_string()) throw std::invalid_argument("code must be a string");
        c.code = params["code"].get<std::string>();
        break;
      case CommandType::load_recipe:
        c.recipe = params.contains("recipe") ? params["recipe"].get<DicingRecipe>() : params.get<DicingRecipe>();
        break;
      case CommandType::verify_kerf:
        c.lines = need(params, "lines").get<std::vector<int>>();
        break;
      default:
        break;
    }
  } catch (const std::exception& e) {
    out.error = e.what();
    return out;
  }
  out.command = std::move(c);
  return out;
}

json response_json(const CommandResponse& r) {
  return {{"request_id", r.request_id}, {"status", r.accepted ? "accepted" : "rejected"}, {"reason", r.reason}};
}

CommandResponse execute_command(Machine& m, const CommandMessage& c) {
  CommandAck ack;
  switch (c.type) {
    case CommandType::jog_start: ack = m.jog_start(c.axis, c.v); break;
    case CommandType::jog_stop: ack = m.jog_stop(c.axis); break;
    case CommandType::move_abs: ack = m.move_abs(c.axis, c.position, c.velocity); break;
    case CommandType::home: ack = m.home(c.axis); break;
    case CommandType::set_do: ack = m.set_do(c.port, c.value); break;
    case CommandType::set_ao: ack = m.set_ao(c.port, c.volts); break;
    case CommandType::process_start: ack = m.process_start(); break;
    case CommandType::process_suspend: ack = m.process_suspend(); break;
    case CommandType::process_resume: ack = m.process_resume(); break;
    case CommandType::process_stop: ack = m.process_stop(); break;
    case CommandType::clear_error: ack = m.clear_error(c.code); break;
    case CommandType::load_recipe: ack = m.load_recipe(c.recipe); break;
    case CommandType::verify_kerf: ack = m.verify_kerf(c.lines); break;
  }
  return {c.request_id, ack.accepted, ack.reason};
}

}  // namespace dicer
