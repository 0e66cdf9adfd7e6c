#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dicer/dicing/recipe.hpp"
#include "dicer/layers/machine.hpp"
#include "json.hpp"

namespace dicer {

inline constexpr int kDisplayedDi = 8;
inline constexpr int kDisplayedDo = 5;

nlohmann::json event_json(const EventMessage& e);

// The gateway's view of a display snapshot. Keys are emitted in sorted order,
// so equal snapshots serialize to equal bytes.
nlohmann::json snapshot_message(const DisplaySnapshot& s, bool include_frames = true);
std::string serialize_snapshot(const DisplaySnapshot& s, bool include_frames = true);

enum class CommandType {
  jog_start,
  jog_stop,
  move_abs,
  home,
  set_do,
  set_ao,
  process_start,
  process_suspend,
  process_resume,
  process_stop,
  clear_error,
  load_recipe,
  verify_kerf
};
const char* to_string(CommandType t);

struct CommandMessage {
  CommandType type = CommandType::process_start;
  std::string request_id;
  std::size_t axis = 0;
  double v = 0.0;
  std::optional<double> velocity;
  double position = 0.0;
  int port = 0;
  bool value = false;
  double volts = 0.0;
  std::string code;
  DicingRecipe recipe;
  std::vector<int> lines;
};

struct CommandParse {
  std::optional<CommandMessage> command;
  std::string request_id;  // whatever could be recovered
  std::string error;
};

// {type, params, request_id}. Axes may be given as 0..3 or x/y/z/theta and
// DO ports by number or spindle/vacuum/coolant/lamp/buzzer.
CommandParse parse_command(const std::string& body);

struct CommandResponse {
  std::string request_id;
  bool accepted = false;
  std::string reason;
};
nlohmann::json response_json(const CommandResponse& r);

CommandResponse execute_command(Machine& m, const CommandMessage& c);

}  // namespace dicer
