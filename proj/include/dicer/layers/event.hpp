#pragma once

#include <cstdint>
#include <string>

namespace dicer {

enum class Severity { info, warn, error };

inline const char* to_string(Severity s) {
  switch (s) {
    case Severity::info: return "info";
    case Severity::warn: return "warn";
    case Severity::error: return "error";
  }
  return "?";
}

struct EventMessage {
  std::uint64_t tick = 0;
  Severity severity = Severity::info;
  std::string code;
  std::string text;
  bool operator==(const EventMessage&) const = default;
};

}  // namespace dicer
