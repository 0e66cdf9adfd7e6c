#pragma once

#include <cstdint>

namespace dicer {

/// Bit layout of the 16-bit motion status register. Bits 12..15 are reserved
/// and always zero.
namespace status_bit {
inline constexpr std::uint16_t home_limit = 1u << 0;
inline constexpr std::uint16_t hw_lim_neg = 1u << 1;
inline constexpr std::uint16_t hw_lim_pos = 1u << 2;
inline constexpr std::uint16_t sw_lim_neg = 1u << 3;
inline constexpr std::uint16_t sw_lim_pos = 1u << 4;
inline constexpr std::uint16_t moving = 1u << 5;
inline constexpr std::uint16_t decel = 1u << 6;
inline constexpr std::uint16_t stall = 1u << 7;
inline constexpr std::uint16_t drive_fault = 1u << 8;
inline constexpr std::uint16_t in_position = 1u << 9;
inline constexpr std::uint16_t cmd_error = 1u << 10;
inline constexpr std::uint16_t emergency = 1u << 11;
inline constexpr std::uint16_t reserved_mask = 0xF000u;
}  // namespace status_bit

struct MotionFlags {
  bool home_limit = false;
  bool hw_lim_neg = false;
  bool hw_lim_pos = false;
  bool sw_lim_neg = false;
  bool sw_lim_pos = false;
  bool moving = false;
  bool decel = false;
  bool stall = false;
  bool drive_fault = false;
  bool in_position = false;
  bool cmd_error = false;
  bool emergency = false;

  bool operator==(const MotionFlags&) const = default;
};

using RawStatusWord = std::uint16_t;

RawStatusWord encode_status(const MotionFlags& flags);
MotionFlags decode_status(RawStatusWord word);

}  // namespace dicer
