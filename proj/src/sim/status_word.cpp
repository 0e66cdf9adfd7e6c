#include "dicer/sim/status_word.hpp"

namespace dicer {

RawStatusWord encode_status(const MotionFlags& f) {
  using namespace status_bit;
  RawStatusWord w = 0;
  if (f.home_limit) w |= home_limit;
  if (f.hw_lim_neg) w |= hw_lim_neg;
  if (f.hw_lim_pos) w |= hw_lim_pos;
  if (f.sw_lim_neg) w |= sw_lim_neg;
  if (f.sw_lim_pos) w |= sw_lim_pos;
  if (f.moving) w |= moving;
  if (f.decel) w |= decel;
  if (f.stall) w |= stall;
  if (f.drive_fault) w |= drive_fault;
  if (f.in_position) w |= in_position;
  if (f.cmd_error) w |= cmd_error;
  if (f.emergency) w |= emergency;
  return w;
}

MotionFlags decode_status(RawStatusWord w) {
  using namespace status_bit;
  MotionFlags f;
  f.home_limit = (w & home_limit) != 0;
  f.hw_lim_neg = (w & hw_lim_neg) != 0;
  f.hw_lim_pos = (w & hw_lim_pos) != 0;
  f.sw_lim_neg = (w & sw_lim_neg) != 0;
  f.sw_lim_pos = (w & sw_lim_pos) != 0;
  f.moving = (w & moving) != 0;
  f.decel = (w & decel) != 0;
  f.stall = (w & stall) != 0;
  f.drive_fault = (w & drive_fault) != 0;
  f.in_position = (w & in_position) != 0;
  f.cmd_error = (w & cmd_error) != 0;
  f.emergency = (w & emergency) != 0;
  return f;
}

}  // namespace dicer
