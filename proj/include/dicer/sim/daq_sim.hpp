#pragma once

#include <cstdint>
#include <vector>

#include "dicer/sim/config.hpp"

namespace dicer {

// Port map of the dicing machine's IO.
namespace port {
inline constexpr int do_spindle = 0;
inline constexpr int do_vacuum = 1;
inline constexpr int do_coolant = 2;
inline constexpr int do_lamp = 3;
inline constexpr int do_buzzer = 4;

inline constexpr int di_spindle_running = 0;
inline constexpr int di_blade_broken = 1;
inline constexpr int di_coolant_flow = 2;
inline constexpr int di_vacuum_ok = 3;
inline constexpr int di_door_open = 4;
inline constexpr int di_air_low = 5;
inline constexpr int di_estop = 6;
inline constexpr int di_lamp_ok = 7;

inline constexpr int ai_vacuum = 0;
inline constexpr int ai_spindle_load = 1;

inline constexpr int ao_lamp_dimmer = 0;
}  // namespace port

enum class IoKind { di, do_, ai, ao };
const char* to_string(IoKind k);

struct DaqBank {
  std::vector<bool> di;
  std::vector<bool> do_;
  std::vector<double> ai;
  std::vector<double> ao;
};

// DAQ board with the plant behind it: spindle, vacuum chuck, coolant, lamp.
class DaqSim {
 public:
  explicit DaqSim(const PlantConfig& plant);

  bool read_di(int port) const;
  bool read_do(int port) const;
  double read_ai(int port) const;
  double read_ao(int port) const;
  void write_do(int port, bool value);
  void write_ao(int port, double volts);

  void step(double dt);

  const DaqBank& bank() const { return bank_; }
  const PlantConfig& plant() const { return plant_; }

  // Harness-side faults; none of these are accesses.
  void set_spindle_failed(bool f) { spindle_failed_ = f; }
  void set_blade_broken(bool b);
  void set_coolant_blocked(bool b) { coolant_blocked_ = b; }
  void set_vacuum_leak(bool l) { vacuum_leak_ = l; }
  void set_estop_button(bool pressed);
  void set_door_open(bool open);
  void set_air_low(bool low);

 private:
  void check(IoKind kind, int port) const;
  void update_inputs();

  PlantConfig plant_;
  DaqBank bank_;
  double spindle_on_s_ = 0.0;
  double coolant_on_s_ = 0.0;
  bool spindle_failed_ = false;
  bool coolant_blocked_ = false;
  bool vacuum_leak_ = false;
};

}  // namespace dicer
