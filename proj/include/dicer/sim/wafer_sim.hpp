#pragma once

#include <cstdint>
#include <vector>

#include "dicer/sim/planar.hpp"

namespace dicer {

enum class CutDirection { x_pass, y_pass };
const char* to_string(CutDirection d);

// True placement error of the wafer on the chuck: chuck = R(dtheta) * wafer + (dx, dy).
struct Misalignment {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta_deg = 0.0;
  bool operator==(const Misalignment&) const = default;
};

struct WaferGeometry {
  double diameter = 300.0;
  Vec2 fiducial_a{-60.0, 0.0};
  Vec2 fiducial_b{60.0, 0.0};
  double cross_arm = 1.0;         // half length of each cross bar
  double cross_half_width = 0.15;
  double kerf_width = 0.1;
};

// One executed stroke, measured in the wafer frame by the simulator.
struct CutRecordEntry {
  CutDirection direction = CutDirection::x_pass;
  double coordinate = 0.0;  // wafer y of an x_pass, wafer x of a y_pass
  double depth = 0.0;
  double feed = 0.0;
  double from = 0.0;  // extent along the line
  double to = 0.0;
  std::uint64_t tick = 0;
};

namespace shade {
inline constexpr double chuck = 40.0;
inline constexpr double wafer = 140.0;
inline constexpr double fiducial = 220.0;
inline constexpr double groove = 25.0;
}  // namespace shade

class WaferSim {
 public:
  WaferSim() = default;
  WaferSim(const WaferGeometry& geometry, const Misalignment& m) : geometry_(geometry), misalignment_(m) {}

  const WaferGeometry& geometry() const { return geometry_; }
  const Misalignment& misalignment() const { return misalignment_; }
  void set_misalignment(const Misalignment& m) { misalignment_ = m; }

  // Blank wafers carry no fiducials.
  bool blank() const { return blank_; }
  void set_blank(bool b) { blank_ = b; }

  const std::vector<CutRecordEntry>& cuts() const { return cuts_; }
  void append_cut(const CutRecordEntry& e) { cuts_.push_back(e); }
  void clear_cuts() { cuts_.clear(); }

  Vec2 wafer_to_chuck(Vec2 w) const;
  Vec2 chuck_to_wafer(Vec2 c) const;
  // Stage at (sx, sy) with the rotary axis at theta_deg.
  Vec2 wafer_to_machine(Vec2 w, Vec2 stage, double theta_deg) const;
  Vec2 machine_to_wafer(Vec2 m, Vec2 stage, double theta_deg) const;

  bool on_wafer(Vec2 w) const { return norm(w) <= geometry_.diameter / 2.0; }

  // Gray level of the scene at wafer point w, considering only the given cuts.
  double shade_at(Vec2 w, const std::vector<CutRecordEntry>& cuts) const;
  // Cross fiducial centred on the origin; also used to train templates.
  static bool in_cross(Vec2 local, const WaferGeometry& g);

 private:
  WaferGeometry geometry_;
  Misalignment misalignment_;
  bool blank_ = false;
  std::vector<CutRecordEntry> cuts_;
};

}  // namespace dicer
