#include "dicer/sim/wafer_sim.hpp"

#include <cmath>

namespace dicer {

const char* to_string(CutDirection d) { return d == CutDirection::x_pass ? "x_pass" : "y_pass"; }

Vec2 WaferSim::wafer_to_chuck(Vec2 w) const {
  return rotate(w, misalignment_.dtheta_deg) + Vec2{misalignment_.dx, misalignment_.dy};
}

Vec2 WaferSim::chuck_to_wafer(Vec2 c) const {
  return rotate(c - Vec2{misalignment_.dx, misalignment_.dy}, -misalignment_.dtheta_deg);
}

Vec2 WaferSim::wafer_to_machine(Vec2 w, Vec2 stage, double theta_deg) const {
  return rotate(wafer_to_chuck(w), theta_deg) + stage;
}

Vec2 WaferSim::machine_to_wafer(Vec2 m, Vec2 stage, double theta_deg) const {
  return chuck_to_wafer(rotate(m - stage, -theta_deg));
}

bool WaferSim::in_cross(Vec2 p, const WaferGeometry& g) {
  const double ax = std::abs(p.x), ay = std::abs(p.y);
  return (ax <= g.cross_arm && ay <= g.cross_half_width) || (ay <= g.cross_arm && ax <= g.cross_half_width);
}

double WaferSim::shade_at(Vec2 w, const std::vector<CutRecordEntry>& cuts) const {
  if (!on_wafer(w)) return shade::chuck;
  const double half_kerf = geometry_.kerf_width / 2.0;
  for (const auto& c : cuts) {
    const double across = c.direction == CutDirection::x_pass ? w.y : w.x;
    const double along = c.direction == CutDirection::x_pass ? w.x : w.y;
    if (std::abs(across - c.coordinate) <= half_kerf && along >= c.from && along <= c.to) return shade::groove;
  }
  if (!blank_ && (in_cross(w - geometry_.fiducial_a, geometry_) || in_cross(w - geometry_.fiducial_b, geometry_))) {
    return shade::fiducial;
  }
  return shade::wafer;
}

}  // namespace dicer
