#include "dicer/dicing/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace dicer {

Vec2 stage_for(Vec2 target, Vec2 w, double theta_deg, const AlignmentEstimate& est) {
  return target - rotate(est.to_chuck(w), theta_deg);
}

Vec2 chuck_point(Vec2 m, Vec2 stage, double theta_deg) { return rotate(m - stage, -theta_deg); }

AlignmentEstimate estimate_from_fiducials(Vec2 ca, Vec2 cb, Vec2 wa, Vec2 wb) {
  const Vec2 dc = cb - ca;
  const Vec2 dw = wb - wa;
  AlignmentEstimate e;
  e.dtheta_deg = rad_to_deg(std::atan2(dc.y, dc.x) - std::atan2(dw.y, dw.x));
  const Vec2 mid_c = (ca + cb) * 0.5;
  const Vec2 mid_w = (wa + wb) * 0.5;
  const Vec2 d = mid_c - rotate(mid_w, e.dtheta_deg);
  e.dx = d.x;
  e.dy = d.y;
  return e;
}

AlignmentEstimate estimate_from_one(Vec2 c, Vec2 w, double dtheta_deg) {
  const Vec2 d = c - rotate(w, dtheta_deg);
  return {d.x, d.y, dtheta_deg};
}

StrokePlan plan_stroke(const CutStroke& s, const AlignmentEstimate& est, double theta_correction,
                       double wafer_diameter, double overtravel) {
  StrokePlan p;
  const double r = wafer_diameter / 2.0;
  p.half_length = std::sqrt(std::max(0.0, r * r - s.coordinate * s.coordinate)) + overtravel;
  p.theta = theta_correction + (s.direction == CutDirection::y_pass ? 90.0 : 0.0);
  const Vec2 rd = rotate(est.offset(), p.theta);
  p.y = -s.coordinate - rd.y;
  // Blade runs through the wafer from -half_length to +half_length along the line.
  if (s.direction == CutDirection::x_pass) {
    p.x_start = p.half_length - rd.x;
    p.x_end = -p.half_length - rd.x;
  } else {
    p.x_start = -p.half_length - rd.x;
    p.x_end = p.half_length - rd.x;
  }
  return p;
}

}  // namespace dicer
