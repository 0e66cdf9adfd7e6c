#pragma once

#include "dicer/dicing/tool_path.hpp"
#include "dicer/sim/planar.hpp"

namespace dicer {

// Estimated placement of the wafer on the chuck (same convention as Misalignment).
struct AlignmentEstimate {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta_deg = 0.0;

  Vec2 offset() const { return {dx, dy}; }
  Vec2 to_chuck(Vec2 w) const { return rotate(w, dtheta_deg) + offset(); }
};

// Stage XY that puts wafer point w on the machine point `target` with the rotary axis at theta.
Vec2 stage_for(Vec2 target, Vec2 w, double theta_deg, const AlignmentEstimate& est);

// Chuck-frame position of a feature seen at machine point m.
Vec2 chuck_point(Vec2 m, Vec2 stage, double theta_deg);

// Rigid transform that maps the nominal fiducials wa, wb onto their chuck measurements ca, cb.
AlignmentEstimate estimate_from_fiducials(Vec2 ca, Vec2 cb, Vec2 wa, Vec2 wb);

// Translation-only update from a single fiducial, keeping the current rotation.
AlignmentEstimate estimate_from_one(Vec2 c, Vec2 w, double dtheta_deg);

struct StrokePlan {
  double theta = 0.0;
  double y = 0.0;
  double x_start = 0.0;
  double x_end = 0.0;
  double half_length = 0.0;  // along-line extent either side of the wafer centre
};

// Axis targets for one stroke with the blade at the machine origin. theta_correction
// cancels the estimated wafer rotation; y_pass strokes add a quarter turn.
StrokePlan plan_stroke(const CutStroke& s, const AlignmentEstimate& est, double theta_correction,
                       double wafer_diameter, double overtravel);

}  // namespace dicer
