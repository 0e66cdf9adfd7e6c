#include "dicer/sim/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dicer {

MotionProfileSpec MotionProfileSpec::trapezoid(double target, double v, double a1, double a2) {
  MotionProfileSpec s;
  s.kind = ProfileKind::trapezoidal;
  s.target = target;
  s.v = v;
  s.a1 = a1;
  s.a2 = a2;
  return s;
}

MotionProfileSpec MotionProfileSpec::scurve(double target, double v, double a1, double a2, double j1,
                                            double j2) {
  MotionProfileSpec s = trapezoid(target, v, a1, a2);
  s.kind = ProfileKind::scurve;
  s.j1 = j1;
  s.j2 = j2;
  return s;
}

MotionProfileSpec MotionProfileSpec::jog(int direction, double v, double a1, double a2) {
  MotionProfileSpec s;
  s.kind = ProfileKind::jog;
  s.direction = direction >= 0 ? 1 : -1;
  s.v = v;
  s.a1 = a1;
  s.a2 = a2;
  return s;
}

MotionProfileSpec MotionProfileSpec::stop(double a2) {
  MotionProfileSpec s;
  s.kind = ProfileKind::jog;
  s.v = 0.0;
  s.a2 = a2;
  return s;
}

MotionProfileSpec MotionProfileSpec::halt() {
  MotionProfileSpec s;
  s.kind = ProfileKind::jog;
  s.v = 0.0;
  s.immediate = true;
  return s;
}

MotionProfileSpec MotionProfileSpec::home(int mode, double v, double v2, double v3, double a1, double a2,
                                          double j1, double j2) {
  MotionProfileSpec s;
  s.kind = ProfileKind::home;
  s.home_mode = mode;
  s.v = v;
  s.v2 = v2;
  s.v3 = v3;
  s.a1 = a1;
  s.a2 = a2;
  s.j1 = j1;
  s.j2 = j2;
  return s;
}

bool MotionProfileSpec::valid() const {
  auto finite_pos = [](double x) { return std::isfinite(x) && x > 0.0; };
  switch (kind) {
    case ProfileKind::trapezoidal:
      return std::isfinite(target) && finite_pos(v) && finite_pos(a1) && finite_pos(a2);
    case ProfileKind::scurve:
      return std::isfinite(target) && finite_pos(v) && finite_pos(a1) && finite_pos(a2) &&
             finite_pos(j1) && finite_pos(j2);
    case ProfileKind::jog:
      if (v == 0.0) return immediate || finite_pos(a2);
      return finite_pos(v) && finite_pos(a1) && finite_pos(a2) && (direction == 1 || direction == -1);
    case ProfileKind::home: {
      bool jerk_ok = (j1 == 0.0 && j2 == 0.0) || (finite_pos(j1) && finite_pos(j2));
      return finite_pos(v) && finite_pos(v2) && finite_pos(v3) && finite_pos(a1) && finite_pos(a2) &&
             jerk_ok;
    }
  }
  return false;
}

namespace {

// Distance covered by a jerk-limited ramp between rest and speed vp.
double scurve_ramp_distance(double vp, double a, double j) {
  const double t = vp * j >= a * a ? vp / a + a / j : 2.0 * std::sqrt(vp / j);
  return 0.5 * vp * t;
}

}  // namespace

PointToPointProfile::PointToPointProfile(const MotionProfileSpec& spec, double p0)
    : p0_(p0), target_(spec.target), sign_(spec.target >= p0 ? 1.0 : -1.0) {
  if (!spec.is_point_to_point() || !spec.valid()) {
    throw std::invalid_argument("point-to-point profile needs a valid trapezoidal or scurve spec");
  }
  const double distance = std::abs(spec.target - p0);
  if (distance == 0.0) return;

  if (spec.kind == ProfileKind::trapezoidal) {
    const double inv = 1.0 / spec.a1 + 1.0 / spec.a2;
    peak_ = spec.v * spec.v * inv / 2.0 > distance ? std::sqrt(2.0 * distance / inv) : spec.v;
    const double ramps = peak_ * peak_ * inv / 2.0;
    add(peak_ / spec.a1, spec.a1, 0.0);
    const double cruise = distance - ramps;
    if (cruise > 0.0) add(cruise / peak_, 0.0, 0.0);
    add(peak_ / spec.a2, -spec.a2, 0.0);
  } else {
    auto ramps = [&](double vp) {
      return scurve_ramp_distance(vp, spec.a1, spec.j1) + scurve_ramp_distance(vp, spec.a2, spec.j2);
    };
    if (ramps(spec.v) <= distance) {
      peak_ = spec.v;
    } else {
      double lo = 0.0;
      double hi = spec.v;
      for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (ramps(mid) > distance ? hi : lo) = mid;
      }
      peak_ = lo;
    }
    auto ramp_segments = [&](double a, double j, double sgn) {
      if (peak_ * j >= a * a) {
        const double tj = a / j;
        const double tc = peak_ / a - a / j;
        add(tj, 0.0, sgn * j);
        if (tc > 0.0) add(tc, sgn * a, 0.0);
        add(tj, sgn * a, -sgn * j);
      } else {
        const double ap = std::sqrt(peak_ * j);
        const double tj = ap / j;
        add(tj, 0.0, sgn * j);
        add(tj, sgn * ap, -sgn * j);
      }
    };
    ramp_segments(spec.a1, spec.j1, 1.0);
    const double cruise = distance - ramps(peak_);
    if (cruise > 0.0 && peak_ > 0.0) add(cruise / peak_, 0.0, 0.0);
    ramp_segments(spec.a2, spec.j2, -1.0);
  }
}

void PointToPointProfile::add(double duration, double a0, double jerk) {
  Segment seg{duration, a0, jerk, 0.0, 0.0};
  if (!segments_.empty()) {
    const Segment& prev = segments_.back();
    const double t = prev.duration;
    seg.p0 = prev.p0 + prev.v0 * t + prev.a0 * t * t / 2.0 + prev.jerk * t * t * t / 6.0;
    seg.v0 = prev.v0 + prev.a0 * t + prev.jerk * t * t / 2.0;
  }
  // Cruise, and the start of every deceleration, sit exactly at the peak.
  if (a0 == 0.0 && jerk <= 0.0 && !segments_.empty()) seg.v0 = peak_;
  segments_.push_back(seg);
  duration_ += duration;
}

ProfileSample PointToPointProfile::at(double t) const {
  const double distance = std::abs(target_ - p0_);
  if (segments_.empty()) return {target_, 0.0, 0.0, true};
  if (t <= 0.0) return {p0_, 0.0, 0.0, false};
  if (t >= duration_) return {target_, 0.0, 0.0, true};

  double start = 0.0;
  for (const Segment& seg : segments_) {
    if (t < start + seg.duration || &seg == &segments_.back()) {
      const double tau = std::min(t - start, seg.duration);
      double s = seg.p0 + seg.v0 * tau + seg.a0 * tau * tau / 2.0 + seg.jerk * tau * tau * tau / 6.0;
      double v = seg.v0 + seg.a0 * tau + seg.jerk * tau * tau / 2.0;
      const double a = seg.a0 + seg.jerk * tau;
      s = std::clamp(s, 0.0, distance);
      v = std::clamp(v, 0.0, peak_);
      return {p0_ + sign_ * s, sign_ * v, sign_ * a, false};
    }
    start += seg.duration;
  }
  return {target_, 0.0, 0.0, true};
}

HomingProfile::HomingProfile(const MotionProfileSpec& spec, double p0) {
  if (spec.kind != ProfileKind::home || !spec.valid()) {
    throw std::invalid_argument("homing profile needs a valid home spec");
  }
  const bool jerk = spec.j1 > 0.0 && spec.j2 > 0.0;
  auto leg = [&](double target, double v) {
    return jerk ? MotionProfileSpec::scurve(target, v, spec.a1, spec.a2, spec.j1, spec.j2)
                : MotionProfileSpec::trapezoid(target, v, spec.a1, spec.a2);
  };
  legs_.emplace_back(leg(0.0, spec.v), p0);
  legs_.emplace_back(leg(kBackoff, spec.v2), 0.0);
  legs_.emplace_back(leg(0.0, spec.v3), kBackoff);
}

double HomingProfile::duration() const {
  double total = 0.0;
  for (const auto& leg : legs_) total += leg.duration();
  return total;
}

ProfileSample HomingProfile::at(double t) const {
  double start = 0.0;
  for (std::size_t i = 0; i < legs_.size(); ++i) {
    const auto& leg = legs_[i];
    if (t < start + leg.duration()) {
      ProfileSample s = leg.at(t - start);
      s.done = false;
      return s;
    }
    start += leg.duration();
  }
  return {0.0, 0.0, 0.0, true};
}

ProfileSample profile_position(const MotionProfileSpec& spec, double p0, double t) {
  switch (spec.kind) {
    case ProfileKind::trapezoidal:
    case ProfileKind::scurve:
      return PointToPointProfile(spec, p0).at(t);
    case ProfileKind::home:
      return HomingProfile(spec, p0).at(t);
    case ProfileKind::jog: {
      if (spec.is_stop() || t <= 0.0) return {p0, 0.0, 0.0, spec.is_stop()};
      const double dir = spec.direction;
      const double t_acc = spec.v / spec.a1;
      if (t < t_acc) return {p0 + dir * spec.a1 * t * t / 2.0, dir * spec.a1 * t, dir * spec.a1, false};
      const double s = spec.v * spec.v / (2.0 * spec.a1) + spec.v * (t - t_acc);
      return {p0 + dir * s, dir * spec.v, 0.0, false};
    }
  }
  return {p0, 0.0, 0.0, true};
}

}  // namespace dicer
