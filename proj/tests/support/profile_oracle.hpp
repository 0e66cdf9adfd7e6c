#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dicer/sim/profile.hpp"

namespace dicer::testing {

// Piecewise-constant jerk schedule of a rest-to-rest move, built from the
// move parameters alone.
struct Piece {
  double duration;
  double jerk;
  double a0;  // acceleration at the start of the piece
};

inline double ramp_time(double vp, double a, double j) { return vp * j >= a * a ? vp / a + a / j : 2.0 * std::sqrt(vp / j); }

inline std::vector<Piece> schedule(const MotionProfileSpec& s, double distance) {
  std::vector<Piece> out;
  if (distance == 0.0) return out;
  if (s.kind == ProfileKind::trapezoidal) {
    const double vp = std::min(s.v, std::sqrt(2.0 * distance * s.a1 * s.a2 / (s.a1 + s.a2)));
    const double d_ramps = vp * vp / (2.0 * s.a1) + vp * vp / (2.0 * s.a2);
    out.push_back({vp / s.a1, 0.0, s.a1});
    if (distance - d_ramps > 0.0) out.push_back({(distance - d_ramps) / vp, 0.0, 0.0});
    out.push_back({vp / s.a2, 0.0, -s.a2});
    return out;
  }
  auto ramps = [&](double vp) { return 0.5 * vp * (ramp_time(vp, s.a1, s.j1) + ramp_time(vp, s.a2, s.j2)); };
  double vp = s.v;
  if (ramps(vp) > distance) {
    double lo = 0.0, hi = s.v;
    for (int i = 0; i < 300; ++i) {
      const double mid = 0.5 * (lo + hi);
      (ramps(mid) > distance ? hi : lo) = mid;
    }
    vp = lo;
  }
  auto ramp = [&](double a, double j, double sgn) {
    if (vp * j >= a * a) {
      out.push_back({a / j, sgn * j, 0.0});
      if (vp / a - a / j > 0.0) out.push_back({vp / a - a / j, 0.0, sgn * a});
      out.push_back({a / j, -sgn * j, sgn * a});
    } else {
      const double tj = std::sqrt(vp / j);
      out.push_back({tj, sgn * j, 0.0});
      out.push_back({tj, -sgn * j, sgn * tj * j});
    }
  };
  ramp(s.a1, s.j1, 1.0);
  if (distance - ramps(vp) > 0.0) out.push_back({(distance - ramps(vp)) / vp, 0.0, 0.0});
  ramp(s.a2, s.j2, -1.0);
  return out;
}

struct OracleSample {
  double t;
  double position;
  double velocity;
};

// Integrates the schedule with a 1 us step, recording the state at the
// requested times.
inline std::vector<OracleSample> integrate(const MotionProfileSpec& s, double p0, const std::vector<double>& times,
                                    double* end_position, double* total_time) {
  const double dt = 1e-6;
  const double sign = s.target >= p0 ? 1.0 : -1.0;
  const auto pieces = schedule(s, std::abs(s.target - p0));
  std::vector<OracleSample> out;
  std::size_t next = 0;
  double t = 0.0, p = 0.0, v = 0.0, a = 0.0;
  for (const Piece& pc : pieces) {
    a = pc.a0;
    const double t_end = t + pc.duration;
    while (t < t_end) {
      double h = std::min(dt, t_end - t);
      if (next < times.size() && times[next] < t + h) h = std::max(0.0, times[next] - t);
      p += v * h + a * h * h / 2.0 + pc.jerk * h * h * h / 6.0;
      v += a * h + pc.jerk * h * h / 2.0;
      a += pc.jerk * h;
      t += h;
      while (next < times.size() && times[next] <= t) {
        out.push_back({times[next], p0 + sign * p, sign * v});
        ++next;
      }
    }
  }
  *end_position = p0 + sign * p;
  *total_time = t;
  for (; next < times.size(); ++next) out.push_back({times[next], p0 + sign * p, 0.0});
  return out;
}

inline MotionProfileSpec random_spec(std::mt19937_64& rng, bool scurve, double* p0) {
  std::uniform_real_distribution<double> pos(-80.0, 80.0), v(5.0, 150.0), a(100.0, 3000.0), j(2000.0, 60000.0);
  std::uniform_real_distribution<double> shortmove(0.001, 2.0);
  std::bernoulli_distribution is_short(0.3);
  *p0 = pos(rng);
  double target = is_short(rng) ? *p0 + (rng() % 2 ? 1 : -1) * shortmove(rng) : pos(rng);
  if (scurve) return MotionProfileSpec::scurve(target, v(rng), a(rng), a(rng), j(rng), j(rng));
  return MotionProfileSpec::trapezoid(target, v(rng), a(rng), a(rng));
}

}  // namespace dicer::testing
