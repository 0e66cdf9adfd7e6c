#pragma once

#include <cmath>
#include <numbers>

namespace dicer {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
  Vec2 operator-() const { return {-x, -y}; }
  bool operator==(const Vec2&) const = default;
};

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

inline Vec2 rotate(Vec2 p, double deg) {
  if (deg == 0.0) return p;
  const double r = deg_to_rad(deg);
  const double c = std::cos(r), s = std::sin(r);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

inline double norm(Vec2 p) { return std::hypot(p.x, p.y); }

}  // namespace dicer
