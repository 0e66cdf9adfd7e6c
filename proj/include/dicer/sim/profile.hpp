#pragma once

#include <vector>

namespace dicer {

enum class ProfileKind { trapezoidal, scurve, jog, home };

/// Parameters of one motion command, following the generalized motion command
/// set (TMove/SMove, TJog/SJog, THome/SHome). Linear axes use mm, the rotary
/// axis uses degrees with the same math.
struct MotionProfileSpec {
  ProfileKind kind = ProfileKind::trapezoidal;
  double target = 0.0;
  double v = 0.0;
  double a1 = 0.0;  // acceleration
  double a2 = 0.0;  // deceleration
  double j1 = 0.0;  // S-curve jerk while accelerating
  double j2 = 0.0;  // S-curve jerk while decelerating
  int direction = 1;       // jog only
  bool immediate = false;  // stop only: halt without a ramp (emergency stop)
  int home_mode = 0;
  double v2 = 0.0;  // homing back-off speed
  double v3 = 0.0;  // homing re-approach speed

  static MotionProfileSpec trapezoid(double target, double v, double a1, double a2);
  static MotionProfileSpec scurve(double target, double v, double a1, double a2, double j1, double j2);
  static MotionProfileSpec jog(int direction, double v, double a1, double a2);
  /// Controlled stop: decelerate at a2.
  static MotionProfileSpec stop(double a2);
  /// Emergency stop: velocity forced to zero at once.
  static MotionProfileSpec halt();
  static MotionProfileSpec home(int mode, double v, double v2, double v3, double a1, double a2,
                                double j1 = 0.0, double j2 = 0.0);

  bool is_stop() const { return kind == ProfileKind::jog && v == 0.0; }
  bool is_point_to_point() const {
    return kind == ProfileKind::trapezoidal || kind == ProfileKind::scurve;
  }
  bool valid() const;
};

struct ProfileSample {
  double position = 0.0;
  double velocity = 0.0;
  double acceleration = 0.0;
  bool done = false;
};

/// Closed-form trapezoidal or jerk-limited seven-segment move from rest at p0
/// to rest at the spec target. Falls back to the triangular (or reduced-peak
/// S-curve) shape when the distance is too short to reach the commanded speed.
class PointToPointProfile {
 public:
  PointToPointProfile(const MotionProfileSpec& spec, double p0);

  ProfileSample at(double t) const;
  double duration() const { return duration_; }
  double peak_velocity() const { return peak_; }
  double start() const { return p0_; }
  double target() const { return target_; }

 private:
  struct Segment {
    double duration;
    double a0;
    double jerk;
    double p0;  // distance from the start, unsigned
    double v0;
  };

  void add(double duration, double a0, double jerk);

  double p0_;
  double target_;
  double sign_;
  double peak_ = 0.0;
  double duration_ = 0.0;
  std::vector<Segment> segments_;
};

/// Three-leg homing: seek the home switch (origin) at v, back off at v2,
/// re-approach at v3. The axis is re-referenced to exactly 0 at the end.
class HomingProfile {
 public:
  static constexpr double kBackoff = 2.0;

  HomingProfile(const MotionProfileSpec& spec, double p0);

  ProfileSample at(double t) const;
  double duration() const;

 private:
  std::vector<PointToPointProfile> legs_;
};

/// Kinematics of a spec started from rest at p0, evaluated t seconds later.
/// Jog specs ramp at a1 to v and never finish.
ProfileSample profile_position(const MotionProfileSpec& spec, double p0, double t);

}  // namespace dicer
