#include "acaslab/nominal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acaslab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

NominalTrajectory NominalTrajectory::lower(int w, double v0, double v_lo, double a_lo,
                                           double r_v) {
  NominalTrajectory t;
  t.kind = TrajectoryKind::Lo;
  t.w = w;
  t.v0 = v0;
  t.v_target = v_lo;
  t.a = a_lo;
  t.r_v = r_v;
  t.t_switch = std::max(0.0, w * (v_lo - v0)) / a_lo;
  return t;
}

NominalTrajectory NominalTrajectory::upper(int w, double v0, double v_up, double a_up,
                                           double r_v) {
  NominalTrajectory t;
  t.kind = TrajectoryKind::Up;
  t.w = w;
  t.v0 = v0;
  t.v_target = v_up;
  t.a = a_up;
  t.r_v = r_v;
  t.t_switch = std::max(0.0, w * (v_up - v0)) / a_up;
  return t;
}

double NominalTrajectory::slope_post() const {
  if (kind == TrajectoryKind::Lo) return v_target;
  return w * std::max(w * v_target, w * v0);
}

double NominalTrajectory::offset_post() const {
  double d = std::max(0.0, w * (v_target - v0));
  return -w * d * d / (2 * a);
}

double NominalTrajectory::h_at(double t) const {
  if (t < t_switch) return (w * a / 2) * t * t + v0 * t;
  return slope_post() * t + offset_post();
}

double NominalTrajectory::v_at(double t) const {
  if (t < t_switch) return v0 + w * a * t;
  return slope_post();
}

std::pair<double, double> nominal_point(const NominalTrajectory& traj, double t) {
  return {traj.r_v * t, traj.h_at(t)};
}

VerticalProfile::VerticalProfile(const NominalTrajectory& traj)
    : t_switch_(traj.t_switch),
      a_(traj.a),
      s0_(traj.w * traj.v0),
      sp_(traj.w * traj.slope_post()),
      c_(traj.w * traj.offset_post()) {}

double VerticalProfile::value(double t) const {
  if (t < t_switch_) return (a_ / 2) * t * t + s0_ * t;
  return sp_ * t + c_;
}

double VerticalProfile::slope(double t) const {
  if (t < t_switch_) return a_ * t + s0_;
  return sp_;
}

VerticalProfile::Extremum VerticalProfile::min_over(double t0, double t1) const {
  Extremum best{value(t0), t0, false};
  auto consider = [&](double t) {
    double v = value(t);
    if (v < best.value) best = {v, t, false};
  };
  if (std::isinf(t1)) {
    if (sp_ < 0) return {-kInf, kInf, true};
  } else {
    consider(t1);
  }
  double seg_end = std::isinf(t1) ? t_switch_ : std::min(t1, t_switch_);
  if (t0 < t_switch_ && t_switch_ <= (std::isinf(t1) ? kInf : t1)) consider(t_switch_);
  // Parabola vertex, if it falls inside the active parabola segment.
  double tv = -s0_ / a_;
  if (tv >= t0 && tv <= seg_end && tv < t_switch_) consider(tv);
  return best;
}

VerticalProfile::Extremum VerticalProfile::max_over(double t0, double t1) const {
  // Convex, so the sup sits at a window end.
  if (std::isinf(t1)) {
    if (sp_ > 0) return {kInf, kInf, true};
    return {value(t0), t0, false};
  }
  double va = value(t0), vb = value(t1);
  if (vb > va) return {vb, t1, false};
  return {va, t0, false};
}

int VerticalProfile::solve_value(double y, double lo, double hi, double out[3]) const {
  int n = 0;
  auto push = [&](double t, bool on_parabola) {
    if (!std::isfinite(t)) return;
    bool valid_branch = on_parabola ? (t < t_switch_) : (t >= t_switch_);
    if (valid_branch && t >= lo && t <= hi && n < 3) out[n++] = t;
  };
  // Parabola branch: (a/2) t^2 + s0 t - y = 0.
  double disc = s0_ * s0_ + 2 * a_ * y;
  if (disc >= 0) {
    double sq = std::sqrt(disc);
    push((-s0_ - sq) / a_, true);
    push((-s0_ + sq) / a_, true);
  }
  if (sp_ != 0) push((y - c_) / sp_, false);
  std::sort(out, out + n);
  return n;
}

}  // namespace acaslab
