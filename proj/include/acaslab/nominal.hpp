#pragma once

#include <utility>

#include "acaslab/core.hpp"

namespace acaslab {

enum class TrajectoryKind { Lo, Up };

// Compliance-boundary trajectory for an advisory: accelerate at a in
// direction w until the target rate is reached, then fly linearly. The Lo
// kind drops to the target rate on the linear branch even when starting
// overcompliant; the Up kind keeps the initial rate instead.
struct NominalTrajectory {
  TrajectoryKind kind = TrajectoryKind::Lo;
  int w = +1;
  double v0 = 0;        // initial relative climb rate, ft/s
  double v_target = 0;  // v_lo (Lo) or v_up (Up)
  double a = 1;         // a_lo or a_up, ft/s^2
  double r_v = 0;
  double t_switch = 0;  // max(0, w*(v_target - v0)) / a

  static NominalTrajectory lower(int w, double v0, double v_lo, double a_lo, double r_v);
  static NominalTrajectory upper(int w, double v0, double v_up, double a_up, double r_v);

  // Linear-branch vertical rate: v_target for Lo, w*max(w*v_up, w*v0) for Up.
  double slope_post() const;
  // Linear-branch intercept: -w*max(0, w*(v_target - v0))^2 / (2a).
  double offset_post() const;

  double h_at(double t) const;
  double v_at(double t) const;
};

/// (r_n, h_n) along the nominal at time t >= 0.
std::pair<double, double> nominal_point(const NominalTrajectory& traj, double t);

// f(t) = w * h_n(t) is convex piecewise quadratic: a parabola with curvature
// a up to t_switch, then a line whose slope matches the parabola at the
// switch. All window extrema live on at most four candidate times: the window
// ends, the switch, and the parabola vertex.
class VerticalProfile {
 public:
  VerticalProfile(const NominalTrajectory& traj);

  double value(double t) const;
  double slope(double t) const;
  double switch_time() const { return t_switch_; }
  double tail_slope() const { return sp_; }

  struct Extremum {
    double value = 0;
    double t = 0;
    bool diverges = false;  // unbounded window, tail runs off in this direction
  };

  // t1 may be +infinity. Windows are assumed nonempty with 0 <= t0 <= t1.
  Extremum min_over(double t0, double t1) const;
  Extremum max_over(double t0, double t1) const;

  // Times t in [lo, hi] with value(t) == y, ascending. At most three entries
  // (two parabola roots and one linear root; duplicates near the switch kept).
  int solve_value(double y, double lo, double hi, double out[3]) const;

 private:
  double t_switch_;
  double a_;   // parabola curvature (> 0)
  double s0_;  // parabola initial slope, w*v0
  double sp_;  // linear-branch slope, w*slope_post
  double c_;   // linear-branch intercept, w*offset_post
};

}  // namespace acaslab
