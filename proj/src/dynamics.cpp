#include "acaslab/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace acaslab {

const char* event_name(EventKind e) {
  switch (e) {
    case EventKind::None: return "none";
    case EventKind::ReachLo: return "reachlo";
    case EventKind::ReachUp: return "reachup";
    case EventKind::TimeBound: return "timebound";
    case EventKind::Horizon: return "horizon";
  }
  return "?";
}

EncounterState propagate(const EncounterState& s, const ControlFrame& u, double dt) {
  double a = u.a_o - u.a_i;
  EncounterState out;
  out.r = s.r - u.r_v * dt;
  out.h = s.h - (s.v * dt + a * dt * dt / 2);
  out.v = s.v + a * dt;
  out.t = s.t + dt;
  return out;
}

namespace {

int event_priority(EventKind e) {
  switch (e) {
    case EventKind::TimeBound: return 3;
    case EventKind::ReachUp: return 2;
    case EventKind::ReachLo: return 1;
    default: return 0;
  }
}

}  // namespace

NextEvent next_event(const EncounterState& s, const ControlFrame& u, const Advisory& adv,
                     double eps, double horizon) {
  NextEvent best{EventKind::Horizon, horizon};
  auto offer = [&best](EventKind kind, double t) {
    if (t < best.t || (t == best.t && event_priority(kind) > event_priority(best.kind)))
      best = {kind, t};
  };
  if (eps >= 0) offer(EventKind::TimeBound, std::max(0.0, eps - s.t));
  double a = u.a_o - u.a_i;
  if (a != 0 && !adv.coc) {
    // Crossings below the floor are re-detections of a boundary the state is
    // already sitting on (within rounding); skipping them keeps segments
    // advancing.
    constexpr double kMinCrossing = 1e-12;
    double t_lo = (adv.v_lo - s.v) / a;
    if (t_lo > kMinCrossing) offer(EventKind::ReachLo, t_lo);
    if (adv.v_up) {
      double t_up = (*adv.v_up - s.v) / a;
      if (t_up > kMinCrossing) offer(EventKind::ReachUp, t_up);
    }
  }
  return best;
}

bool nmac(const EncounterState& s, const Params& p) {
  return std::abs(s.r) <= p.r_p && std::abs(s.h) <= p.h_p;
}

namespace {

// Real roots of c2 t^2 + c1 t + c0, stable form; returns count.
int solve_quadratic(double c2, double c1, double c0, double out[2]) {
  if (c2 == 0) {
    if (c1 == 0) return 0;
    out[0] = -c0 / c1;
    return 1;
  }
  double disc = c1 * c1 - 4 * c2 * c0;
  if (disc < 0) return 0;
  double sq = std::sqrt(disc);
  double q = -(c1 + (c1 >= 0 ? sq : -sq)) / 2;
  int n = 0;
  out[n++] = q / c2;
  if (q != 0) out[n++] = c0 / q;
  return n;
}

}  // namespace

std::optional<double> puck_entry_time(const EncounterState& s, const ControlFrame& u, double dt,
                                      const Params& p) {
  double a = u.a_o - u.a_i;
  auto r_at = [&](double t) { return s.r - u.r_v * t; };
  auto h_at = [&](double t) { return s.h - (s.v * t + a * t * t / 2); };
  auto inside = [&](double t) {
    return std::abs(r_at(t)) <= p.r_p && std::abs(h_at(t)) <= p.h_p;
  };

  double cand[10];
  int n = 0;
  auto push = [&](double t) {
    if (t >= 0 && t <= dt && n < 10) cand[n++] = t;
  };
  push(0);
  push(dt);
  if (u.r_v != 0) {
    push((s.r - p.r_p) / u.r_v);
    push((s.r + p.r_p) / u.r_v);
  }
  // h(t) = -a/2 t^2 - v t + h; boundary crossings at h(t) = +-h_p.
  double roots[2];
  for (double bound : {p.h_p, -p.h_p}) {
    int k = solve_quadratic(-a / 2, -s.v, s.h - bound, roots);
    for (int i = 0; i < k; ++i) push(roots[i]);
  }
  std::sort(cand, cand + n);
  // The predicate is constant strictly between adjacent candidates, and a
  // boundary root may land one ulp outside the closed set, so test the
  // candidates and the gap midpoints.
  double found = -1;
  double prev = cand[0];
  for (int i = 0; i < n && found < 0; ++i) {
    double mid = prev + (cand[i] - prev) / 2;
    if (inside(mid))
      found = mid;
    else if (inside(cand[i]))
      found = cand[i];
    prev = cand[i];
  }
  if (found < 0) return std::nullopt;
  // Walk back to the earliest entry point.
  double lo = 0, hi = found;
  if (inside(0)) return 0.0;
  for (int i = 0; i < 100 && lo != hi; ++i) {
    double mid = lo + (hi - lo) / 2;
    if (mid == lo || mid == hi) break;
    (inside(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace acaslab
