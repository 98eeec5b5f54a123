#include "acaslab/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace acaslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Window {
  double t0 = 0;
  double t1 = 0;
  bool empty = true;
  bool degenerate = false;
};

// Times with horizontal conflict |r - r_v t| <= r_p, clipped to [0, eps]
// when eps >= 0. r may be negative (the ownship can pass through r = 0).
Window conflict_window(double r, double r_p, double r_v, double eps) {
  Window w;
  if (r_v > 0) {
    double hi = (r + r_p) / r_v;
    if (hi < 0) return w;
    double lo = std::max(0.0, (r - r_p) / r_v);
    if (eps >= 0) hi = std::min(hi, eps);
    if (lo > hi) return w;
    w = {lo, hi, false, false};
  } else if (std::abs(r) <= r_p) {
    w = {0.0, eps >= 0 ? eps : kInf, false, false};
  } else {
    w.degenerate = true;
  }
  return w;
}

double eff_margin(const RegionVerdict& v) {
  if (v.margin) return *v.margin;
  return v.holds ? kInf : -kInf;
}

std::optional<double> store_margin(double e) {
  if (std::isinf(e)) return std::nullopt;
  return e;
}

// Bisect on [lo, hi] where pred(lo) != pred(hi); returns a point where pred
// holds, biased to the earliest such point when pred(hi) is the true side.
double bisect_to(const VerticalProfile& f, double lo, double hi, double y, bool want_leq) {
  auto ok = [&](double t) { return want_leq ? f.value(t) <= y : f.value(t) >= y; };
  double good = hi, bad = lo;
  for (int i = 0; i < 200 && bad != good; ++i) {
    double mid = bad + (good - bad) / 2;
    if (mid == bad || mid == good) break;
    (ok(mid) ? good : bad) = mid;
  }
  return good;
}

// A finite anchor inside the violating set when the minimum diverges.
double diverging_anchor(const VerticalProfile& f, double from, double thr) {
  double t = std::max(from, f.switch_time()) + 1;
  for (int i = 0; i < 200 && f.value(t) > thr - 1; ++i) t *= 2;
  return t;
}

// Earliest violating time of an L-type clause (f(t) <= thr somewhere in W),
// preferring a time where the nominal also meets the puck, i.e. f(t) within
// [thr - 2 h_p, thr].
RegionWitness lower_witness(const VerticalProfile& f, const NominalTrajectory& traj,
                            const Window& W, double thr, double h_p, double h) {
  auto m = f.min_over(W.t0, W.t1);
  double anchor = m.diverges ? diverging_anchor(f, W.t0, thr) : m.t;

  double va = W.t0;
  if (f.value(W.t0) > thr) va = bisect_to(f, W.t0, anchor, thr, true);

  double thr2 = thr - 2 * h_p;
  double t_star = va;
  if (f.value(va) < thr2) {
    // Entered the violating set already below the puck; look for the rising
    // crossing of thr2 before the set ends.
    double vb = -1;
    bool have_vb = false;
    if (!std::isinf(W.t1)) {
      if (f.value(W.t1) <= thr) {
        vb = W.t1;
      } else {
        vb = bisect_to(f, W.t1, anchor, thr, true);
      }
      have_vb = true;
    } else if (f.tail_slope() > 0) {
      double t_hi = std::max(anchor, f.switch_time()) + 1;
      for (int i = 0; i < 200 && f.value(t_hi) <= thr; ++i) t_hi *= 2;
      vb = bisect_to(f, t_hi, anchor, thr, true);
      have_vb = true;
    }
    if (have_vb && f.value(vb) >= thr2) t_star = bisect_to(f, anchor, vb, thr2, false);
  }

  RegionWitness wit;
  wit.t = t_star;
  wit.r_n = traj.r_v * t_star;
  wit.h_n = traj.h_at(t_star);
  double fv = f.value(t_star);
  wit.puck_entry = fv <= thr && fv >= thr2 && std::abs(h - *wit.h_n) <= h_p;
  return wit;
}

// Earliest violating time of a U-type clause (f(t) >= thr_u somewhere in W).
RegionWitness upper_witness(const VerticalProfile& f, const NominalTrajectory& traj,
                            const Window& W, double thr_u, double h_p, double h) {
  double t_star = W.t0;
  if (f.value(W.t0) < thr_u) {
    double t_end;
    if (!std::isinf(W.t1)) {
      t_end = W.t1;
    } else {
      t_end = std::max(W.t0, f.switch_time()) + 1;
      for (int i = 0; i < 200 && f.value(t_end) < thr_u; ++i) t_end *= 2;
    }
    t_star = bisect_to(f, W.t0, t_end, thr_u, false);
  }
  RegionWitness wit;
  wit.t = t_star;
  wit.r_n = traj.r_v * t_star;
  wit.h_n = traj.h_at(t_star);
  double fv = f.value(t_star);
  wit.puck_entry = fv >= thr_u && fv <= thr_u + 2 * h_p && std::abs(h - *wit.h_n) <= h_p;
  return wit;
}

RegionVerdict coc_verdict() {
  RegionVerdict v;
  v.holds = true;
  v.reason = "coc";
  return v;
}

void require_v_up(const Advisory& adv) {
  if (!adv.v_up) throw std::invalid_argument("two-sided region query without v_up");
}

}  // namespace

double followup_target_cap() { return convert_rate(kClimbTargetCapFpm); }

ExtremeState extreme_state(ExtremeSide side, double v, int w, double v_target, double a,
                           double eps) {
  double t_switch = std::max(0.0, w * (v_target - v)) / a;
  ExtremeState ex;
  ex.side = side;
  if (eps < t_switch) {
    ex.h_ex = (w * a / 2) * eps * eps + v * eps;
    ex.v_ex = w * a * eps + v;
  } else {
    ex.v_ex = side == ExtremeSide::LowerL ? v_target : w * std::max(w * v_target, w * v);
    double d = std::max(0.0, w * (v_target - v));
    ex.h_ex = ex.v_ex * eps - w * d * d / (2 * a);
  }
  return ex;
}

RegionVerdict eval_L_eps(const EncounterState& s, int w, double v_lo, const ValidatedParams& p,
                         double eps) {
  RegionVerdict out;
  auto traj = NominalTrajectory::lower(w, s.v, v_lo, p->a_lo, p->r_v);
  Window W = conflict_window(s.r, p->r_p, p->r_v, eps);
  out.degenerate_window = W.degenerate;
  if (W.empty) {
    out.holds = true;
    return out;
  }
  VerticalProfile f(traj);
  double thr = p->h_p + w * s.h;
  auto m = f.min_over(W.t0, W.t1);
  out.margin = store_margin(m.diverges ? -kInf : m.value - thr);
  out.holds = eff_margin(out) > 0;
  if (!out.holds) out.witness = lower_witness(f, traj, W, thr, p->h_p, s.h);
  return out;
}

RegionVerdict eval_U_eps(const EncounterState& s, int w, double v_up, const ValidatedParams& p,
                         double eps) {
  RegionVerdict out;
  auto traj = NominalTrajectory::upper(w, s.v, v_up, p->a_up, p->r_v);
  Window W = conflict_window(s.r, p->r_p, p->r_v, eps);
  out.degenerate_window = W.degenerate;
  if (W.empty) {
    out.holds = true;
    return out;
  }
  VerticalProfile f(traj);
  double thr_u = w * s.h - p->h_p;
  auto m = f.max_over(W.t0, W.t1);
  out.margin = store_margin(m.diverges ? -kInf : thr_u - m.value);
  out.holds = eff_margin(out) > 0;
  if (!out.holds) out.witness = upper_witness(f, traj, W, thr_u, p->h_p, s.h);
  return out;
}

RegionVerdict eval_L_inf(const EncounterState& s, const Advisory& adv,
                         const ValidatedParams& p) {
  if (adv.coc) return coc_verdict();
  return eval_L_eps(s, adv.w, adv.v_lo, p, -1.0);
}

RegionVerdict eval_L_inf_horiz(const EncounterState& s, const Advisory& adv,
                               const ValidatedParams& p) {
  if (adv.coc) return coc_verdict();
  RegionVerdict out;
  auto traj = NominalTrajectory::lower(adv.w, s.v, adv.v_lo, p->a_lo, 0.0);
  if (s.r + p->r_p < 0) {
    out.holds = true;
    return out;
  }
  Window W{std::max(0.0, (s.r - p->r_p) / p->v_max), kInf, false, false};
  VerticalProfile f(traj);
  double thr = p->h_p + adv.w * s.h;
  auto m = f.min_over(W.t0, W.t1);
  out.margin = store_margin(m.diverges ? -kInf : m.value - thr);
  out.holds = eff_margin(out) > 0;
  if (!out.holds) {
    auto wit = lower_witness(f, traj, W, thr, p->h_p, s.h);
    double t = *wit.t;
    double rv = t > 0 ? std::clamp(s.r / t, 0.0, p->v_max) : 0.0;
    wit.r_v = rv;
    wit.r_n = rv * t;
    out.witness = wit;
  }
  return out;
}

RegionVerdict eval_C_eps(const EncounterState& s, const Advisory& adv,
                         const ValidatedParams& p) {
  if (adv.coc) return coc_verdict();
  require_v_up(adv);
  RegionVerdict out;
  if (adv.w * adv.v_lo > adv.w * *adv.v_up) {
    out.holds = false;
    out.reason = "w*v_lo > w*v_up";
    return out;
  }
  double eps = p->epsilon;
  RegionVerdict L = eval_L_eps(s, adv.w, adv.v_lo, p, eps);
  RegionVerdict U = eval_U_eps(s, adv.w, *adv.v_up, p, eps);
  out.holds = L.holds || U.holds;
  out.margin = store_margin(std::max(eff_margin(L), eff_margin(U)));
  out.degenerate_window = L.degenerate_window;
  if (!out.holds) {
    // Prefer the puck-entering instantiation for counterexample replay.
    if (L.witness && L.witness->puck_entry)
      out.witness = L.witness;
    else if (U.witness && U.witness->puck_entry)
      out.witness = U.witness;
    else
      out.witness = L.witness ? L.witness : U.witness;
  }
  return out;
}

namespace {

struct ClauseResult {
  bool holds = false;
  double margin = -kInf;
  std::optional<RegionWitness> witness;
  std::optional<double> followup;
  bool followup_none = false;
};

// L or U safeable clause: the eps-bounded clause plus an existential
// infinite-time follow-up from the extreme state. `sense` is the sense the
// follow-up region is evaluated with (-w on the U side).
ClauseResult safeable_clause(const RegionVerdict& eps_part, const EncounterState& s,
                             const ExtremeState& ex, int sense, double first_candidate,
                             bool try_first, const ValidatedParams& p, double cap) {
  ClauseResult cl;
  if (!eps_part.holds) {
    cl.margin = eff_margin(eps_part);
    cl.witness = eps_part.witness;
    return cl;
  }
  EncounterState shifted{s.r - p->r_v * p->epsilon, s.h - ex.h_ex, ex.v_ex, 0};
  double candidates[2];
  int n = 0;
  if (try_first && sense * first_candidate <= cap) candidates[n++] = first_candidate;
  candidates[n++] = sense * cap;  // monotone-maximal target decides the existential
  RegionVerdict inner;
  std::optional<double> found;
  for (int i = 0; i < n; ++i) {
    inner = eval_L_eps(shifted, sense, candidates[i], p, -1.0);
    if (inner.holds) {
      found = candidates[i];
      break;
    }
  }
  cl.margin = std::min(eff_margin(eps_part), eff_margin(inner));
  if (found) {
    cl.holds = true;
    cl.followup = *found;
  } else {
    cl.followup_none = true;
    cl.witness = inner.witness;
  }
  return cl;
}

}  // namespace

RegionVerdict eval_C_safeable(const EncounterState& s, const Advisory& adv,
                              const ValidatedParams& p) {
  if (adv.coc) return coc_verdict();
  require_v_up(adv);
  if (p->epsilon < 0) throw std::invalid_argument("safeable region requires epsilon >= 0");
  RegionVerdict out;
  out.followup_cap = followup_target_cap();
  if (adv.w * adv.v_lo > adv.w * *adv.v_up) {
    out.holds = false;
    out.reason = "w*v_lo > w*v_up";
    return out;
  }
  double eps = p->epsilon;
  int w = adv.w;

  RegionVerdict Le = eval_L_eps(s, w, adv.v_lo, p, eps);
  ExtremeState exL = extreme_state(ExtremeSide::LowerL, s.v, w, adv.v_lo, p->a_lo, eps);
  ClauseResult L = safeable_clause(Le, s, exL, w, adv.v_lo, true, p, out.followup_cap);

  RegionVerdict Ue = eval_U_eps(s, w, *adv.v_up, p, eps);
  ExtremeState exU = extreme_state(ExtremeSide::UpperU, s.v, w, *adv.v_up, p->a_up, eps);
  ClauseResult U = safeable_clause(Ue, s, exU, -w, 0, false, p, out.followup_cap);

  out.holds = L.holds || U.holds;
  out.margin = store_margin(std::max(L.margin, U.margin));
  out.degenerate_window = Le.degenerate_window;
  RegionWitness wit;
  if (out.holds) {
    const ClauseResult& c = L.holds ? L : U;
    wit.followup_target = c.followup;
    wit.followup_sense = L.holds ? w : -w;
    out.witness = wit;
  } else {
    if (L.witness && L.witness->puck_entry)
      wit = *L.witness;
    else if (U.witness && U.witness->puck_entry)
      wit = *U.witness;
    else if (L.witness)
      wit = *L.witness;
    else if (U.witness)
      wit = *U.witness;
    wit.followup_none = L.followup_none || U.followup_none;
    out.witness = wit;
  }
  return out;
}

RegionVerdict eval_region(const RegionQuery& q) {
  switch (q.kind) {
    case RegionKind::LInf: return eval_L_inf(q.state, q.advisory, q.params);
    case RegionKind::LInfHoriz: return eval_L_inf_horiz(q.state, q.advisory, q.params);
    case RegionKind::CEps: return eval_C_eps(q.state, q.advisory, q.params);
    case RegionKind::CSafeable: return eval_C_safeable(q.state, q.advisory, q.params);
  }
  throw std::logic_error("unknown region kind");
}

}  // namespace acaslab
