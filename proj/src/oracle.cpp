#include "acaslab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace acaslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRvSteps = 1000;
constexpr int kTargetSteps = 16;

// Nominal vertical rate as a function of time, written from the velocity law
// rather than the position formula: hold acceleration a in direction w until
// the target rate, then fly at the target (Lo kind) or at the faster of
// target and initial rate (Up kind).
struct RateLaw {
  int w;
  double v0;
  double v_target;
  double a;
  bool up_kind;

  double t_reach() const { return std::max(0.0, w * (v_target - v0)) / a; }
  double at(double t) const {
    if (t < t_reach()) return v0 + w * a * t;
    if (up_kind) return w * std::max(w * v_target, w * v0);
    return v_target;
  }
};

// Exact position at t: trapezoid over the affine pieces.
double pos_at(const RateLaw& law, double t) {
  double h = 0, last_t = 0, last_v = law.at(0.0);
  for (double pt : {std::min(law.t_reach(), t), t}) {
    if (pt > last_t) {
      double v2 = law.at(pt);
      h += (last_v + v2) / 2 * (pt - last_t);
      last_t = pt;
      last_v = v2;
    }
  }
  return h;
}

struct ScanResult {
  bool holds = true;
  double worst = kInf;  // min clearance seen over conflicting samples
  double t_viol = 0;    // first violating time
  double rv_viol = 0;   // violating closure rate, horizontal region only
};

// Scans one clause over [ta, tb] at dt, hitting tb exactly. upper = test
// w(h - h_n) > h_p instead of w(h_n - h) > h_p.
ScanResult scan_clause(const RateLaw& law, const EncounterState& s, const Params& p, bool upper,
                       double ta, double tb, double dt) {
  ScanResult res;
  double h_n = pos_at(law, ta);
  double v_n = law.at(ta);
  double t = ta;
  auto check = [&](double tt, double hh) {
    double clearance = upper ? (law.w * s.h - p.h_p) - law.w * hh
                             : law.w * hh - (p.h_p + law.w * s.h);
    if (clearance < res.worst) res.worst = clearance;
    if (clearance <= 0 && res.holds) {
      res.holds = false;
      res.t_viol = tt;
    }
  };
  check(t, h_n);
  while (t + dt <= tb) {
    double v2 = law.at(t + dt);
    h_n += (v_n + v2) / 2 * dt;
    v_n = v2;
    t += dt;
    check(t, h_n);
  }
  if (t < tb) {
    double v2 = law.at(tb);
    h_n += (v_n + v2) / 2 * (tb - t);
    check(tb, h_n);
  }
  return res;
}

// One-sided clause of the fixed-closure regions; eps < 0 means an unbounded
// time quantifier. Conflict times past t_max sit on the linear branch and are
// decided from the endpoint clearances / the slope sign.
ScanResult oracle_clause(const EncounterState& s, int w, double target, const Params& p,
                         double eps, double dt, double t_max, bool upper) {
  RateLaw law{w, s.v, target, upper ? p.a_up : p.a_lo, upper};
  ScanResult res;
  double ta, tb_q;
  if (p.r_v > 0) {
    double tb = (s.r + p.r_p) / p.r_v;
    if (tb < 0) return res;
    ta = std::max(0.0, (s.r - p.r_p) / p.r_v);
    tb_q = eps >= 0 ? std::min(tb, eps) : tb;
  } else {
    if (std::abs(s.r) > p.r_p) return res;
    ta = 0;
    tb_q = eps >= 0 ? eps : kInf;
  }
  if (ta > tb_q) return res;
  double scan_to = std::min(tb_q, t_max);
  if (ta <= scan_to) res = scan_clause(law, s, p, upper, ta, scan_to, dt);
  if (res.holds && tb_q > t_max) {
    double lin_rate = law.at(t_max);
    double h_ref = pos_at(law, t_max);
    auto clr = [&](double t) {
      double hh = h_ref + (t - t_max) * lin_rate;
      return upper ? (w * s.h - p.h_p) - w * hh : w * hh - (p.h_p + w * s.h);
    };
    double wa = std::max(ta, t_max);
    double ca = clr(wa);
    if (ca < res.worst) res.worst = ca;
    if (ca <= 0) {
      res.holds = false;
      res.t_viol = wa;
      return res;
    }
    if (std::isinf(tb_q)) {
      double cslope = (upper ? -1.0 : 1.0) * w * lin_rate;
      if (cslope < 0) {
        res.holds = false;
        res.t_viol = wa + ca / -cslope + 1;
        res.worst = -kInf;
      }
    } else {
      double cb = clr(tb_q);
      if (cb < res.worst) res.worst = cb;
      if (cb <= 0) {
        res.holds = false;
        res.t_viol = tb_q;
      }
    }
  }
  return res;
}

// Lower region with the closure rate quantified over a kRvSteps grid of
// [0, v_max]. h_n does not depend on r_v, so each sample time only needs to
// know whether some grid rate conflicts there.
ScanResult oracle_horiz(const EncounterState& s, int w, double v_lo, const Params& p, double dt,
                        double t_max) {
  RateLaw law{w, s.v, v_lo, p.a_lo, false};
  ScanResult res;
  if (s.r + p.r_p < 0) return res;
  double step = p.v_max / (kRvSteps - 1);
  auto conflict_rv = [&](double t) -> std::optional<double> {
    if (t <= 0) return std::abs(s.r) <= p.r_p ? std::optional<double>(0.0) : std::nullopt;
    long jlo = std::max(0L, (long)std::ceil((s.r - p.r_p) / (t * step)));
    long jhi = std::min((long)kRvSteps - 1, (long)std::floor((s.r + p.r_p) / (t * step)));
    if (jlo > jhi) return std::nullopt;
    return jlo * step;
  };
  double ta = std::max(0.0, (s.r - p.r_p) / p.v_max);
  double h_n = pos_at(law, ta);
  double v_n = law.at(ta);
  for (double t = ta; t <= t_max; t += dt) {
    if (t > ta) {
      double v2 = law.at(t);
      h_n += (v_n + v2) / 2 * dt;
      v_n = v2;
    }
    auto rv = conflict_rv(t);
    if (!rv) continue;
    double clearance = w * h_n - (p.h_p + w * s.h);
    if (clearance < res.worst) res.worst = clearance;
    if (clearance <= 0 && res.holds) {
      res.holds = false;
      res.t_viol = t;
      res.rv_viol = *rv;
    }
  }
  if (!res.holds) return res;
  // Tail past t_max, one grid rate at a time; the nominal is linear there.
  double lin_rate = law.at(t_max);
  double h_max = pos_at(law, t_max);
  auto clr = [&](double t) { return w * (h_max + (t - t_max) * lin_rate) - (p.h_p + w * s.h); };
  for (int j = 0; j < kRvSteps; ++j) {
    double rv = j * step;
    double wa, wb;
    if (rv == 0) {
      if (std::abs(s.r) > p.r_p) continue;
      wa = t_max;
      wb = kInf;
    } else {
      wb = (s.r + p.r_p) / rv;
      if (wb <= t_max) continue;
      wa = std::max(t_max, (s.r - p.r_p) / rv);
    }
    double ca = clr(wa);
    if (ca <= 0) {
      res.holds = false;
      res.t_viol = wa;
      res.rv_viol = rv;
      return res;
    }
    if (std::isinf(wb)) {
      if (w * lin_rate < 0) {
        res.holds = false;
        res.t_viol = wa + ca / -(w * lin_rate) + 1;
        res.rv_viol = rv;
        return res;
      }
    } else if (clr(wb) <= 0) {
      res.holds = false;
      res.t_viol = wb;
      res.rv_viol = rv;
      return res;
    }
  }
  return res;
}

RegionVerdict to_verdict(const ScanResult& r, bool horiz = false) {
  RegionVerdict v;
  v.holds = r.holds;
  if (std::isfinite(r.worst)) v.margin = r.worst;
  if (!r.holds) {
    RegionWitness w;
    w.t = r.t_viol;
    if (horiz) w.r_v = r.rv_viol;
    v.witness = w;
  }
  return v;
}

// Existential follow-up decided over a fixed candidate target set.
ScanResult oracle_exists_followup(const EncounterState& shifted, int sense, double first,
                                  bool try_first, const Params& p, double dt, double t_max,
                                  double cap) {
  double targets[kTargetSteps + 2];
  int n = 0;
  if (try_first && sense * first <= cap) targets[n++] = first;
  targets[n++] = sense * cap;
  for (int i = 0; i < kTargetSteps; ++i)
    targets[n++] = sense * (-cap + (2 * cap * i) / (kTargetSteps - 1));
  ScanResult best;
  best.holds = false;
  best.worst = -kInf;
  for (int i = 0; i < n; ++i) {
    ScanResult r = oracle_clause(shifted, sense, targets[i], p, -1.0, dt, t_max, false);
    if (r.holds) return r;
    if (r.worst > best.worst) best = r;
  }
  return best;
}

}  // namespace

double oracle_tolerance_band(const RegionQuery& q, double dt, double t_max) {
  const Params& p = q.params.get();
  double a = q.kind == RegionKind::LInf || q.kind == RegionKind::LInfHoriz
                 ? p.a_lo
                 : std::max(p.a_lo, p.a_up);
  return 2 * dt * (std::abs(q.state.v) + a * t_max);
}

RegionVerdict oracle_eval(const RegionQuery& q, double dt, double t_max) {
  const Params& p = q.params.get();
  const EncounterState& s = q.state;
  const Advisory& adv = q.advisory;
  if (adv.coc) {
    RegionVerdict v;
    v.holds = true;
    v.reason = "coc";
    return v;
  }
  switch (q.kind) {
    case RegionKind::LInf:
      return to_verdict(oracle_clause(s, adv.w, adv.v_lo, p, -1.0, dt, t_max, false));
    case RegionKind::LInfHoriz:
      return to_verdict(oracle_horiz(s, adv.w, adv.v_lo, p, dt, t_max), true);
    case RegionKind::CEps: {
      RegionVerdict v;
      if (adv.w * adv.v_lo > adv.w * *adv.v_up) {
        v.reason = "w*v_lo > w*v_up";
        return v;
      }
      ScanResult L = oracle_clause(s, adv.w, adv.v_lo, p, p.epsilon, dt, t_max, false);
      ScanResult U = oracle_clause(s, adv.w, *adv.v_up, p, p.epsilon, dt, t_max, true);
      v.holds = L.holds || U.holds;
      double m = std::max(L.worst, U.worst);
      if (std::isfinite(m)) v.margin = m;
      if (!v.holds) {
        RegionWitness w;
        w.t = L.t_viol;
        v.witness = w;
      }
      return v;
    }
    case RegionKind::CSafeable: {
      RegionVerdict v;
      if (adv.w * adv.v_lo > adv.w * *adv.v_up) {
        v.reason = "w*v_lo > w*v_up";
        return v;
      }
      double cap = followup_target_cap();
      double eps = p.epsilon;
      bool holds = false;
      double margin = -kInf;
      {
        ScanResult Le = oracle_clause(s, adv.w, adv.v_lo, p, eps, dt, t_max, false);
        if (Le.holds) {
          RateLaw law{adv.w, s.v, adv.v_lo, p.a_lo, false};
          EncounterState shifted{s.r - p.r_v * eps, s.h - pos_at(law, eps), law.at(eps), 0};
          ScanResult ex =
              oracle_exists_followup(shifted, adv.w, adv.v_lo, true, p, dt, t_max, cap);
          if (ex.holds) holds = true;
          margin = std::max(margin, std::min(Le.worst, ex.worst));
        } else {
          margin = std::max(margin, Le.worst);
        }
      }
      if (!holds) {
        ScanResult Ue = oracle_clause(s, adv.w, *adv.v_up, p, eps, dt, t_max, true);
        if (Ue.holds) {
          RateLaw law{adv.w, s.v, *adv.v_up, p.a_up, true};
          EncounterState shifted{s.r - p.r_v * eps, s.h - pos_at(law, eps), law.at(eps), 0};
          ScanResult ex = oracle_exists_followup(shifted, -adv.w, 0, false, p, dt, t_max, cap);
          if (ex.holds) holds = true;
          margin = std::max(margin, std::min(Ue.worst, ex.worst));
        } else {
          margin = std::max(margin, Ue.worst);
        }
      }
      v.holds = holds;
      if (std::isfinite(margin)) v.margin = margin;
      return v;
    }
  }
  throw std::logic_error("unknown region kind");
}

}  // namespace acaslab
