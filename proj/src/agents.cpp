#include "acaslab/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acaslab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundShave = 1e-9;  // keeps extremes strictly inside (-c, c)
}  // namespace

OwnshipStrategy::OwnshipStrategy(const ValidatedParams& p, std::optional<double> c_o_estimate)
    : variant(p.variant()),
      a_lo(p->a_lo),
      a_up(p->a_up),
      a_max(p->a_max),
      c(p->c),
      c_o(c_o_estimate ? std::min(*c_o_estimate, p->c) : p->c) {}

double ownship_accel(const OwnshipStrategy& st, const EncounterState& s, const Advisory& adv) {
  if (adv.coc) return 0;
  int w = adv.w;
  double wv = w * s.v;
  double wlo = w * adv.v_lo;
  double a = 0;
  switch (st.variant) {
    case ModelVariant::InfNon:
    case ModelVariant::InfHoriz:
      a = wv < wlo ? w * st.a_lo : 0;
      break;
    case ModelVariant::InfVert:
      a = wv < wlo ? w * (st.a_lo + st.c) : w * st.c;
      break;
    case ModelVariant::BoundNon:
    case ModelVariant::SafeableNon:
      a = wv < wlo ? w * st.a_lo : 0;
      break;
    case ModelVariant::BoundVert:
    case ModelVariant::SafeableVert: {
      // The v_up boundary takes the overcompliance case: a_o = 0 there would
      // let an intruder push the state above the upper envelope with no
      // further crossing event inside the segment.
      double wup = w * adv.v_up.value_or(adv.v_lo);
      if (wv <= wlo)
        a = w * (st.a_lo + st.c_o);
      else if (wv >= wup)
        a = -w * st.c_o;
      else
        a = 0;
      break;
    }
  }
  if (std::abs(a) > st.a_max) throw StrategyBoundsError("strategy exceeds a_max");
  return a;
}

IntruderAgent::IntruderAgent(const IntruderPolicy& policy, ModelVariant variant,
                             const ValidatedParams& p, std::uint64_t seed)
    : policy_(policy), variant_(variant), params_(p.get()), rng_(seed) {
  bool vertical = policy.kind == PolicyKind::BangBang ||
                  policy.kind == PolicyKind::RandomPiecewise ||
                  policy.kind == PolicyKind::Scripted;
  if (vertical && !has_vertical_intruder(variant))
    throw PolicyCapabilityError("policy emits a_i but the variant has no vertical intruder");
  if (policy.kind == PolicyKind::ClosureSchedule && !has_horizontal_intruder(variant))
    throw PolicyCapabilityError("closure schedule requires the horizontal variant");
}

IntruderMove IntruderAgent::move(const EncounterState& s, const Advisory& adv, double a_o,
                                 double t_abs, double c_o, double eps, double horizon_rem) {
  IntruderMove mv;
  mv.dwell = kInf;
  switch (policy_.kind) {
    case PolicyKind::None:
      break;
    case PolicyKind::BangBang: {
      // One-event greedy: try both extremes, keep the one that predicts the
      // smaller |h| at its next event. Ties take the -w side.
      double e = c_o * (1 - kBoundShave);
      double best_h = kInf;
      double best = -adv.w * e;
      for (double cand : {-adv.w * e, adv.w * e}) {
        ControlFrame u{a_o, cand, params_.r_v};
        NextEvent ev = next_event(s, u, adv, eps, horizon_rem);
        double t_look = std::max(policy_.dwell_min, std::min(ev.t, horizon_rem));
        if (!std::isfinite(t_look)) t_look = policy_.dwell_min;
        double h_pred = std::abs(propagate(s, u, t_look).h);
        if (h_pred < best_h) {
          best_h = h_pred;
          best = cand;
          mv.dwell = t_look;
        }
      }
      mv.a_i = best;
      break;
    }
    case PolicyKind::RandomPiecewise: {
      double e = c_o * (1 - kBoundShave);
      mv.a_i = std::uniform_real_distribution<double>(-e, e)(rng_);
      double dwell = std::exponential_distribution<double>(1.0 / policy_.dwell_mean)(rng_);
      mv.dwell = std::clamp(dwell, policy_.dwell_min, 30.0);
      break;
    }
    case PolicyKind::Scripted:
    case PolicyKind::ClosureSchedule: {
      double value = 0;
      mv.dwell = kInf;
      while (cursor_ + 1 < policy_.schedule.size() && policy_.schedule[cursor_ + 1].t <= t_abs)
        ++cursor_;
      if (!policy_.schedule.empty()) {
        if (policy_.schedule[cursor_].t <= t_abs) {
          value = policy_.schedule[cursor_].value;
          if (cursor_ + 1 < policy_.schedule.size())
            mv.dwell = policy_.schedule[cursor_ + 1].t - t_abs;
        } else {
          mv.dwell = policy_.schedule[cursor_].t - t_abs;  // before the first entry
        }
      }
      if (policy_.kind == PolicyKind::ClosureSchedule) {
        mv.r_v = std::clamp(value, 0.0, params_.v_max);
      } else {
        double e = c_o * (1 - kBoundShave);
        mv.a_i = std::clamp(value, -e, e);
      }
      break;
    }
  }
  return mv;
}

IssuerMode default_issuer_mode(ModelVariant m) {
  return is_time_bounded(m) ? IssuerMode::ForcedReissue : IssuerMode::KeepOrFilter;
}

namespace {

Advisory make_candidate(int w, double v_lo, bool two_sided) {
  Advisory a;
  a.w = w;
  a.v_lo = v_lo;
  if (two_sided) {
    // Keep some headroom above v_lo; a degenerate v_lo = v_up advisory pins
    // the compliance zone to a single rate.
    double dflt = convert_rate(kDefaultVupFpm);
    a.v_up = w * std::max(w * v_lo + convert_rate(600), dflt);
    a.label = "synth";
  }
  return a;
}

std::vector<Advisory> candidate_list(const Advisory& current, RegionKind kind,
                                     const AdvisoryCatalog& catalog,
                                     const std::optional<RegionWitness>& last_witness) {
  bool two_sided = kind == RegionKind::CEps || kind == RegionKind::CSafeable;
  std::vector<Advisory> out;
  out.push_back(two_sided ? with_default_v_up(current) : current);
  int w = current.coc ? +1 : current.w;
  if (last_witness && last_witness->followup_target && last_witness->followup_sense)
    out.push_back(
        make_candidate(*last_witness->followup_sense, *last_witness->followup_target, two_sided));
  double cap = followup_target_cap();
  // Monotone-extreme targets in both senses decide existence of a compliant
  // follow-up whenever one exists at all.
  out.push_back(make_candidate(w, w * cap, two_sided));
  out.push_back(make_candidate(-w, -w * cap, two_sided));
  for (const auto& e : catalog.entries) {
    if (e.advisory.coc) continue;
    out.push_back(two_sided ? with_default_v_up(e.advisory) : e.advisory);
  }
  for (int sense : {w, -w})
    for (double fpm : {0.0, 500.0, 1500.0, 2000.0, 2500.0})
      out.push_back(make_candidate(sense, sense * convert_rate(fpm), two_sided));
  return out;
}

}  // namespace

IssueResult issue_advisory(const IssuerConfig& issuer, const EncounterState& s,
                           const Advisory& current, RegionKind kind, const ValidatedParams& p,
                           const std::optional<RegionWitness>& last_witness) {
  IssueResult res;
  if (issuer.mode == IssuerMode::KeepOrFilter) {
    // The keep branch carries no test.
    res.advisory = current;
    res.tested = false;
    return res;
  }
  auto candidates = candidate_list(current, kind, issuer.catalog, last_witness);
  bool keep_allowed = kind == RegionKind::LInf || kind == RegionKind::LInfHoriz;
  std::optional<Advisory> best;
  RegionVerdict best_verdict;
  double best_margin = kInf;
  for (const auto& cand : candidates) {
    if (!advisory_well_formed(cand)) continue;
    RegionVerdict v = eval_region({s, cand, p, kind});
    if (issuer.mode == IssuerMode::ForcedReissue) {
      if (v.holds) {
        res.advisory = cand;
        res.tested = true;
        res.verdict = v;
        return res;
      }
      continue;
    }
    // Adversarial: any admissible candidate, smallest margin wins. In the
    // infinite-time models keeping the current advisory needs no test, so it
    // is admissible even when its region is false.
    bool admissible = v.holds || (keep_allowed && &cand == &candidates.front());
    if (!admissible) continue;
    double m = v.margin ? *v.margin : kInf;
    if (!best || m < best_margin) {
      best = cand;
      best_verdict = v;
      best_margin = m;
    }
  }
  if (best) {
    res.advisory = best;
    res.tested = true;
    res.verdict = best_verdict;
  }
  return res;
}

}  // namespace acaslab
