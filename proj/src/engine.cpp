#include "acaslab/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace acaslab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxRecords = 2'000'000;
}  // namespace

const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::SafeToHorizon: return "safe-to-horizon";
    case RunStatus::Nmac: return "nmac";
    case RunStatus::NoSafeAdvisory: return "no-safe-advisory";
  }
  return "?";
}

HorizonResult simulate_horizon(const Scenario& sc) {
  double rv = sc.params.r_v;
  if (sc.variant == ModelVariant::InfHoriz) rv = sc.horizon_rv_floor;
  if (rv > 0)
    return {(sc.initial.r + sc.params.r_p) / rv + sc.horizon_margin, false};
  if (sc.horizon > 0) return {sc.horizon, true};
  throw HorizonUndefined("r_v = 0 and no horizon configured");
}

RunOutcome run(const Scenario& sc) {
  ValidatedParams vp = validate_params(sc.params, sc.variant);
  const Params& P = vp.get();
  if (is_time_bounded(sc.variant) && P.epsilon == 0)
    throw std::invalid_argument("epsilon = 0 cannot advance; use epsilon > 0 or epsilon < 0");

  double horizon = sc.horizon > 0 ? sc.horizon : simulate_horizon(sc).horizon;
  double eps = is_time_bounded(sc.variant) ? P.epsilon : -1.0;
  RegionKind kind = region_for(sc.variant);

  IssuerConfig issuer = sc.issuer;
  if (issuer.mode != IssuerMode::Adversarial) issuer.mode = default_issuer_mode(sc.variant);

  Advisory adv = is_two_sided(sc.variant) ? with_default_v_up(sc.initial_advisory)
                                          : sc.initial_advisory;
  EncounterState s = sc.initial;
  s.t = 0;

  double c_o = sc.c_o >= 0 ? std::min(sc.c_o, P.c) : P.c;
  OwnshipStrategy strat(vp, c_o);
  IntruderAgent intruder(sc.intruder, sc.variant, vp, sc.seed);

  RunOutcome out;
  Trace& trace = out.trace;
  double t_abs = 0;
  double r_v_cur = P.r_v;
  std::optional<RegionWitness> last_witness;

  auto region_verdict = [&](const Advisory& a) { return eval_region({s, a, vp, kind}); };

  double a_o = ownship_accel(strat, s, adv);
  auto accept_move = [&](IntruderMove mv) {
    // Estimate renegotiation: a proposal at or past c_o hands control back to
    // the ownship to raise the estimate (capped at c) before it is accepted.
    if (std::abs(mv.a_i) >= c_o && c_o < P.c) {
      c_o = P.c;
      strat.c_o = c_o;
      a_o = ownship_accel(strat, s, adv);
    }
    if (mv.r_v) r_v_cur = *mv.r_v;
    return mv;
  };
  IntruderMove mv = accept_move(intruder.move(s, adv, a_o, t_abs, c_o, eps, horizon));
  double dwell_end = std::isinf(mv.dwell) ? kInf : t_abs + mv.dwell;

  auto push = [&](EventKind ev, std::optional<bool> rh = std::nullopt) {
    TraceRecord rec;
    rec.t_abs = t_abs;
    rec.state = s;
    rec.a_o = a_o;
    rec.a_i = mv.a_i;
    rec.r_v = r_v_cur;
    rec.advisory = adv;
    rec.event = ev;
    rec.nmac = nmac(s, P);
    rec.region_holds = rh;
    trace.records.push_back(rec);
  };

  RegionVerdict v0 = region_verdict(adv);
  last_witness = v0.witness;
  push(EventKind::None, v0.holds);
  if (nmac(s, P)) {
    out.status = RunStatus::Nmac;
    out.t_event = 0;
    return out;
  }

  double cadence_next =
      (!is_time_bounded(sc.variant) && sc.cadence > 0) ? sc.cadence : kInf;

  while (t_abs < horizon) {
    if (trace.records.size() > kMaxRecords)
      throw std::runtime_error("trace record budget exceeded");
    ControlFrame u{a_o, mv.a_i, r_v_cur};
    NextEvent ev = next_event(s, u, adv, eps, horizon - t_abs);
    enum class Step { Event, Intruder, Cadence } step = Step::Event;
    double delta = ev.t;
    if (dwell_end < t_abs + delta) {
      delta = dwell_end - t_abs;
      step = Step::Intruder;
    }
    if (cadence_next < t_abs + delta) {
      delta = cadence_next - t_abs;
      step = Step::Cadence;
    }
    if (step == Step::Event &&
        (ev.kind == EventKind::ReachLo || ev.kind == EventKind::ReachUp)) {
      // Rounding can land v one ulp short of the boundary; nudge the segment
      // length so the strategy's exact comparisons see the crossing.
      double target = ev.kind == EventKind::ReachLo ? adv.v_lo : *adv.v_up;
      double a = u.a_o - u.a_i;
      for (int k = 0; k < 4; ++k) {
        double v_land = s.v + a * delta;
        if (a > 0 ? v_land >= target : v_land <= target) break;
        delta = std::nextafter(delta, kInf);
      }
    }

    if (auto tp = puck_entry_time(s, u, delta, P)) {
      s = propagate(s, u, *tp);
      t_abs += *tp;
      push(EventKind::None);
      out.status = RunStatus::Nmac;
      out.t_event = t_abs;
      return out;
    }
    s = propagate(s, u, delta);
    t_abs += delta;

    if (step == Step::Event && ev.kind == EventKind::Horizon) {
      push(EventKind::Horizon);
      break;
    }

    EventKind tag = EventKind::None;
    std::optional<bool> rh;
    switch (step) {
      case Step::Event:
        tag = ev.kind;
        if (ev.kind == EventKind::TimeBound) {
          IssueResult res = issue_advisory(issuer, s, adv, kind, vp, last_witness);
          if (!res.advisory) {
            push(EventKind::TimeBound, false);
            out.status = RunStatus::NoSafeAdvisory;
            out.t_event = t_abs;
            return out;
          }
          adv = *res.advisory;
          s.t = 0;
          rh = res.tested ? res.verdict.holds : region_verdict(adv).holds;
          if (res.tested) last_witness = res.verdict.witness;
        }
        a_o = ownship_accel(strat, s, adv);
        break;
      case Step::Cadence: {
        cadence_next += sc.cadence;
        IssueResult res = issue_advisory(issuer, s, adv, kind, vp, last_witness);
        if (res.advisory) adv = *res.advisory;
        rh = res.tested ? res.verdict.holds : region_verdict(adv).holds;
        a_o = ownship_accel(strat, s, adv);
        break;
      }
      case Step::Intruder:
        break;
    }
    mv = accept_move(intruder.move(s, adv, a_o, t_abs, c_o, eps, horizon - t_abs));
    dwell_end = std::isinf(mv.dwell) ? kInf : t_abs + mv.dwell;
    push(tag, rh);
  }
  if (out.trace.records.empty() || out.trace.records.back().t_abs < t_abs) push(EventKind::Horizon);
  out.status = RunStatus::SafeToHorizon;
  out.t_event = t_abs;
  return out;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Danger score of a rollout: the smaller, the closer to the puck. Negative
// means NMAC.
double robustness(const Trace& tr, const Params& p) {
  double best = kInf;
  auto score = [&](const EncounterState& s) {
    double d = std::max(std::abs(s.r) - p.r_p, std::abs(s.h) - p.h_p);
    if (d < best) best = d;
  };
  for (std::size_t i = 0; i < tr.records.size(); ++i) {
    const TraceRecord& rec = tr.records[i];
    score(rec.state);
    if (rec.nmac) return -1;
    if (i + 1 < tr.records.size()) {
      double dt = tr.records[i + 1].t_abs - rec.t_abs;
      ControlFrame u{rec.a_o, rec.a_i, rec.r_v};
      score(propagate(rec.state, u, dt / 2));
    }
  }
  return best;
}

struct ScheduleSearch {
  const Scenario& base;
  bool closure;
  double horizon;
  double lo, hi;  // channel value range

  Scenario with_schedule(const std::vector<ScheduleEntry>& sched) const {
    Scenario sc = base;
    sc.intruder.kind = closure ? PolicyKind::ClosureSchedule : PolicyKind::Scripted;
    sc.intruder.schedule = sched;
    return sc;
  }

  std::vector<ScheduleEntry> random_schedule(std::mt19937_64& rng) const {
    std::vector<ScheduleEntry> sched;
    int segments = 1 + (int)(rng() % 8);
    double t = 0;
    std::uniform_real_distribution<double> dwell(0.1, std::max(0.2, horizon / 4));
    std::uniform_real_distribution<double> value(lo, hi);
    bool bang = (rng() & 1) != 0;
    for (int i = 0; i < segments && t < horizon; ++i) {
      double v = bang ? ((rng() & 1) ? hi : lo) : value(rng);
      sched.push_back({t, v});
      t += dwell(rng);
    }
    return sched;
  }

  std::vector<ScheduleEntry> perturb(const std::vector<ScheduleEntry>& sched,
                                     std::mt19937_64& rng) const {
    std::vector<ScheduleEntry> out = sched;
    if (out.empty()) return random_schedule(rng);
    std::size_t k = rng() % out.size();
    switch (rng() % 3) {
      case 0: {  // jitter one switch time
        std::normal_distribution<double> jitter(0.0, 0.5);
        out[k].t = std::clamp(out[k].t + jitter(rng), 0.0, horizon);
        std::sort(out.begin(), out.end(),
                  [](const ScheduleEntry& a, const ScheduleEntry& b) { return a.t < b.t; });
        break;
      }
      case 1:  // flip one value to the opposite extreme
        out[k].value = (out[k].value > (lo + hi) / 2) ? lo : hi;
        break;
      case 2: {  // re-draw one value
        out[k].value = std::uniform_real_distribution<double>(lo, hi)(rng);
        break;
      }
    }
    return out;
  }
};

}  // namespace

Scenario replay_scenario(const Scenario& sc, const Counterexample& cex) {
  Scenario out = sc;
  if (!has_vertical_intruder(sc.variant) && !has_horizontal_intruder(sc.variant)) {
    out.intruder.kind = PolicyKind::None;
    out.intruder.schedule.clear();
    return out;
  }
  out.intruder.kind = cex.closure_channel ? PolicyKind::ClosureSchedule : PolicyKind::Scripted;
  out.intruder.schedule = cex.schedule;
  return out;
}

std::optional<Counterexample> falsify(const Scenario& sc, int budget, int workers) {
  if (budget < 1) throw std::invalid_argument("falsify budget must be >= 1");
  ValidatedParams vp = validate_params(sc.params, sc.variant);
  const Params& P = vp.get();
  double horizon = sc.horizon > 0 ? sc.horizon : simulate_horizon(sc).horizon;

  bool vertical = has_vertical_intruder(sc.variant);
  bool closure = has_horizontal_intruder(sc.variant);
  double e = P.c * (1 - 1e-9);
  ScheduleSearch search{sc, closure, horizon, closure ? 0.0 : -e, closure ? P.v_max : e};

  // Deterministic seed rollouts first: the scenario's own policy channel is
  // covered by constant extremes, a mid-horizon flip, and (when the region
  // verdict is false) a schedule aimed at the violation witness.
  std::vector<std::vector<ScheduleEntry>> seeds;
  seeds.push_back({});  // empty schedule = non-maneuvering rollout
  if (vertical || closure) {
    seeds.push_back({{0, search.hi}});
    seeds.push_back({{0, search.lo}});
    seeds.push_back({{0, search.hi}, {horizon / 2, search.lo}});
    seeds.push_back({{0, search.lo}, {horizon / 2, search.hi}});
  }
  {
    RegionKind kind = region_for(sc.variant);
    Advisory adv0 = is_two_sided(sc.variant) ? with_default_v_up(sc.initial_advisory)
                                             : sc.initial_advisory;
    RegionVerdict v0 = eval_region({sc.initial, adv0, vp, kind});
    if (!v0.holds && v0.witness) {
      if (closure && v0.witness->r_v) seeds.push_back({{0, *v0.witness->r_v}});
      if (vertical) {
        // Chasing at the bound turns the relative motion into the nominal.
        double chase = adv0.coc ? e : adv0.w * e;
        seeds.push_back({{0, chase}});
      }
    }
  }

  int n_seeds = std::min<int>((int)seeds.size(), budget);
  int refine_budget = (vertical || closure) ? (budget - n_seeds) * 3 / 10 : 0;
  int n_random = std::max(0, budget - n_seeds - refine_budget);

  auto rollout = [&](const std::vector<ScheduleEntry>& sched) {
    return run(search.with_schedule(sched));
  };

  // Phase 0: seeds, in order.
  for (int i = 0; i < n_seeds; ++i) {
    RunOutcome oc = i == 0 ? run(sc) : rollout(seeds[i]);
    if (oc.status == RunStatus::Nmac) {
      Counterexample cex;
      cex.trace = std::move(oc.trace);
      cex.schedule = i == 0 ? sc.intruder.schedule : seeds[i];
      if (i == 0 && (vertical || closure) && sc.intruder.kind != PolicyKind::Scripted &&
          sc.intruder.kind != PolicyKind::ClosureSchedule) {
        // Rebuild the schedule the configured policy actually played.
        cex.schedule.clear();
        for (const auto& rec : cex.trace.records)
          cex.schedule.push_back({rec.t_abs, closure ? rec.r_v : rec.a_i});
      }
      cex.closure_channel = closure;
      cex.iteration = i;
      return cex;
    }
  }
  if (!vertical && !closure) return std::nullopt;  // no intruder channel to search

  // Phase 1: independent random restarts; iteration i is seeded by (seed, i)
  // so the outcome does not depend on the worker count. Lowest iteration
  // wins.
  std::vector<double> rob(n_random, kInf);
  std::atomic<int> found{budget + 1};
#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (int i = 0; i < n_random; ++i) {
    if ((int)found.load(std::memory_order_relaxed) < i) continue;
    std::mt19937_64 rng(splitmix(sc.seed ^ (0x5eed0000ULL + i)));
    auto sched = search.random_schedule(rng);
    RunOutcome oc = rollout(sched);
    rob[i] = robustness(oc.trace, P);
    if (oc.status == RunStatus::Nmac) {
      int expect = budget + 1;
      while (i < expect && !found.compare_exchange_weak(expect, i)) {
      }
    }
  }
  if ((int)found.load() <= n_random) {
    int i = found.load();
    std::mt19937_64 rng(splitmix(sc.seed ^ (0x5eed0000ULL + i)));
    auto sched = search.random_schedule(rng);
    RunOutcome oc = rollout(sched);
    Counterexample cex{std::move(oc.trace), sched, closure, n_seeds + i};
    return cex;
  }

  // Phase 2: coordinate-wise refinement of the most dangerous rollout.
  std::vector<ScheduleEntry> best_sched;
  double best_rob = kInf;
  for (int i = 0; i < n_random; ++i) {
    if (rob[i] < best_rob) {
      best_rob = rob[i];
      std::mt19937_64 rng(splitmix(sc.seed ^ (0x5eed0000ULL + i)));
      best_sched = search.random_schedule(rng);
    }
  }
  if (best_sched.empty() && refine_budget > 0) {
    std::mt19937_64 rng(splitmix(sc.seed));
    best_sched = search.random_schedule(rng);
  }
  for (int round = 0; round * 8 < refine_budget; ++round) {
    int batch = std::min(8, refine_budget - round * 8);
    std::vector<std::vector<ScheduleEntry>> props(batch);
    std::vector<double> scores(batch, kInf);
    std::vector<int> hit(batch, 0);
    for (int j = 0; j < batch; ++j) {
      std::mt19937_64 rng(splitmix(sc.seed ^ (0xbe51f1e0ULL + round * 131 + j)));
      props[j] = search.perturb(best_sched, rng);
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (int j = 0; j < batch; ++j) {
      RunOutcome oc = rollout(props[j]);
      scores[j] = robustness(oc.trace, P);
      hit[j] = oc.status == RunStatus::Nmac;
    }
    for (int j = 0; j < batch; ++j) {
      if (hit[j]) {
        RunOutcome oc = rollout(props[j]);
        Counterexample cex{std::move(oc.trace), props[j], closure,
                           n_seeds + n_random + round * 8 + j};
        return cex;
      }
      if (scores[j] < best_rob) {
        best_rob = scores[j];
        best_sched = props[j];
      }
    }
  }
  return std::nullopt;
}

}  // namespace acaslab
