#pragma once

#include <optional>
#include <string>

#include "acaslab/core.hpp"
#include "acaslab/nominal.hpp"

namespace acaslab {

struct RegionQuery {
  EncounterState state;
  Advisory advisory;
  ValidatedParams params;
  RegionKind kind = RegionKind::LInf;
};

// Concrete quantifier instantiation falsifying the region formula (t and the
// nominal point; plus the violating closure rate for the horizontal region),
// or the existential follow-up target found for the safeable region.
struct RegionWitness {
  std::optional<double> t;
  std::optional<double> r_n;
  std::optional<double> h_n;
  std::optional<double> r_v;              // violating closure rate (LInfHoriz)
  std::optional<double> followup_target;  // safeable follow-up v_lo found
  std::optional<int> followup_sense;      // sense the follow-up was tested with
  bool followup_none = false;             // no follow-up target exists below the cap
  // The witness instantiation also has |h - h_n| <= h_p, so the compliance
  // boundary trajectory meets the puck there.
  bool puck_entry = false;
};

struct RegionVerdict {
  bool holds = false;
  std::optional<RegionWitness> witness;
  // Signed clearance of the deciding inequality chain; > 0 iff holds. Absent
  // when the verdict is decided without evaluating the nominal (empty
  // conflict window, malformed advisory bounds).
  std::optional<double> margin;
  bool degenerate_window = false;  // r_v = 0 with |r| > r_p
  std::optional<std::string> reason;
  double followup_cap = 0;  // climb-target bound used for existential clauses, ft/s
};

enum class ExtremeSide { LowerL, UpperU };

// Nominal state reached at the re-issue bound: position offset h_ex and rate
// v_ex of the Lo (a = a_lo) or Up (a = a_up, overcompliance keeps v) nominal
// at time eps.
struct ExtremeState {
  double h_ex = 0;
  double v_ex = 0;
  ExtremeSide side = ExtremeSide::LowerL;
};

ExtremeState extreme_state(ExtremeSide side, double v, int w, double v_target, double a,
                           double eps);

// Infinite-time lower region: every t with |r - r_v t| <= r_p has the lower
// nominal clear of the puck, w(h_n - h) > h_p.
RegionVerdict eval_L_inf(const EncounterState& s, const Advisory& adv,
                         const ValidatedParams& p);

// Same with the closure rate universally quantified over [0, v_max].
RegionVerdict eval_L_inf_horiz(const EncounterState& s, const Advisory& adv,
                               const ValidatedParams& p);

// Time-bounded clauses: quantification restricted to t <= eps (eps < 0 means
// unbounded). The U clause tests the upper nominal against w(h - h_n) > h_p.
RegionVerdict eval_L_eps(const EncounterState& s, int w, double v_lo, const ValidatedParams& p,
                         double eps);
RegionVerdict eval_U_eps(const EncounterState& s, int w, double v_up, const ValidatedParams& p,
                         double eps);

// Two-sided bounded-time region: w v_lo <= w v_up and (L_eps or U_eps).
RegionVerdict eval_C_eps(const EncounterState& s, const Advisory& adv,
                         const ValidatedParams& p);

// Safeable region: bounded-time safety plus an existential follow-up advisory
// that is infinite-time safe from the extreme state at eps. The follow-up on
// the U side is tested with reversed sense -w. The existential is decided at
// the monotone-maximal target below the climb cap.
RegionVerdict eval_C_safeable(const EncounterState& s, const Advisory& adv,
                              const ValidatedParams& p);

RegionVerdict eval_region(const RegionQuery& q);

/// Climb-target cap applied to existential follow-up advisories, ft/s.
double followup_target_cap();

}  // namespace acaslab
