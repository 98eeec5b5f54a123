#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acaslab/agents.hpp"
#include "acaslab/core.hpp"
#include "acaslab/dynamics.hpp"
#include "acaslab/regions.hpp"

namespace acaslab {

struct HorizonUndefined : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  ModelVariant variant = ModelVariant::InfNon;
  Params params;
  EncounterState initial;
  Advisory initial_advisory;
  IssuerConfig issuer;  // mode defaulted from the variant when loaded
  IntruderPolicy intruder;
  double horizon = -1;  // s; < 0 derives the default via simulate_horizon
  std::uint64_t seed = 0;
  double cadence = 1.0;        // advisory re-issue cadence, infinite-time models
  double c_o = -1;             // intruder-bound estimate; < 0 means worst case c
  double horizon_rv_floor = 50;  // closure-rate floor for the model-3 horizon
  double horizon_margin = 10;
};

struct TraceRecord {
  double t_abs = 0;
  EncounterState state;  // state.t is the time since the last advisory
  double a_o = 0;        // controls applied from this record to the next
  double a_i = 0;
  double r_v = 0;
  Advisory advisory;
  EventKind event = EventKind::None;
  bool nmac = false;
  std::optional<bool> region_holds;  // evaluated at advisory issuances
};

struct Trace {
  std::vector<TraceRecord> records;
};

enum class RunStatus { SafeToHorizon, Nmac, NoSafeAdvisory };

const char* run_status_name(RunStatus s);

struct RunOutcome {
  RunStatus status = RunStatus::SafeToHorizon;
  double t_event = 0;  // NMAC or NoSafeAdvisory time
  Trace trace;
};

struct HorizonResult {
  double horizon = 0;
  bool region_attested = false;  // r_v = 0: safety past the horizon rests on the region
};

/// Default horizon (r0 + r_p) / r_v + margin after which |r| > r_p for good;
/// model 3 uses the configured closure floor. Throws HorizonUndefined when
/// r_v = 0 and no horizon is configured.
HorizonResult simulate_horizon(const Scenario& sc);

// Plays one game: advisory issuance, ownship strategy, intruder inner loop,
// exact motion between events. NMAC is detected analytically inside every
// constant-control segment. Never throws for NoSafeAdvisory; that is a
// status.
RunOutcome run(const Scenario& sc);

struct Counterexample {
  Trace trace;
  std::vector<ScheduleEntry> schedule;  // intruder schedule that replays to NMAC
  bool closure_channel = false;         // schedule drives r_v instead of a_i
  int iteration = 0;
};

// Searches intruder schedules (piecewise constant, dwell >= 0.1 s; random
// restarts then coordinate-wise refinement of the most dangerous rollout) for
// an NMAC against the winning strategy. Deterministic for a fixed (seed,
// budget) regardless of worker count; every returned trace replays to NMAC.
std::optional<Counterexample> falsify(const Scenario& sc, int budget, int workers = 0);

/// Scenario with the intruder replaced by the counterexample schedule.
Scenario replay_scenario(const Scenario& sc, const Counterexample& cex);

}  // namespace acaslab
