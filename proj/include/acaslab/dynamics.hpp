#pragma once

#include <optional>

#include "acaslab/core.hpp"

namespace acaslab {

// Controls held constant over one motion segment. a_i is 0 in
// non-maneuvering variants; r_v is intruder-chosen in the horizontal variant
// and constant elsewhere.
struct ControlFrame {
  double a_o = 0;
  double a_i = 0;
  double r_v = 0;
};

enum class EventKind { None, ReachLo, ReachUp, TimeBound, Horizon };

const char* event_name(EventKind e);

struct NextEvent {
  EventKind kind = EventKind::Horizon;
  double t = 0;
};

/// Exact constant-acceleration flow: r -= r_v*dt, h -= v*dt + a*dt^2/2,
/// v += a*dt, t += dt, with a = a_o - a_i. No numerical integration.
EncounterState propagate(const EncounterState& s, const ControlFrame& u, double dt);

// Earliest of: w v crossing w v_lo, w v crossing w v_up (when present), the
// advisory time bound eps - t (eps >= 0), and the horizon. Crossing times are
// exact roots of the affine v(t); only strictly future crossings count.
// Ties resolve TimeBound > ReachUp > ReachLo > Horizon.
NextEvent next_event(const EncounterState& s, const ControlFrame& u, const Advisory& adv,
                     double eps, double horizon);

/// NMAC holds iff |r| <= r_p and |h| <= h_p (puck boundary included).
bool nmac(const EncounterState& s, const Params& p);

// Earliest time in [0, dt] at which the flow from s enters the puck, found
// analytically from the affine |r(t)| <= r_p window and the quadratic
// |h(t)| <= h_p window. nullopt when the segment stays clear.
std::optional<double> puck_entry_time(const EncounterState& s, const ControlFrame& u, double dt,
                                      const Params& p);

}  // namespace acaslab
