#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "acaslab/core.hpp"
#include "acaslab/dynamics.hpp"
#include "acaslab/regions.hpp"

namespace acaslab {

struct StrategyBoundsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PolicyCapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ownship winning strategy of the variant's safety proof. c_o is the working
// estimate of the intruder acceleration bound used by the bounded/safeable
// vertical variants; it defaults to the worst case c.
struct OwnshipStrategy {
  ModelVariant variant;
  double a_lo = 0;
  double a_up = 0;
  double a_max = 0;
  double c = 0;
  double c_o = 0;

  OwnshipStrategy(const ValidatedParams& p, std::optional<double> c_o_estimate = std::nullopt);
};

/// Acceleration the proof strategy picks at s under adv. Case boundaries
/// resolve by first match. Throws StrategyBoundsError if |a_o| > a_max.
double ownship_accel(const OwnshipStrategy& st, const EncounterState& s, const Advisory& adv);

enum class PolicyKind { None, BangBang, RandomPiecewise, Scripted, ClosureSchedule };

struct ScheduleEntry {
  double t = 0;      // absolute time the value takes effect
  double value = 0;  // a_i (vertical policies) or r_v (closure schedule)
};

struct IntruderPolicy {
  PolicyKind kind = PolicyKind::None;
  std::vector<ScheduleEntry> schedule;  // Scripted / ClosureSchedule
  double dwell_mean = 1.0;              // RandomPiecewise
  double dwell_min = 0.1;
};

struct IntruderMove {
  double a_i = 0;
  std::optional<double> r_v;  // emitted by the closure channel only
  double dwell = 0;           // time until the intruder re-decides, > 0
};

// Stateful runtime for one intruder policy. Emitted accelerations stay
// strictly inside (-c_o, c_o); closure rates stay within [0, v_max].
class IntruderAgent {
 public:
  IntruderAgent(const IntruderPolicy& policy, ModelVariant variant, const ValidatedParams& p,
                std::uint64_t seed);

  // The intruder observes the advisory and the ownship's current choice a_o,
  // never more. eps drives the bang-bang one-event lookahead.
  IntruderMove move(const EncounterState& s, const Advisory& adv, double a_o, double t_abs,
                    double c_o, double eps, double horizon_rem);

 private:
  IntruderPolicy policy_;
  ModelVariant variant_;
  Params params_;
  std::mt19937_64 rng_;
  std::size_t cursor_ = 0;
};

enum class IssuerMode { KeepOrFilter, ForcedReissue, Adversarial };

struct IssuerConfig {
  IssuerMode mode = IssuerMode::KeepOrFilter;
  AdvisoryCatalog catalog = default_catalog();
};

struct IssueResult {
  std::optional<Advisory> advisory;  // nullopt: no candidate passes the region
  bool tested = false;               // false for the untested keep branch
  RegionVerdict verdict;             // of the returned advisory (when tested)
};

/// Default issuer mode of the variant: keep-or-filter for the infinite-time
/// models, forced re-issue for the bounded/safeable ones.
IssuerMode default_issuer_mode(ModelVariant m);

// Picks the next advisory at an issuance point. KeepOrFilter may return
// `current` without a test; ForcedReissue re-tests everything and walks a
// deterministic candidate list (current, follow-up witness of the previous
// verdict, monotone-extreme targets, catalog, synthesized grid); Adversarial
// picks the admissible candidate with the smallest region margin.
IssueResult issue_advisory(const IssuerConfig& issuer, const EncounterState& s,
                           const Advisory& current, RegionKind kind, const ValidatedParams& p,
                           const std::optional<RegionWitness>& last_witness = std::nullopt);

}  // namespace acaslab
