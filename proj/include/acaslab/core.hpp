#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace acaslab {

// Internal units are feet and seconds everywhere. Climb rates arrive from
// configuration in ft/min and are converted once at ingestion.
inline constexpr double kStandardGravityFps2 = 32.174;
inline constexpr double kDefaultVupFpm = 10000.0;

// Cap on synthesized climb-rate targets when deciding existential follow-up
// advisories (the formulas quantify over an unbounded target; anything past
// this is not flyable).
inline constexpr double kClimbTargetCapFpm = 10000.0;

/// ft/min -> ft/s, exactly x/60.
double convert_rate(double fpm);
/// ft/s -> ft/min.
double rate_to_fpm(double fps);

// The seven game variants. Order matches the model numbering.
enum class ModelVariant {
  InfNon,        // 1: infinite time, non-maneuvering intruder
  InfVert,       // 2: infinite time, vertically-maneuvering intruder
  InfHoriz,      // 3: infinite time, horizontally-maneuvering intruder
  BoundNon,      // 4: bounded time, non-maneuvering
  BoundVert,     // 5: bounded time, vertically-maneuvering
  SafeableNon,   // 6: safeable, non-maneuvering
  SafeableVert,  // 7: safeable, vertically-maneuvering
};

enum class RegionKind { LInf, LInfHoriz, CEps, CSafeable };

const char* variant_name(ModelVariant m);
std::optional<ModelVariant> variant_from_name(std::string_view name);
const char* region_kind_name(RegionKind k);
std::optional<RegionKind> region_kind_from_name(std::string_view name);

/// Region family tested at advisory issuance for the given variant.
RegionKind region_for(ModelVariant m);

bool has_vertical_intruder(ModelVariant m);    // models 2, 5, 7
bool has_horizontal_intruder(ModelVariant m);  // model 3
bool is_two_sided(ModelVariant m);             // models 4-7: advisory carries v_up
bool is_safeable(ModelVariant m);              // models 6, 7
bool is_time_bounded(ModelVariant m);          // models 4-7: epsilon re-issue

// Relative encounter state. r is the horizontal separation, h the vertical
// separation of the intruder relative to the ownship, v the vertical closure
// rate (positive when the ownship climbs relative to the intruder, shrinking
// h), and t the time since the last advisory was issued.
struct EncounterState {
  double r = 0;
  double h = 0;
  double v = 0;
  double t = 0;
};

struct Params {
  double r_p = 500.0;                        // puck radius, ft
  double h_p = 100.0;                        // puck half-height, ft
  double r_v = 250.0;                        // horizontal closure rate, ft/s
  double a_lo = kStandardGravityFps2 / 4;    // minimum compliant accel, ft/s^2
  double a_up = kStandardGravityFps2 / 2;    // upper nominal accel, ft/s^2
  double a_max = kStandardGravityFps2 / 2;   // ownship physical limit, ft/s^2
  double c = kStandardGravityFps2 / 10;      // intruder vertical accel bound
  double v_max = 500.0;                      // max closure rate, model 3 only
  double epsilon = -1.0;                     // advisory re-issue bound, s; < 0 = unbounded
  double g = kStandardGravityFps2;
};

struct ConstraintViolation : std::runtime_error {
  std::string constraint;
  explicit ConstraintViolation(std::string name)
      : std::runtime_error("constraint violated: " + name), constraint(std::move(name)) {}
};

// Parameters that passed the init constraints of one model variant. The only
// parameter type accepted by region and engine entry points.
class ValidatedParams {
 public:
  const Params& get() const { return p_; }
  const Params* operator->() const { return &p_; }
  ModelVariant variant() const { return m_; }

 private:
  friend ValidatedParams validate_params(const Params& p, ModelVariant m);
  ValidatedParams(const Params& p, ModelVariant m) : p_(p), m_(m) {}
  Params p_;
  ModelVariant m_;
};

/// Checks the init constraints of variant m. Returns p unchanged on success,
/// throws ConstraintViolation naming the violated conjunct otherwise.
ValidatedParams validate_params(const Params& p, ModelVariant m);

// An advisory (w, v_lo[, v_up]) in relative climb-rate terms. w = +1 is
// upsense (climb at least v_lo), w = -1 downsense. Two-sided variants also
// bound the rate by v_up in the w direction. COC is a sentinel that imposes
// nothing and skips region tests.
struct Advisory {
  int w = +1;
  double v_lo = 0;  // ft/s, relative
  std::optional<double> v_up;
  std::string label;
  bool coc = false;
};

/// w in {-1,+1} and, when v_up is present, w*v_lo <= w*v_up.
bool advisory_well_formed(const Advisory& a);

/// Copy of `a` with v_up defaulted to w * 10000 ft/min when absent.
Advisory with_default_v_up(const Advisory& a);

// Catalog entries keep the absolute ownship climb rate they were defined
// with; the advisory's v_lo is the same number reinterpreted as a relative
// rate (the models are fully relative, the pilot-facing transform is out of
// scope).
struct CatalogEntry {
  Advisory advisory;
  double abs_rate_fpm = 0;
};

struct AdvisoryCatalog {
  std::vector<CatalogEntry> entries;
  const CatalogEntry* lookup(std::string_view label) const;
};

/// The advisories derivable from prose: COC, DND, CL1500, SCL2500, DNC2000,
/// DNC. Everything else is user configuration.
AdvisoryCatalog default_catalog();

}  // namespace acaslab
