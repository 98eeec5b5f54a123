#pragma once

#include "acaslab/regions.hpp"

namespace acaslab {

// Brute-force check of the region formulas: the time quantifier is sampled at
// dt over the horizontal-conflict window (position by trapezoid quadrature of
// the piecewise-affine nominal rate), the closure-rate quantifier on a
// 1000-point grid, existential follow-up targets on a 16-point candidate set,
// and the unbounded time tail is decided from the linear-branch slope.
// Exact up to grid resolution; the comparison harness owns the tolerance
// band. t_max must exceed any rate-switch time of the sampled nominals.
RegionVerdict oracle_eval(const RegionQuery& q, double dt, double t_max);

/// Disagreements between oracle_eval and eval_region are admissible when the
/// exact evaluator's |margin| is below this band: 2*dt*(|v| + a*t_max).
double oracle_tolerance_band(const RegionQuery& q, double dt, double t_max);

}  // namespace acaslab
