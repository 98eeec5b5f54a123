#pragma once

#include <cstdint>
#include <vector>

#include "acaslab/oracle.hpp"
#include "acaslab/regions.hpp"

namespace acaslab {

enum class ExecMode { Serial, Parallel };

// Data-parallel region evaluation over independent queries. The serial path
// is the reference implementation; the parallel path must produce identical
// verdicts (the evaluators are pure functions over immutable inputs).
std::vector<RegionVerdict> eval_region_batch(const std::vector<RegionQuery>& queries,
                                             ExecMode mode);
std::vector<RegionVerdict> oracle_batch(const std::vector<RegionQuery>& queries, double dt,
                                        double t_max, ExecMode mode);

struct GridSpec {
  double r_min = 0, r_max = 0, r_step = 1;
  double h_min = 0, h_max = 0, h_step = 1;
  double v = 0;  // fixed vertical closure rate, ft/s
  Advisory advisory;
  RegionKind kind = RegionKind::LInf;
  std::optional<RegionKind> compare_kind;  // second verdict column
  // Second column evaluated with a_lo - c and a_up + c instead: the envelope
  // an ownship can still guarantee when a vertically-maneuvering intruder
  // eats into its relative acceleration.
  bool compare_derated = false;
};

struct GridResult {
  std::size_t nr = 0, nh = 0;
  std::vector<double> r_values, h_values;
  std::vector<std::uint8_t> holds;   // row-major, r outer, h inner
  std::vector<std::uint8_t> holds2;  // present in comparison modes
};

/// Rasterizes the region over the (r, h) grid at fixed v. Throws
/// std::invalid_argument on an empty range.
GridResult raster_grid(const GridSpec& g, const ValidatedParams& p, ExecMode mode);

}  // namespace acaslab
