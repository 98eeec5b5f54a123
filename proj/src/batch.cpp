#include "acaslab/batch.hpp"

#include <stdexcept>

namespace acaslab {

namespace {

template <typename F>
std::vector<RegionVerdict> map_queries(std::size_t n, ExecMode mode, F&& f) {
  std::vector<RegionVerdict> out(n);
  if (mode == ExecMode::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 32)
#endif
    for (long i = 0; i < (long)n; ++i) out[i] = f(i);
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
  }
  return out;
}

}  // namespace

std::vector<RegionVerdict> eval_region_batch(const std::vector<RegionQuery>& queries,
                                             ExecMode mode) {
  return map_queries(queries.size(), mode, [&](std::size_t i) { return eval_region(queries[i]); });
}

std::vector<RegionVerdict> oracle_batch(const std::vector<RegionQuery>& queries, double dt,
                                        double t_max, ExecMode mode) {
  return map_queries(queries.size(), mode,
                     [&](std::size_t i) { return oracle_eval(queries[i], dt, t_max); });
}

GridResult raster_grid(const GridSpec& g, const ValidatedParams& p, ExecMode mode) {
  if (g.r_step <= 0 || g.h_step <= 0) throw std::invalid_argument("grid steps must be > 0");
  GridResult res;
  for (double r = g.r_min; r <= g.r_max + g.r_step * 1e-9; r += g.r_step)
    res.r_values.push_back(r);
  for (double h = g.h_min; h <= g.h_max + g.h_step * 1e-9; h += g.h_step)
    res.h_values.push_back(h);
  res.nr = res.r_values.size();
  res.nh = res.h_values.size();
  if (res.nr == 0 || res.nh == 0) throw std::invalid_argument("empty grid range");

  std::vector<RegionQuery> queries;
  queries.reserve(res.nr * res.nh);
  for (double r : res.r_values)
    for (double h : res.h_values)
      queries.push_back({EncounterState{r, h, g.v, 0}, g.advisory, p, g.kind});

  auto verdicts = eval_region_batch(queries, mode);
  res.holds.resize(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) res.holds[i] = verdicts[i].holds ? 1 : 0;

  if (g.compare_kind || g.compare_derated) {
    ValidatedParams p2 = p;
    if (g.compare_derated) {
      Params raw = p.get();
      raw.a_lo -= raw.c;
      raw.a_up += raw.c;
      p2 = validate_params(raw, p.variant());
    }
    RegionKind kind2 = g.compare_kind.value_or(g.kind);
    for (auto& q : queries) {
      q.kind = kind2;
      q.params = p2;
    }
    auto v2 = eval_region_batch(queries, mode);
    res.holds2.resize(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) res.holds2[i] = v2[i].holds ? 1 : 0;
  }
  return res;
}

}  // namespace acaslab
