#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "acaslab/batch.hpp"
#include "acaslab/engine.hpp"
#include "acaslab/oracle.hpp"
#include "acaslab/scenario_io.hpp"

using namespace acaslab;

namespace {

// ACASLAB_SEED overrides the scenario seed.
void apply_env_seed(Scenario& sc) {
  if (const char* s = std::getenv("ACASLAB_SEED")) sc.seed = std::strtoull(s, nullptr, 10);
}

RegionKind resolve_kind(const Scenario& sc, const std::string& kind_flag) {
  if (kind_flag.empty()) return region_for(sc.variant);
  auto k = region_kind_from_name(kind_flag);
  if (!k) throw ParseError("unknown region kind \"" + kind_flag + "\"");
  return *k;
}

Advisory advisory_for(const Scenario& sc, RegionKind kind) {
  bool two_sided = kind == RegionKind::CEps || kind == RegionKind::CSafeable;
  return two_sided ? with_default_v_up(sc.initial_advisory) : sc.initial_advisory;
}

int cmd_check_region(const std::string& file, const std::string& kind_flag) {
  Scenario sc = load_scenario_file(file);
  RegionKind kind = resolve_kind(sc, kind_flag);
  ValidatedParams vp = validate_params(sc.params, sc.variant);
  RegionVerdict v = eval_region({sc.initial, advisory_for(sc, kind), vp, kind});
  std::cout << verdict_to_json(v) << "\n";
  return v.holds ? 0 : 2;
}

int cmd_simulate(const std::string& file, const std::string& out, bool adversarial) {
  Scenario sc = load_scenario_file(file);
  apply_env_seed(sc);
  if (adversarial) sc.issuer.mode = IssuerMode::Adversarial;
  RunOutcome oc = run(sc);
  if (!out.empty()) write_trace_csv(out, oc.trace);
  std::cout << run_status_name(oc.status) << " t=" << oc.t_event
            << " records=" << oc.trace.records.size() << "\n";
  switch (oc.status) {
    case RunStatus::SafeToHorizon: return 0;
    case RunStatus::Nmac: return 3;
    case RunStatus::NoSafeAdvisory: return 4;
  }
  return 1;
}

int cmd_falsify(const std::string& file, int budget, int workers, const std::string& out,
                bool adversarial) {
  Scenario sc = load_scenario_file(file);
  apply_env_seed(sc);
  if (adversarial) sc.issuer.mode = IssuerMode::Adversarial;
  auto cex = falsify(sc, budget, workers);
  if (!cex) {
    std::cout << "none found (budget " << budget << ")\n";
    return 0;
  }
  std::cout << "counterexample at iteration " << cex->iteration << ", NMAC t="
            << cex->trace.records.back().t_abs << "\n";
  if (!out.empty()) {
    write_scenario_file(out, replay_scenario(sc, *cex));
    std::cout << "replay written to " << out << "\n";
  }
  return 0;
}

int cmd_raster(const std::string& file, const std::string& out, bool serial) {
  GridFile gf = load_grid_file(file);
  ValidatedParams vp = validate_params(gf.params, gf.variant);
  GridResult grid = raster_grid(gf.grid, vp, serial ? ExecMode::Serial : ExecMode::Parallel);
  if (!out.empty()) {
    std::ofstream of(out);
    if (!of) throw ParseError("cannot write " + out);
    of << grid_to_csv(grid);
  } else {
    std::cout << grid_to_csv(grid);
  }
  // The safeable region refines the bounded-time region; flag any grid cell
  // claiming otherwise.
  if (gf.grid.kind == RegionKind::CEps && gf.grid.compare_kind == RegionKind::CSafeable) {
    for (std::size_t i = 0; i < grid.holds.size(); ++i)
      if (grid.holds2[i] && !grid.holds[i]) {
        std::cerr << "containment violation: safeable cell outside the eps region\n";
        return 5;
      }
  }
  return 0;
}

int cmd_filter(const std::string& file, const std::string& kind_flag) {
  Scenario sc = load_scenario_file(file);
  RegionKind kind = resolve_kind(sc, kind_flag);
  ValidatedParams vp = validate_params(sc.params, sc.variant);
  bool two_sided = kind == RegionKind::CEps || kind == RegionKind::CSafeable;
  for (const auto& e : default_catalog().entries) {
    Advisory adv = two_sided ? with_default_v_up(e.advisory) : e.advisory;
    RegionVerdict v = eval_region({sc.initial, adv, vp, kind});
    std::cout << "{\"label\":\"" << e.advisory.label << "\",\"holds\":" << (v.holds ? "true" : "false");
    if (v.margin) std::cout << ",\"margin\":" << *v.margin;
    std::cout << "}\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acaslab: collision-avoidance game laboratory"};
  app.require_subcommand(1);

  std::string file, out, kind_flag;
  int budget = 1000, workers = 0;
  bool adversarial = false, serial = false;

  auto* check = app.add_subcommand("check-region", "evaluate the safe region at a state");
  check->add_option("scenario", file)->required();
  check->add_option("--kind", kind_flag, "region kind (defaults to the model's)");

  auto* sim = app.add_subcommand("simulate", "run one game and write the trace");
  sim->add_option("scenario", file)->required();
  sim->add_option("--out", out, "trace CSV path");
  sim->add_flag("--adversarial-issuer", adversarial);

  auto* fal = app.add_subcommand("falsify", "search intruder schedules for an NMAC");
  fal->add_option("scenario", file)->required();
  fal->add_option("--budget", budget)->check(CLI::PositiveNumber);
  fal->add_option("--workers", workers);
  fal->add_option("--out", out, "replay scenario path");
  fal->add_flag("--adversarial-issuer", adversarial);

  auto* ras = app.add_subcommand("raster", "rasterize a region over an (r, h) grid");
  ras->add_option("grid", file)->required();
  ras->add_option("--out", out, "grid CSV path");
  ras->add_flag("--serial", serial, "use the serial reference path");

  auto* fil = app.add_subcommand("filter-advisories", "catalog advisories passing the region");
  fil->add_option("scenario", file)->required();
  fil->add_option("--kind", kind_flag);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check_region(file, kind_flag);
    if (sim->parsed()) return cmd_simulate(file, out, adversarial);
    if (fal->parsed()) return cmd_falsify(file, budget, workers, out, adversarial);
    if (ras->parsed()) return cmd_raster(file, out, serial);
    if (fil->parsed()) return cmd_filter(file, kind_flag);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
