#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "acaslab/batch.hpp"
#include "acaslab/engine.hpp"

namespace acaslab {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scenario files are UTF-8 JSON with unit-bearing keys (ft, ft/s, ft/min,
// multiples of g); unknown keys are rejected. See README for the schema.
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& sc);
Scenario load_scenario_file(const std::filesystem::path& path);
void write_scenario_file(const std::filesystem::path& path, const Scenario& sc);

struct GridFile {
  ModelVariant variant = ModelVariant::InfNon;
  Params params;
  GridSpec grid;
};

GridFile grid_from_json(const std::string& text);
GridFile load_grid_file(const std::filesystem::path& path);

// Trace CSV, header exactly:
// t_s,r_ft,h_ft,v_fps,a_o_fps2,a_i_fps2,r_v_fps,adv_w,adv_vlo_fps,adv_vup_fps,event,nmac
// Numbers carry 17 significant digits so a re-read trace replays bit-exactly.
std::string trace_to_csv(const Trace& trace);
Trace trace_from_csv(const std::string& text);
void write_trace_csv(const std::filesystem::path& path, const Trace& trace);

std::string grid_to_csv(const GridResult& grid);

/// One-line JSON rendering of a region verdict.
std::string verdict_to_json(const RegionVerdict& v);

}  // namespace acaslab
