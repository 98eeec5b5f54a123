#include "acaslab/scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace acaslab {

using nlohmann::json;

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw ParseError("unknown key \"" + it.key() + "\" in " + where);
  }
}

double want_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError("missing key \"" + std::string(key) + "\" in " + where);
  if (!obj[key].is_number()) throw ParseError("key \"" + std::string(key) + "\" in " + where +
                                              " must be a number");
  return obj[key].get<double>();
}

double opt_number(const json& obj, const char* key, double dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number()) throw ParseError(std::string("key \"") + key + "\" must be a number");
  return obj[key].get<double>();
}

Params parse_params(const json& j) {
  Params p;
  if (j.is_null()) return p;
  check_keys(j,
             {"r_p_ft", "h_p_ft", "r_v_fps", "a_lo_g", "a_up_g", "a_max_g", "c_g", "v_max_fps",
              "epsilon_s", "g_fps2"},
             "params");
  p.g = opt_number(j, "g_fps2", p.g);
  p.r_p = opt_number(j, "r_p_ft", p.r_p);
  p.h_p = opt_number(j, "h_p_ft", p.h_p);
  p.r_v = opt_number(j, "r_v_fps", p.r_v);
  p.a_lo = opt_number(j, "a_lo_g", 0.25) * p.g;
  p.a_up = opt_number(j, "a_up_g", 0.5) * p.g;
  p.a_max = opt_number(j, "a_max_g", 0.5) * p.g;
  p.c = opt_number(j, "c_g", 0.1) * p.g;
  p.v_max = opt_number(j, "v_max_fps", p.v_max);
  p.epsilon = opt_number(j, "epsilon_s", p.epsilon);
  return p;
}

Advisory parse_advisory(const json& j, const std::string& where) {
  if (j.contains("label")) {
    check_keys(j, {"label"}, where);
    auto cat = default_catalog();
    const CatalogEntry* e = cat.lookup(j["label"].get<std::string>());
    if (!e) throw ParseError("unknown advisory label in " + where);
    return e->advisory;
  }
  check_keys(j, {"w", "v_lo_fpm", "v_up_fpm"}, where);
  Advisory a;
  double w = want_number(j, "w", where);
  if (w != 1 && w != -1) throw ParseError("advisory w must be +1 or -1 in " + where);
  a.w = (int)w;
  a.v_lo = convert_rate(want_number(j, "v_lo_fpm", where));
  if (j.contains("v_up_fpm")) a.v_up = convert_rate(j["v_up_fpm"].get<double>());
  a.label = "custom";
  return a;
}

IntruderPolicy parse_intruder(const json& j) {
  IntruderPolicy pol;
  if (j.is_null()) return pol;
  std::string kind = j.value("kind", "none");
  if (kind == "none") {
    check_keys(j, {"kind"}, "intruder");
    pol.kind = PolicyKind::None;
  } else if (kind == "bangbang") {
    check_keys(j, {"kind"}, "intruder");
    pol.kind = PolicyKind::BangBang;
  } else if (kind == "random") {
    check_keys(j, {"kind", "dwell_mean_s", "dwell_min_s"}, "intruder");
    pol.kind = PolicyKind::RandomPiecewise;
    pol.dwell_mean = opt_number(j, "dwell_mean_s", pol.dwell_mean);
    pol.dwell_min = opt_number(j, "dwell_min_s", pol.dwell_min);
  } else if (kind == "scripted" || kind == "closure") {
    check_keys(j, {"kind", "schedule"}, "intruder");
    pol.kind = kind == "scripted" ? PolicyKind::Scripted : PolicyKind::ClosureSchedule;
    const char* value_key = kind == "scripted" ? "a_i_fps2" : "r_v_fps";
    if (!j.contains("schedule") || !j["schedule"].is_array())
      throw ParseError("intruder schedule must be an array");
    for (const auto& e : j["schedule"]) {
      check_keys(e, {"t_s", value_key}, "intruder schedule entry");
      pol.schedule.push_back({want_number(e, "t_s", "schedule"),
                              want_number(e, value_key, "schedule")});
    }
  } else {
    throw ParseError("unknown intruder kind \"" + kind + "\"");
  }
  return pol;
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, {"model", "params", "initial", "advisory", "intruder", "horizon_s", "seed",
                 "cadence_s"},
             "scenario");
  Scenario sc;
  if (!j.contains("model")) throw ParseError("missing key \"model\"");
  auto mv = variant_from_name(j["model"].get<std::string>());
  if (!mv) throw ParseError("unknown model \"" + j["model"].get<std::string>() + "\"");
  sc.variant = *mv;
  sc.params = parse_params(j.contains("params") ? j["params"] : json());
  if (!j.contains("initial")) throw ParseError("missing key \"initial\"");
  check_keys(j["initial"], {"r_ft", "h_ft", "v_fpm"}, "initial");
  sc.initial.r = want_number(j["initial"], "r_ft", "initial");
  sc.initial.h = want_number(j["initial"], "h_ft", "initial");
  sc.initial.v = convert_rate(want_number(j["initial"], "v_fpm", "initial"));
  if (!j.contains("advisory")) throw ParseError("missing key \"advisory\"");
  sc.initial_advisory = parse_advisory(j["advisory"], "advisory");
  sc.intruder = parse_intruder(j.contains("intruder") ? j["intruder"] : json());
  sc.horizon = opt_number(j, "horizon_s", -1);
  sc.seed = (std::uint64_t)opt_number(j, "seed", 0);
  sc.cadence = opt_number(j, "cadence_s", 1.0);
  return sc;
}

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["model"] = variant_name(sc.variant);
  const Params& p = sc.params;
  j["params"] = {{"r_p_ft", p.r_p},       {"h_p_ft", p.h_p},       {"r_v_fps", p.r_v},
                 {"a_lo_g", p.a_lo / p.g}, {"a_up_g", p.a_up / p.g}, {"a_max_g", p.a_max / p.g},
                 {"c_g", p.c / p.g},       {"v_max_fps", p.v_max},  {"epsilon_s", p.epsilon},
                 {"g_fps2", p.g}};
  j["initial"] = {{"r_ft", sc.initial.r},
                  {"h_ft", sc.initial.h},
                  {"v_fpm", rate_to_fpm(sc.initial.v)}};
  json adv;
  adv["w"] = sc.initial_advisory.w;
  adv["v_lo_fpm"] = rate_to_fpm(sc.initial_advisory.v_lo);
  if (sc.initial_advisory.v_up) adv["v_up_fpm"] = rate_to_fpm(*sc.initial_advisory.v_up);
  j["advisory"] = adv;
  json in;
  switch (sc.intruder.kind) {
    case PolicyKind::None: in["kind"] = "none"; break;
    case PolicyKind::BangBang: in["kind"] = "bangbang"; break;
    case PolicyKind::RandomPiecewise:
      in["kind"] = "random";
      in["dwell_mean_s"] = sc.intruder.dwell_mean;
      in["dwell_min_s"] = sc.intruder.dwell_min;
      break;
    case PolicyKind::Scripted:
    case PolicyKind::ClosureSchedule: {
      bool closure = sc.intruder.kind == PolicyKind::ClosureSchedule;
      in["kind"] = closure ? "closure" : "scripted";
      json arr = json::array();
      for (const auto& e : sc.intruder.schedule) {
        json entry;
        entry["t_s"] = e.t;
        entry[closure ? "r_v_fps" : "a_i_fps2"] = e.value;
        arr.push_back(entry);
      }
      in["schedule"] = arr;
      break;
    }
  }
  j["intruder"] = in;
  j["horizon_s"] = sc.horizon;
  j["seed"] = sc.seed;
  j["cadence_s"] = sc.cadence;
  return j.dump(2);
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

void write_scenario_file(const std::filesystem::path& path, const Scenario& sc) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << scenario_to_json(sc) << "\n";
}

GridFile grid_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, {"model", "params", "grid", "advisory", "kind", "compare_kind",
                 "compare_derated"},
             "grid file");
  GridFile g;
  if (!j.contains("model")) throw ParseError("missing key \"model\"");
  auto mv = variant_from_name(j["model"].get<std::string>());
  if (!mv) throw ParseError("unknown model");
  g.variant = *mv;
  g.params = parse_params(j.contains("params") ? j["params"] : json());
  if (!j.contains("grid")) throw ParseError("missing key \"grid\"");
  const json& gr = j["grid"];
  check_keys(gr, {"r_min_ft", "r_max_ft", "r_step_ft", "h_min_ft", "h_max_ft", "h_step_ft",
                  "v_fps"},
             "grid");
  g.grid.r_min = want_number(gr, "r_min_ft", "grid");
  g.grid.r_max = want_number(gr, "r_max_ft", "grid");
  g.grid.r_step = want_number(gr, "r_step_ft", "grid");
  g.grid.h_min = want_number(gr, "h_min_ft", "grid");
  g.grid.h_max = want_number(gr, "h_max_ft", "grid");
  g.grid.h_step = want_number(gr, "h_step_ft", "grid");
  g.grid.v = opt_number(gr, "v_fps", 0);
  if (!j.contains("advisory")) throw ParseError("missing key \"advisory\"");
  g.grid.advisory = parse_advisory(j["advisory"], "advisory");
  if (!j.contains("kind")) throw ParseError("missing key \"kind\"");
  auto k = region_kind_from_name(j["kind"].get<std::string>());
  if (!k) throw ParseError("unknown region kind");
  g.grid.kind = *k;
  if (j.contains("compare_kind")) {
    auto k2 = region_kind_from_name(j["compare_kind"].get<std::string>());
    if (!k2) throw ParseError("unknown compare_kind");
    g.grid.compare_kind = *k2;
  }
  g.grid.compare_derated = j.value("compare_derated", false);
  return g;
}

GridFile load_grid_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return grid_from_json(ss.str());
}

std::string trace_to_csv(const Trace& trace) {
  std::string out =
      "t_s,r_ft,h_ft,v_fps,a_o_fps2,a_i_fps2,r_v_fps,adv_w,adv_vlo_fps,adv_vup_fps,event,nmac\n";
  for (const auto& rec : trace.records) {
    out += fmt17(rec.t_abs) + "," + fmt17(rec.state.r) + "," + fmt17(rec.state.h) + "," +
           fmt17(rec.state.v) + "," + fmt17(rec.a_o) + "," + fmt17(rec.a_i) + "," +
           fmt17(rec.r_v) + "," + std::to_string(rec.advisory.w) + "," +
           fmt17(rec.advisory.v_lo) + ",";
    if (rec.advisory.v_up) out += fmt17(*rec.advisory.v_up);
    out += ",";
    out += event_name(rec.event);
    out += rec.nmac ? ",1\n" : ",0\n";
  }
  return out;
}

Trace trace_from_csv(const std::string& text) {
  Trace tr;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty trace csv");
  const std::string header =
      "t_s,r_ft,h_ft,v_fps,a_o_fps2,a_i_fps2,r_v_fps,adv_w,adv_vlo_fps,adv_vup_fps,event,nmac";
  if (line != header) throw ParseError("bad trace csv header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    while (cells.size() < 12) cells.push_back("");
    TraceRecord rec;
    rec.t_abs = std::stod(cells[0]);
    rec.state.r = std::stod(cells[1]);
    rec.state.h = std::stod(cells[2]);
    rec.state.v = std::stod(cells[3]);
    rec.a_o = std::stod(cells[4]);
    rec.a_i = std::stod(cells[5]);
    rec.r_v = std::stod(cells[6]);
    rec.advisory.w = std::stoi(cells[7]);
    rec.advisory.v_lo = std::stod(cells[8]);
    if (!cells[9].empty()) rec.advisory.v_up = std::stod(cells[9]);
    for (EventKind e : {EventKind::None, EventKind::ReachLo, EventKind::ReachUp,
                        EventKind::TimeBound, EventKind::Horizon})
      if (cells[10] == event_name(e)) rec.event = e;
    rec.nmac = cells[11] == "1";
    tr.records.push_back(rec);
  }
  return tr;
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << trace_to_csv(trace);
}

std::string grid_to_csv(const GridResult& grid) {
  bool two = !grid.holds2.empty();
  std::string out = two ? "r_ft,h_ft,holds,holds2\n" : "r_ft,h_ft,holds\n";
  std::size_t i = 0;
  for (double r : grid.r_values)
    for (double h : grid.h_values) {
      out += fmt17(r) + "," + fmt17(h) + "," + (grid.holds[i] ? "1" : "0");
      if (two) out += grid.holds2[i] ? ",1" : ",0";
      out += "\n";
      ++i;
    }
  return out;
}

std::string verdict_to_json(const RegionVerdict& v) {
  json j;
  j["holds"] = v.holds;
  if (v.margin) j["margin"] = *v.margin;
  if (v.degenerate_window) j["degenerate_window"] = true;
  if (v.reason) j["reason"] = *v.reason;
  if (v.followup_cap > 0) j["followup_cap_fps"] = v.followup_cap;
  if (v.witness) {
    json w;
    const RegionWitness& wit = *v.witness;
    if (wit.t) w["t"] = *wit.t;
    if (wit.r_n) w["r_n"] = *wit.r_n;
    if (wit.h_n) w["h_n"] = *wit.h_n;
    if (wit.r_v) w["r_v"] = *wit.r_v;
    if (wit.followup_target) w["followup_target_fps"] = *wit.followup_target;
    if (wit.followup_sense) w["followup_sense"] = *wit.followup_sense;
    if (wit.followup_none) w["followup_none"] = true;
    if (wit.puck_entry) w["puck_entry"] = true;
    j["witness"] = w;
  }
  return j.dump();
}

}  // namespace acaslab
