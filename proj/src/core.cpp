#include "acaslab/core.hpp"

#include <cmath>

namespace acaslab {

double convert_rate(double fpm) { return fpm / 60.0; }
double rate_to_fpm(double fps) { return fps * 60.0; }

const char* variant_name(ModelVariant m) {
  switch (m) {
    case ModelVariant::InfNon: return "inf-non";
    case ModelVariant::InfVert: return "inf-vert";
    case ModelVariant::InfHoriz: return "inf-horiz";
    case ModelVariant::BoundNon: return "bound-non";
    case ModelVariant::BoundVert: return "bound-vert";
    case ModelVariant::SafeableNon: return "safeable-non";
    case ModelVariant::SafeableVert: return "safeable-vert";
  }
  return "?";
}

std::optional<ModelVariant> variant_from_name(std::string_view name) {
  for (ModelVariant m : {ModelVariant::InfNon, ModelVariant::InfVert, ModelVariant::InfHoriz,
                         ModelVariant::BoundNon, ModelVariant::BoundVert,
                         ModelVariant::SafeableNon, ModelVariant::SafeableVert}) {
    if (name == variant_name(m)) return m;
  }
  return std::nullopt;
}

const char* region_kind_name(RegionKind k) {
  switch (k) {
    case RegionKind::LInf: return "linf";
    case RegionKind::LInfHoriz: return "linf-horiz";
    case RegionKind::CEps: return "ceps";
    case RegionKind::CSafeable: return "csafeable";
  }
  return "?";
}

std::optional<RegionKind> region_kind_from_name(std::string_view name) {
  for (RegionKind k :
       {RegionKind::LInf, RegionKind::LInfHoriz, RegionKind::CEps, RegionKind::CSafeable}) {
    if (name == region_kind_name(k)) return k;
  }
  return std::nullopt;
}

RegionKind region_for(ModelVariant m) {
  switch (m) {
    case ModelVariant::InfNon:
    case ModelVariant::InfVert: return RegionKind::LInf;
    case ModelVariant::InfHoriz: return RegionKind::LInfHoriz;
    case ModelVariant::BoundNon:
    case ModelVariant::BoundVert: return RegionKind::CEps;
    case ModelVariant::SafeableNon:
    case ModelVariant::SafeableVert: return RegionKind::CSafeable;
  }
  return RegionKind::LInf;
}

bool has_vertical_intruder(ModelVariant m) {
  return m == ModelVariant::InfVert || m == ModelVariant::BoundVert ||
         m == ModelVariant::SafeableVert;
}

bool has_horizontal_intruder(ModelVariant m) { return m == ModelVariant::InfHoriz; }

bool is_two_sided(ModelVariant m) {
  return m == ModelVariant::BoundNon || m == ModelVariant::BoundVert || is_safeable(m);
}

bool is_safeable(ModelVariant m) {
  return m == ModelVariant::SafeableNon || m == ModelVariant::SafeableVert;
}

bool is_time_bounded(ModelVariant m) { return is_two_sided(m); }

namespace {

void require(bool ok, const char* name) {
  if (!ok) throw ConstraintViolation(name);
}

bool all_finite(const Params& p) {
  for (double x : {p.r_p, p.h_p, p.r_v, p.a_lo, p.a_up, p.a_max, p.c, p.v_max, p.epsilon, p.g})
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

ValidatedParams validate_params(const Params& p, ModelVariant m) {
  require(all_finite(p), "params finite");
  require(p.r_p >= 0, "r_p >= 0");
  require(p.h_p > 0, "h_p > 0");
  require(p.r_v >= 0, "r_v >= 0");
  require(p.a_lo > 0, "a_lo > 0");
  switch (m) {
    case ModelVariant::InfNon:
      require(p.a_max >= p.a_lo, "a_max >= a_lo");
      break;
    case ModelVariant::InfVert:
      require(p.c > 0, "c > 0");
      require(p.a_max >= p.a_lo + p.c, "a_max >= a_lo + c");
      break;
    case ModelVariant::InfHoriz:
      require(p.v_max > 0, "v_max > 0");
      require(p.a_max >= p.a_lo, "a_max >= a_lo");
      break;
    case ModelVariant::BoundNon:
      require(p.a_up > p.a_lo, "a_up > a_lo");
      break;
    case ModelVariant::BoundVert:
      require(p.a_up > p.a_lo, "a_up > a_lo");
      require(p.c > 0, "c > 0");
      break;
    case ModelVariant::SafeableNon:
      require(p.a_up > p.a_lo + 2 * p.c, "a_up > a_lo + 2c");
      require(p.epsilon >= 0, "epsilon >= 0");
      break;
    case ModelVariant::SafeableVert:
      require(p.c > 0, "c > 0");
      require(p.a_up > p.a_lo + 2 * p.c, "a_up > a_lo + 2c");
      require(p.a_max >= p.a_lo + p.c, "a_max >= a_lo + c");
      require(p.epsilon >= 0, "epsilon >= 0");
      break;
  }
  return ValidatedParams(p, m);
}

bool advisory_well_formed(const Advisory& a) {
  if (a.coc) return true;
  if (a.w != 1 && a.w != -1) return false;
  if (!std::isfinite(a.v_lo)) return false;
  if (a.v_up) {
    if (!std::isfinite(*a.v_up)) return false;
    if (a.w * a.v_lo > a.w * *a.v_up) return false;
  }
  return true;
}

Advisory with_default_v_up(const Advisory& a) {
  Advisory out = a;
  if (!out.coc && !out.v_up) out.v_up = out.w * convert_rate(kDefaultVupFpm);
  return out;
}

const CatalogEntry* AdvisoryCatalog::lookup(std::string_view label) const {
  for (const auto& e : entries)
    if (e.advisory.label == label) return &e;
  return nullptr;
}

AdvisoryCatalog default_catalog() {
  AdvisoryCatalog cat;
  auto add = [&cat](std::string label, int w, double rate_fpm, bool coc = false) {
    Advisory a;
    a.label = std::move(label);
    a.w = w;
    a.v_lo = convert_rate(rate_fpm);
    a.coc = coc;
    cat.entries.push_back(CatalogEntry{a, rate_fpm});
  };
  add("COC", +1, 0, true);
  add("DND", +1, 0);
  add("CL1500", +1, 1500);
  add("SCL2500", +1, 2500);
  add("DNC2000", -1, 2000);
  add("DNC", -1, 0);
  return cat;
}

}  // namespace acaslab
