#include "roughiso/io.hpp"

#include "roughiso/errors.hpp"

namespace roughiso {

Json rational_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw Error(ErrorKind::PreconditionViolated, "expected a rational string or integer, got " + j.dump());
}

Json to_json(const PointSet& s) { return Json{{"rooted", s.rooted()}, {"points", s.points()}}; }

PointSet point_set_from_json(const Json& j) {
  if (j.is_array()) return PointSet::from_points(j.get<std::vector<Coord>>());
  return PointSet::from_points(j.at("points").get<std::vector<Coord>>(), j.value("rooted", true));
}

Json to_json(const RealPointSet& s) { return Json{{"points", s.to_strings()}}; }

RealPointSet real_point_set_from_json(const Json& j) {
  std::vector<Rational> values;
  for (const Json& v : j.at("points")) values.push_back(rational_from_json(v));
  return RealPointSet::from_rationals(values);
}

Json to_json(const Mapping& m) {
  return Json{{"domain", to_json(m.domain)}, {"codomain", to_json(m.codomain)}, {"image", m.image}};
}

Mapping mapping_from_json(const Json& j) {
  return Mapping{point_set_from_json(j.at("domain")), j.at("image").get<std::vector<Coord>>(),
                 point_set_from_json(j.at("codomain"))};
}

Json to_json(const RealMapping& m) {
  Json image = Json::array();
  for (Ticks t : m.image) image.push_back(from_ticks(t).str());
  return Json{{"domain", to_json(m.domain)}, {"codomain", to_json(m.codomain)}, {"image", image}};
}

Json to_json(const RiConstants& c) {
  return Json{{"M", rational_json(c.M)}, {"D", rational_json(c.D)}, {"R", rational_json(c.R)}};
}

RiConstants ri_constants_from_json(const Json& j) {
  RiConstants c;
  if (j.contains("M")) c.M = rational_from_json(j.at("M"));
  if (j.contains("D")) c.D = rational_from_json(j.at("D"));
  if (j.contains("R")) c.R = rational_from_json(j.at("R"));
  return c;
}

Json to_json(const MarkovConstants& c) {
  return Json{{"M", rational_json(c.M)}, {"F", rational_json(c.F)}, {"R", rational_json(c.R)}};
}

MarkovConstants markov_constants_from_json(const Json& j) {
  MarkovConstants c;
  if (j.contains("M")) c.M = rational_from_json(j.at("M"));
  if (j.contains("F")) c.F = rational_from_json(j.at("F"));
  if (j.contains("R")) c.R = rational_from_json(j.at("R"));
  return c;
}

Json to_json(const Verdict& v) {
  Json out{{"schema", kSchemaVerdict}, {"ok", v.ok()}};
  if (v.violation) {
    out["violation"] = Json{{"kind", std::string(to_string(v.violation->kind))},
                            {"witness", v.violation->witness}};
  }
  return out;
}

Json to_json(const Params& p) {
  return Json{{"log2n", static_cast<double>(p.log2n)},
              {"n", p.n},
              {"q", p.q},
              {"alpha", static_cast<double>(p.alpha)},
              {"M", p.M},
              {"F", p.F},
              {"R", p.R},
              {"K", p.K},
              {"small_n", p.small_n},
              {"overridden", p.overridden}};
}

Json to_json(const StageRecord& s) {
  return Json{{"stage", s.stage}, {"case", s.case_tag}, {"success", s.success},
              {"terminal", s.terminal}, {"failure", to_string(s.failure)},
              {"S", s.S}, {"Y", s.Y}, {"Z", s.Z}, {"X", s.X}, {"Ys", s.Ys},
              {"PA_index", s.PA_index}, {"PB_index", s.PB_index}, {"PA", s.PA}, {"PB", s.PB},
              {"LA", s.LA}, {"LB", s.LB}};
}

Json to_json(const BuildResult& r, const Params& p, bool include_mapping) {
  Json stages = Json::array();
  for (const StageRecord& s : r.stages) stages.push_back(to_json(s));
  Json out{{"schema", kSchemaConstruct},
           {"params", to_json(p)},
           {"constants", to_json(p.markov())},
           {"success", r.success},
           {"failed_stage", r.failed_stage},
           {"failure", to_string(r.failure)},
           {"PA", r.PA},
           {"PB", r.PB},
           {"stages", stages}};
  if (r.success && include_mapping) out["T"] = to_json(r.T);
  return out;
}

Json to_json(const BlockDecomposition& d, const BlockParams& bp) {
  Json blocks = Json::array();
  for (const Block& b : d.blocks) {
    blocks.push_back(Json{{"t_prev_index", b.t_prev_index},
                          {"s_index", b.s_index},
                          {"t_index", b.t_index},
                          {"s_time", b.s_time},
                          {"t_time", b.t_time},
                          {"blue", b.blue.points()},
                          {"red", b.red.points()}});
  }
  return Json{{"schema", kSchemaDecomposition},
              {"M", bp.M},
              {"K", bp.K},
              {"blocks", blocks},
              {"leftover", d.leftover.points()}};
}

Json to_json(const RiLattice& lat) {
  Json elements = Json::array();
  for (const Mapping& m : lat.elements) elements.push_back(m.image);
  Json edges = Json::array();
  for (const auto& [lo, hi] : hasse_edges(lat)) edges.push_back({lo, hi});
  return Json{{"schema", kSchemaLattice},
              {"A", to_json(lat.A)},
              {"B", to_json(lat.B)},
              {"constants", to_json(lat.constants)},
              {"size", lat.size()},
              {"elements", elements},
              {"min", lat.min_index},
              {"max", lat.max_index},
              {"hasse", edges},
              {"closed", lat.closed},
              {"distributive", lat.distributive},
              {"triples_checked", lat.triples_checked}};
}

Instance instance_from_json(const Json& j) {
  if (!j.contains("A") || !j.contains("B")) {
    throw Error(ErrorKind::PreconditionViolated, "instance needs \"A\" and \"B\"");
  }
  return Instance{point_set_from_json(j.at("A")), point_set_from_json(j.at("B")), j};
}

}  // namespace roughiso
