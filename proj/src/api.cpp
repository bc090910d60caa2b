#include "roughiso/api.hpp"

#include "roughiso/errors.hpp"
#include "roughiso/experiments.hpp"
#include "roughiso/processes.hpp"

namespace roughiso::api {
namespace {

[[noreturn]] void bad_request(const std::string& message) {
  throw Error(ErrorKind::PreconditionViolated, message);
}

const Json& need(const Json& req, const char* key) {
  if (!req.contains(key)) bad_request(std::string("missing field \"") + key + "\"");
  return req.at(key);
}

Rational get_rational(const Json& req, const char* key, const Rational& fallback) {
  return req.contains(key) ? rational_from_json(req.at(key)) : fallback;
}

Seed request_seed(const Json& req) { return trial_seed(req.value("seed", std::uint64_t{0}), 0); }

SearchBudget budget_from(const Json& req) {
  SearchBudget b;
  if (!req.contains("budget")) return b;
  const Json& j = req.at("budget");
  b.max_domain_points = j.value("max_domain_points", b.max_domain_points);
  b.max_codomain_points = j.value("max_codomain_points", b.max_codomain_points);
  b.max_codomain_value = j.value("max_codomain_value", b.max_codomain_value);
  b.max_nodes = j.value("max_nodes", b.max_nodes);
  b.max_results = j.value("max_results", b.max_results);
  return b;
}

bool is_markov_constants(const Json& c) { return c.contains("F") && !c.contains("D"); }

// Resolved constants in both shapes; the missing shape comes from the
// Markov -> increasing or increasing -> Markov conversion.
struct Constants {
  RiConstants ri;
  MarkovConstants markov;
  Json source;
};

Constants resolve_constants(const Json& req, const Json& instance) {
  Json c = req.contains("constants") ? req.at("constants")
           : instance.contains("constants") ? instance.at("constants")
                                            : Json();
  if (c.is_null()) bad_request("no constants in request or instance");
  Constants out;
  out.source = c;
  if (is_markov_constants(c)) {
    out.markov = markov_constants_from_json(c);
    out.ri = markov_to_increasing_constants(out.markov);
  } else {
    out.ri = ri_constants_from_json(c);
    out.markov = increasing_to_markov_constants(out.ri);
  }
  return out;
}

Mapping mapping_from_instance(const Json& inst) {
  if (inst.contains("T")) return mapping_from_json(inst.at("T"));
  const Instance parsed = instance_from_json(inst);
  return Mapping{parsed.A, need(inst, "image").get<std::vector<Coord>>(), parsed.B};
}

Json images_json(const std::vector<Mapping>& maps) {
  Json out = Json::array();
  for (const Mapping& m : maps) out.push_back(m.image);
  return out;
}

Json optional_map_json(const std::optional<Mapping>& m) {
  return m ? Json(m->image) : Json(nullptr);
}

}  // namespace

Outcome sample(const Json& req) {
  const std::string process = need(req, "process").get<std::string>();
  const Seed seed = request_seed(req);
  const bool integer_set = process == "bernoulli" || process == "initial-short" ||
                           process == "red" || process == "blue";
  Json doc{{"schema", integer_set          ? kSchemaPointSet
                      : process == "poisson" ? kSchemaRealPointSet
                                             : kSchemaSample},
           {"process", process}};
  if (process == "bernoulli") {
    const PointSet s = sample_bernoulli_rooted(need(req, "n").get<std::size_t>(),
                                               get_rational(req, "p", Rational(1, 2)), seed);
    doc.update(to_json(s));
  } else if (process == "initial-short") {
    const PointSet s = sample_with_initial_short_gaps(need(req, "L").get<std::int64_t>(),
                                                      need(req, "M").get<std::int64_t>(),
                                                      need(req, "n").get<std::size_t>(), seed);
    doc.update(to_json(s));
  } else if (process == "red") {
    doc.update(to_json(sample_rooted_red(need(req, "M").get<std::int64_t>(),
                                         need(req, "K").get<std::int64_t>(), seed)));
  } else if (process == "blue") {
    doc.update(to_json(sample_rooted_blue(need(req, "L").get<std::int64_t>(),
                                          need(req, "M").get<std::int64_t>(), seed)));
  } else if (process == "poisson") {
    const Rational horizon = rational_from_json(need(req, "horizon"));
    const RealPointSet s =
        sample_poisson(get_rational(req, "rate", Rational(1)).to_double(), to_ticks(horizon), seed);
    doc.update(to_json(s));
  } else if (process == "dominance") {
    const std::int64_t M = need(req, "M").get<std::int64_t>();
    const std::uint64_t count = req.value("count", std::uint64_t{1});
    Json pairs = Json::array();
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto [x, y] = couple_dominance(M, seed.child("draw", i));
      pairs.push_back({x, y});
    }
    doc["pairs"] = pairs;
  } else if (process == "poisson-coupling") {
    const PoissonCoupling pc =
        couple_poisson_percolation(get_rational(req, "alpha", Rational(1)),
                                   get_rational(req, "p", Rational(1, 2)),
                                   rational_from_json(need(req, "horizon")), seed);
    doc["poisson"] = to_json(pc.poisson);
    doc["percolation"] = to_json(pc.percolation);
    doc["mapping"] = to_json(pc.mapping);
    doc["constants"] = to_json(pc.constants);
    doc["c"] = rational_json(pc.c);
    doc["verdict"] = to_json(verify_rough_isometry(pc.mapping, pc.constants));
  } else if (process == "rescale") {
    const Rational alpha = get_rational(req, "alpha", Rational(1));
    const RealPointSet A =
        req.contains("points")
            ? real_point_set_from_json(req.at("points"))
            : sample_poisson(alpha.to_double(), to_ticks(rational_from_json(need(req, "horizon"))),
                             seed);
    const RescaleCoupling rc =
        rescale_coupling(alpha, get_rational(req, "gamma", Rational(1)), A);
    doc["source"] = to_json(A);
    doc["image_set"] = to_json(rc.image_set);
    doc["mapping"] = to_json(rc.mapping);
    doc["constants"] = to_json(rc.constants);
    doc["exact"] = rc.exact;
    doc["verdict"] = to_json(verify_rough_isometry(rc.mapping, rc.constants));
  } else {
    bad_request("unknown process \"" + process + "\"");
  }
  return {doc, true};
}

Outcome decompose(const Json& req) {
  const PointSet A = point_set_from_json(need(req, "points"));
  const BlockParams bp{need(req, "M").get<std::int64_t>(), need(req, "K").get<std::int64_t>()};
  const BlockDecomposition dec = roughiso::decompose(A, bp);
  Json doc = to_json(dec, bp);
  const auto violation = structure_check(dec, bp);
  if (violation) {
    doc["structure_violation"] =
        Json{{"block", violation->block}, {"kind", violation->kind}, {"index", violation->index}};
  }
  return {doc, !violation.has_value()};
}

Outcome construct(const Json& req, bool include_mapping) {
  const std::uint64_t n = need(req, "n").get<std::uint64_t>();
  Params p = default_params(n);
  for (const char* key : {"M", "F", "R", "K"}) {
    if (!req.contains(key)) continue;
    const std::int64_t v = req.at(key).get<std::int64_t>();
    if (v < 1) bad_request(std::string(key) + " must be positive");
    (key[0] == 'M' ? p.M : key[0] == 'F' ? p.F : key[0] == 'R' ? p.R : p.K) = v;
    p.overridden = true;
  }
  BuildOptions options;
  if (req.contains("horizon")) options.horizon = req.at("horizon").get<std::size_t>();
  const BuildResult r = build_ri(p, request_seed(req), options);
  Json doc = to_json(r, p, include_mapping);
  doc["seed"] = req.value("seed", std::uint64_t{0});
  return {doc, r.success};
}

Outcome verify(const Json& req) {
  const std::string kind = need(req, "kind").get<std::string>();
  const Json& inst = need(req, "instance");
  const Mapping T = mapping_from_instance(inst);
  Json doc;
  Verdict v;
  if (kind == "increasing") {
    v = verify_increasing(T);
    doc = to_json(v);
  } else {
    const Constants c = resolve_constants(req, inst);
    if (kind == "markov") {
      v = verify_markov(T, c.markov);
      doc = to_json(v);
      doc["constants"] = to_json(c.markov);
    } else if (kind == "rooted" || kind == "rough") {
      v = kind == "rooted" ? verify_rooted(T, c.ri) : verify_rough_isometry(T, c.ri);
      doc = to_json(v);
      doc["constants"] = to_json(c.ri);
    } else {
      bad_request("unknown kind \"" + kind + "\"");
    }
  }
  doc["kind"] = kind;
  return {doc, v.ok()};
}

Outcome oracle(const Json& req) {
  const std::string op = need(req, "op").get<std::string>();
  const SearchBudget budget = budget_from(req);
  Json doc{{"schema", kSchemaOracle}, {"op", op}};
  if (op == "counterexample") {
    const Counterexample ce = counterexample_family(need(req, "L").get<std::int64_t>(), budget);
    doc["A"] = to_json(ce.A);
    doc["B"] = to_json(ce.B);
    doc["witness"] = ce.witness.image;
    doc["increasing_min_M"] = ce.increasing_min_M ? rational_json(*ce.increasing_min_M) : Json(nullptr);
    return {doc, true};
  }
  const Json& inst = need(req, "instance");
  const Instance in = instance_from_json(inst);
  if (op == "minimal-M") {
    const MapFamily family = map_family_from_string(req.value("family", std::string("increasing")));
    // Second constant is D, or F for the Markov family.
    const Rational second = get_rational(req, family == MapFamily::Markov ? "F" : "D", Rational(0));
    const Rational R = get_rational(req, "R", Rational(0));
    const auto M = minimal_multiplicative_constant(in.A, in.B, family, second, R, budget);
    doc["family"] = std::string(to_string(family));
    doc["M"] = M ? rational_json(*M) : Json(nullptr);
    return {doc, M.has_value()};
  }
  const Constants c = resolve_constants(req, inst);
  if (op == "exists-markov") {
    const auto m = exists_markov_ri(in.A, in.B, c.markov, budget);
    doc["constants"] = to_json(c.markov);
    doc["found"] = m.has_value();
    doc["image"] = optional_map_json(m);
    return {doc, m.has_value()};
  }
  if (op == "enumerate-markov") {
    const auto maps = enumerate_markov_ri(in.A, in.B, c.markov, budget);
    doc["constants"] = to_json(c.markov);
    doc["count"] = maps.size();
    doc["images"] = images_json(maps);
    return {doc, true};
  }
  if (op == "exists-increasing") {
    const auto m = exists_increasing_ri(in.A, in.B, c.ri, budget);
    doc["constants"] = to_json(c.ri);
    doc["found"] = m.has_value();
    doc["image"] = optional_map_json(m);
    return {doc, m.has_value()};
  }
  if (op == "enumerate-increasing") {
    const auto maps = enumerate_increasing_ri(in.A, in.B, c.ri, budget);
    doc["constants"] = to_json(c.ri);
    doc["count"] = maps.size();
    doc["images"] = images_json(maps);
    return {doc, true};
  }
  if (op == "exists-general") {
    GeneralSearchOptions options;
    options.rooted = req.value("rooted", true);
    options.require_non_monotone = req.value("non_monotone", false);
    const auto m = exists_general_ri(in.A, in.B, c.ri, budget, options);
    doc["constants"] = to_json(c.ri);
    doc["rooted"] = options.rooted;
    doc["found"] = m.has_value();
    doc["image"] = optional_map_json(m);
    return {doc, m.has_value()};
  }
  bad_request("unknown oracle op \"" + op + "\"");
}

Outcome lattice(const Json& req) {
  const Json& inst = need(req, "instance");
  const Instance in = instance_from_json(inst);
  const Constants c = resolve_constants(req, inst);
  LatticeOptions options;
  options.max_triples = req.value("max_triples", options.max_triples);
  const auto lat = build_lattice(in.A, in.B, c.ri, budget_from(req), options);
  if (!lat) {
    return {Json{{"schema", kSchemaLattice}, {"empty", true}, {"constants", to_json(c.ri)}}, false};
  }
  Json doc = to_json(*lat);
  doc["empty"] = false;
  bool ok = lat->closed && lat->distributive;
  if (req.value("fkg", false)) {
    Json cov = Json::array();
    bool fkg_ok = true;
    for (std::size_t x = 0; x < in.A.size(); ++x) {
      for (std::size_t y = x + 1; y < in.A.size(); ++y) {
        const Rational v = fkg_check(*lat, x, y);
        fkg_ok = fkg_ok && v >= Rational(0);
        cov.push_back(Json{{"x", x}, {"y", y}, {"cov", rational_json(v)}});
      }
    }
    doc["covariances"] = cov;
    doc["fkg_ok"] = fkg_ok;
    ok = ok && fkg_ok;
  }
  return {doc, ok};
}

Outcome experiment(const Json& spec, bool include_wall_time) {
  const Report rep = run_experiment(spec);
  return {Json{{"ndjson", to_ndjson(rep, include_wall_time)}, {"csv", to_csv(rep, include_wall_time)}, {"pass", rep.pass}},
          rep.pass};
}

}  // namespace roughiso::api
