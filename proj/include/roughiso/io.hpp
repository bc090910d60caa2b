#pragma once

#include <string>

#include "json.hpp"
#include "roughiso/blocks.hpp"
#include "roughiso/construct.hpp"
#include "roughiso/lattice.hpp"
#include "roughiso/oracle.hpp"
#include "roughiso/verify.hpp"

namespace roughiso {

using Json = nlohmann::json;

/// Schema identifiers written into top-level documents ("schema" key).
inline constexpr const char* kSchemaPointSet = "roughiso/point_set/v1";
inline constexpr const char* kSchemaRealPointSet = "roughiso/real_point_set/v1";
inline constexpr const char* kSchemaSample = "roughiso/sample/v1";
inline constexpr const char* kSchemaInstance = "roughiso/instance/v1";
inline constexpr const char* kSchemaConstruct = "roughiso/construct_result/v1";
inline constexpr const char* kSchemaVerdict = "roughiso/verdict/v1";
inline constexpr const char* kSchemaLattice = "roughiso/lattice/v1";
inline constexpr const char* kSchemaDecomposition = "roughiso/decomposition/v1";
inline constexpr const char* kSchemaOracle = "roughiso/oracle_result/v1";

// Rationals travel as strings ("3/2", "7"); integers are accepted on input.
Json rational_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json to_json(const PointSet& s);
PointSet point_set_from_json(const Json& j);

Json to_json(const RealPointSet& s);
RealPointSet real_point_set_from_json(const Json& j);

Json to_json(const Mapping& m);
Mapping mapping_from_json(const Json& j);

Json to_json(const RealMapping& m);

Json to_json(const RiConstants& c);
RiConstants ri_constants_from_json(const Json& j);

Json to_json(const MarkovConstants& c);
MarkovConstants markov_constants_from_json(const Json& j);

Json to_json(const Verdict& v);
Json to_json(const Params& p);
Json to_json(const StageRecord& s);
/// include_mapping = false drops T (it can have millions of points).
Json to_json(const BuildResult& r, const Params& p, bool include_mapping = true);
Json to_json(const BlockDecomposition& d, const BlockParams& bp);
/// Elements, extremes and Hasse edges.
Json to_json(const RiLattice& lat);

/// Finite instance {"A": PointSet, "B": PointSet, ...}.
struct Instance {
  PointSet A;
  PointSet B;
  Json raw;  ///< the whole document, for optional fields
};
Instance instance_from_json(const Json& j);

}  // namespace roughiso
