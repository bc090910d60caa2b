#pragma once

// JSON request/response entry points shared by the command-line tool and the
// Python module. Each call takes a request object and returns the document
// the CLI prints, plus whether the outcome counts as a domain success.

#include "roughiso/io.hpp"

namespace roughiso::api {

struct Outcome {
  Json doc;
  bool ok = true;
};

/// {"process": "bernoulli"|"initial-short"|"red"|"blue"|"poisson"|"dominance"|
///  "poisson-coupling"|"rescale", "seed": u64, ...process parameters}
Outcome sample(const Json& req);

/// {"points": PointSet, "M": int, "K": int}
Outcome decompose(const Json& req);

/// {"n": int, "seed": u64, optional "M","F","R","K","horizon"}.
/// Uses the same per-trial seed as trial 0 of the success-curve experiment.
Outcome construct(const Json& req, bool include_mapping = true);

/// {"kind": "rough"|"rooted"|"increasing"|"markov", "instance": {...},
///  optional "constants": {...}}. The instance is either a construct result
/// (with "T") or {"A", "B", "image"}; constants default to the instance's.
Outcome verify(const Json& req);

/// {"op": "exists-markov"|"enumerate-markov"|"exists-increasing"|
///  "enumerate-increasing"|"exists-general"|"minimal-M"|"counterexample", ...}
Outcome oracle(const Json& req);

/// {"instance": {"A", "B", optional "constants"}, optional "constants",
///  "fkg": bool, "max_triples": int}
Outcome lattice(const Json& req);

/// Experiment spec as accepted by run_experiment; doc holds
/// {"ndjson": ..., "csv": ..., "pass": ...}.
Outcome experiment(const Json& spec, bool include_wall_time = false);

}  // namespace roughiso::api
