#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "roughiso/construct.hpp"
#include "roughiso/stats.hpp"

namespace roughiso {

using Json = nlohmann::json;

/// One row of a report. Successes plus all failure counts equal trials.
struct Cell {
  Json params = Json::object();
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimate = 0;
  Interval ci95;
  std::map<std::string, std::uint64_t> failures;
  Json extra = Json::object();
  double wall_ms = 0;

  /// Fills estimate and ci95 from successes / trials.
  void finish();
  [[nodiscard]] std::uint64_t failure_total() const;
};

struct Report {
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<Cell> cells;
  Json summary = Json::object();
  /// Outcome of the experiment's built-in check (trend, bound, fit, ...).
  bool pass = true;
};

/// One JSON object per cell plus a final summary line.
std::string to_ndjson(const Report& report, bool include_wall_time = true);
std::string to_csv(const Report& report, bool include_wall_time = true);

/// Seed of trial `index`: Seed{hash64(master, index)} with no labels.
Seed trial_seed(std::uint64_t master, std::uint64_t index);

struct CommonOptions {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct SuccessCurveOptions : CommonOptions {
  std::vector<std::uint64_t> n_list{512, 4096, 65536, 1048576};
  /// Replaces M = F = R and K of the default parameters when set.
  std::optional<std::int64_t> M;
  std::optional<std::int64_t> K;
  BuildOptions build;
};

/// Fraction of trials whose construction succeeds and verifies, per n.
/// pass: the fraction is non-decreasing in n up to 3-sigma exact intervals.
Report run_success_curve(const SuccessCurveOptions& opts);

struct RedTailOptions : CommonOptions {
  std::int64_t M = 10;
  std::int64_t K = 4;
  double q = 3;  ///< sqrt(log2 n)
};

/// Tails P(X > q/8) and P(sum of long gaps >= 3 q^2) of red segments, with a
/// chi-square fit of X against Geometric((1 - 2^-M)^K).
Report run_red_segment_tails(const RedTailOptions& opts);

struct CombTailOptions : CommonOptions {
  std::int64_t M = 16;
  std::vector<std::int64_t> m_values{1, 2, 3};
  std::vector<std::int64_t> s_values{3, 6, 9, 12};
  std::vector<double> a_values{1, 2, 4, 8};
  std::int64_t d = 1;  ///< every inter-tooth distance
};

/// Teeth for m teeth summing to s, as even as possible (larger first).
std::vector<std::int64_t> split_teeth(std::int64_t s, std::int64_t m);

/// Empirical P(Z > ceil(a 2^s)) against exp(-a / m^2), one cell per (m, s, a).
/// pass: no cell's 3-sigma lower bound exceeds the bound.
Report run_comb_tails(const CombTailOptions& opts);

struct E0Options : CommonOptions {
  std::int64_t M = 6;
  std::int64_t K = 4;
  /// Event E^w_{L,M} settings (w = 0).
  std::int64_t ew_M = 2;
  std::vector<std::int64_t> L_values{16, 64, 128, 256, 512, 1024};
  Coord ew_horizon = 2000;
  std::uint64_t ew_trials = 100000;
};

/// E0 frequency against (1 - 2^-M)^K, plus E^w frequencies over L.
/// pass: exact value inside the 95% interval and E^w non-increasing in L
/// within 3-sigma.
Report run_e0_and_ew(const E0Options& opts);

struct BaselineOptions : CommonOptions {
  std::vector<std::uint64_t> n_list{512, 4096, 65536};
};

/// Measured multiplicative constant of the order-preserving baseline versus
/// the configured M = 10q of the construction.
Report run_baseline_comparison(const BaselineOptions& opts);

struct OptimalityOptions : CommonOptions {
  std::int64_t q = 1;
  /// Conditioned samples certified by the exhaustive oracle.
  std::uint64_t conditioned = 100;
  /// Largest point of the all-ones prefix of A; defaults to ceil(15q) + 1.
  std::optional<std::int64_t> prefix_last;
  std::size_t window_A = 20;
  std::size_t window_B = 4;
};

/// Frequency of the bad event, its exact probability against 2^(-45q-3),
/// and oracle certification of non-existence on conditioned samples.
Report run_optimality_event(const OptimalityOptions& opts);

struct DominanceOptions : CommonOptions {
  std::int64_t M = 3;
};

/// couple_dominance: x <= y on every draw plus chi-square fits of both marginals.
Report run_dominance(const DominanceOptions& opts);

struct BlockLawOptions : CommonOptions {
  std::int64_t M = 10;
  std::int64_t K = 4;
};

/// First block of a Bernoulli(1/2) percolation conditioned on E0: blue
/// length against K - 1 + Geometric(2^-M) and red long-gap count against
/// Geometric((1 - 2^-M)^K).
Report run_block_laws(const BlockLawOptions& opts);

struct CouplingOptions : CommonOptions {
  Rational alpha{1};
  Rational p{1, 2};
  Rational horizon{64};
  Rational gamma{3, 2};
};

/// Verifier pass rate of the Poisson/percolation and rescaling couplings.
Report run_coupling_windows(const CouplingOptions& opts);

/// Runs a named experiment from a JSON spec:
/// {"name": ..., "trials": ..., "seed": ..., "jobs": ..., "grid": {...}}.
Report run_experiment(const Json& spec);

}  // namespace roughiso
