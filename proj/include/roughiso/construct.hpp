#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "roughiso/blocks.hpp"
#include "roughiso/point_set.hpp"
#include "roughiso/random.hpp"
#include "roughiso/verify.hpp"

namespace roughiso {

struct Params {
  long double log2n = 1;  ///< log2 of the target point count
  std::uint64_t n = 2;    ///< target point count (saturated when log2n >= 64)
  std::int64_t q = 1;     ///< integer alpha * sqrt(log2 n)
  long double alpha = 1;  ///< q / sqrt(log2 n)
  std::int64_t M = 10, F = 10, R = 10;
  std::int64_t K = 2;     ///< 2^q, saturated at INT64_MAX for q > 62
  bool small_n = false;   ///< no integer q with q / sqrt(log2 n) in (0.99, 1)
  bool overridden = false;

  [[nodiscard]] MarkovConstants markov() const { return {Rational(M), Rational(F), Rational(R)}; }
  [[nodiscard]] BlockParams blocks() const { return {M, K}; }
};

Params default_params(std::uint64_t n);
Params default_params_log2(long double log2n);

struct Subsegments {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;  ///< inclusive index ranges
  [[nodiscard]] std::int64_t count() const { return static_cast<std::int64_t>(ranges.size()); }
};

/// Greedy division: each range is maximal with diameter <= Z.
Subsegments divide_subsegments(const PointSet& U, std::int64_t Z);

struct CombSpec {
  std::vector<std::int64_t> a;  ///< minimal tooth gap sizes
  std::vector<std::int64_t> d;  ///< inter-tooth distances, size a.size() - 1
};

struct CombResult {
  std::optional<std::int64_t> position;  ///< smallest valid l (1-based)
  std::int64_t stopping_index = 0;       ///< position + m - 1 + sum d
};

/// Smallest valid position l in [1, limit] over gaps G (G[0] is G_1).
/// Throws InsufficientGaps when a needed gap is missing.
CombResult comb_search(const std::vector<std::int64_t>& G, const CombSpec& spec, std::int64_t limit);

enum class StageFailureKind {
  None,
  EventE,                 ///< S would exceed max(K/2, L1 / sqrt(log2 n))
  CombNotFound,           ///< no valid comb position inside U2
  ReverseMapInfeasible,   ///< no Markov map from U2[0..S] onto W exists in the searched family
  ResidualInvariant,      ///< residual lengths fell below K/2 (or max below K)
  E0,                     ///< stage 0: a stream does not start with K short gaps
  StreamExhausted,        ///< horizon too small to materialize the stage
};

std::string to_string(StageFailureKind kind);

struct BlockMapOptions {
  bool need_T1 = true;
  bool need_T2 = true;
  /// Number of gaps of the full blue segment U2 when only a prefix is passed.
  std::optional<std::int64_t> u2_length;
};

struct BlockMapResult {
  bool success = false;
  StageFailureKind failure = StageFailureKind::None;
  std::int64_t S = 0, Y = 0, Z = 0, X = 0;
  std::vector<std::int64_t> Ys;     ///< sub-subsegment counts of V^1..V^{X-1}
  std::vector<std::int64_t> b;      ///< long gap lengths of V
  PointSet W;                       ///< U1 followed by V
  Mapping T1;                       ///< W -> U2[0..S], images are U2 values
  Mapping T2;                       ///< U2[0..S] -> W
  std::vector<std::int64_t> T1_index;  ///< U2 index of each W point
  std::vector<std::int64_t> T2_index;  ///< W index of each U2[0..S] point
};

/// One block of one process against the start of a blue segment of the other.
BlockMapResult block_map(const PointSet& U1, const PointSet& V, const PointSet& U2, const Params& p,
                         const BlockMapOptions& options = {});

struct StageRecord {
  std::int64_t stage = 0;
  std::string case_tag;  ///< "A-into-B", "B-into-A", "E0" or "terminal"
  bool success = false;
  bool terminal = false;
  StageFailureKind failure = StageFailureKind::None;
  std::int64_t S = 0, Y = 0, Z = 0, X = 0;
  std::vector<std::int64_t> Ys;
  std::int64_t PA_index = 0, PB_index = 0;
  Coord PA = 0, PB = 0;
  std::int64_t LA = 0, LB = 0;
};

struct BuildOptions {
  /// Maximum number of gaps either stream may materialize.
  std::size_t horizon = std::size_t{1} << 22;
};

struct BuildResult {
  bool success = false;
  std::int64_t failed_stage = -1;
  StageFailureKind failure = StageFailureKind::None;
  Mapping T;  ///< on success: first n points of A onto an initial segment of B
  Coord PA = 0, PB = 0;
  std::vector<StageRecord> stages;
};

/// Staged construction of a Markov rough isometry between two percolations.
BuildResult build_ri(GapStream& A, GapStream& B, const Params& p, const BuildOptions& options = {});
/// Convenience: fresh percolation streams from one seed ("A" and "B" children).
BuildResult build_ri(const Params& p, const Seed& seed, const BuildOptions& options = {});

struct Baseline {
  Mapping T;
  RiConstants constants;
};

/// i-th point to i-th point on the first n points, with the exact smallest M
/// for which (M, 0, 0) holds.
Baseline trivial_baseline(const PointSet& A, const PointSet& B, std::size_t n);

}  // namespace roughiso
