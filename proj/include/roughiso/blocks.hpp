#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roughiso/point_set.hpp"
#include "roughiso/random.hpp"

namespace roughiso {

struct BlockParams {
  std::int64_t M = 1;  ///< gaps <= M are short
  std::int64_t K = 1;  ///< short-run length that closes a red segment
};

/// One block: blue segment [T_{k-1}, S_k] followed by red segment [S_k, T_k].
/// Indices refer to the decomposed point set; slices keep absolute values.
struct Block {
  std::size_t t_prev_index = 0;
  std::size_t s_index = 0;
  std::size_t t_index = 0;
  Coord s_time = 0;
  Coord t_time = 0;
  PointSet blue;
  PointSet red;
};

struct BlockDecomposition {
  std::vector<Block> blocks;
  PointSet leftover;  ///< points from the last T_k on (absolute values)
};

/// Literal left-to-right scan: S_k is the first point at or after T_{k-1}
/// whose gap is long; T_k is the first point after S_k followed by K short
/// gaps. A block is emitted only once its closing K short gaps are present.
BlockDecomposition decompose(const PointSet& A, const BlockParams& bp);

/// True iff gaps 1..K are all short. Needs at least K gaps.
bool event_E0(const PointSet& A, const BlockParams& bp);

/// L gaps i.i.d. Geom_{<=M}(1/2).
PointSet sample_rooted_blue(std::int64_t L, std::int64_t M, const Seed& seed);

/// Red segment: long first gap, then N ~ Geom((1-2^-M)^K) - 1 subsequences,
/// each Z < K short gaps closed by a long gap.
PointSet sample_rooted_red(std::int64_t M, std::int64_t K, const Seed& seed);

struct BlockViolation {
  std::size_t block = 0;
  std::string kind;
  std::int64_t index = 0;  ///< point index inside the reconstructed sequence
};

/// Shape constraints of every block; nullopt means Ok.
std::optional<BlockViolation> structure_check(const BlockDecomposition& dec, const BlockParams& bp);

/// Number of long gaps in a red segment.
std::int64_t count_long_gaps(const PointSet& segment, std::int64_t M);

/// Demand-driven percolation on N with rooted point 0.
///
/// Gaps are generated run by run: a run is Geom(2^-M) - 1 short gaps
/// (each Geom_{<=M}(1/2)) followed by one long gap (M + Geom(1/2)). Run
/// lengths and long values come from their own streams, and short values
/// are materialized sequentially only when a point is requested, so the
/// length of a blue segment is known without generating its points.
class GapStream {
 public:
  static GapStream percolation(std::int64_t M, const Seed& seed, std::size_t max_gaps);
  /// First run is exactly `initial_short` short gaps.
  static GapStream with_initial_short_gaps(std::int64_t initial_short, std::int64_t M,
                                           const Seed& seed, std::size_t max_gaps);
  /// Finite stream over given points; queries past the data throw StreamExhausted.
  static GapStream from_points(const PointSet& points, std::int64_t M);

  [[nodiscard]] std::int64_t M() const { return M_; }
  [[nodiscard]] std::size_t max_gaps() const { return max_gaps_; }
  [[nodiscard]] std::size_t materialized_gaps() const { return points_.size() - 1; }

  /// Point with the given index (0 is the root).
  Coord point(std::size_t index);
  /// Gap i >= 1, between points i-1 and i.
  Coord gap(std::size_t i);
  bool is_long(std::size_t i);
  /// Number of consecutive short gaps starting with gap index+1.
  std::int64_t shorts_after(std::size_t index);
  /// Points [first, last] translated to start at 0.
  PointSet window(std::size_t first, std::size_t last);
  /// Points [0, last] as stored.
  PointSet prefix_points(std::size_t last);

 private:
  struct Run {
    std::size_t first_gap;  // index of the first short gap (== long index if none)
    std::int64_t shorts;
    Coord long_value;
    [[nodiscard]] std::size_t long_index() const { return first_gap + static_cast<std::size_t>(shorts); }
  };

  GapStream() = default;
  void check_limit(std::size_t gap_index) const;
  const Run& run_for(std::size_t gap_index);
  void materialize(std::size_t gap_index);

  std::int64_t M_ = 1;
  std::size_t max_gaps_ = 0;
  bool finite_ = false;
  std::vector<Run> runs_;
  std::vector<Coord> points_{0};
  std::optional<Rng> run_rng_, short_rng_, long_rng_;
  std::vector<Coord> finite_gaps_;  // finite streams: index 0 unused
};

}  // namespace roughiso
