#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "roughiso/point_set.hpp"
#include "roughiso/verify.hpp"

namespace roughiso {

/// Limits for the exact small-instance solvers.
///
/// `max_nodes` bounds the number of search nodes expanded by a single call; it
/// stands in for a wall-clock timeout so that results stay deterministic.
struct SearchBudget {
  std::size_t max_domain_points = 32;
  std::size_t max_codomain_points = 32;
  Coord max_codomain_value = Coord{1} << 40;
  std::uint64_t max_nodes = 200'000'000;
  std::size_t max_results = 1'000'000;
};

/// Lexicographically smallest rooted Markov map A -> B with constants mc.
std::optional<Mapping> exists_markov_ri(const PointSet& A, const PointSet& B,
                                        const MarkovConstants& mc,
                                        const SearchBudget& budget = {});

/// All rooted Markov maps, in lexicographic order of images.
std::vector<Mapping> enumerate_markov_ri(const PointSet& A, const PointSet& B,
                                         const MarkovConstants& mc,
                                         const SearchBudget& budget = {});

/// Lexicographically smallest rooted non-decreasing rough isometry.
std::optional<Mapping> exists_increasing_ri(const PointSet& A, const PointSet& B,
                                            const RiConstants& c, const SearchBudget& budget = {});

/// All rooted non-decreasing rough isometries, in lexicographic order.
std::vector<Mapping> enumerate_increasing_ri(const PointSet& A, const PointSet& B,
                                             const RiConstants& c,
                                             const SearchBudget& budget = {});

struct GeneralSearchOptions {
  bool rooted = true;             ///< require T(0) = 0 (and 0 in both sets)
  bool require_non_monotone = false;
};

/// Lexicographically smallest map (any shape) passing the rough-isometry
/// check, or the rooted check when options.rooted.
std::optional<Mapping> exists_general_ri(const PointSet& A, const PointSet& B,
                                         const RiConstants& c, const SearchBudget& budget = {},
                                         const GeneralSearchOptions& options = {});

enum class MapFamily { Rooted, Increasing, Markov };

std::string_view to_string(MapFamily family);
MapFamily map_family_from_string(std::string_view name);

/// Smallest M on the grid {p/q : q <= 64} accepted by the family's decision
/// oracle with the second and third constants fixed (D and R; F and R for
/// Markov). nullopt stands for +infinity.
std::optional<Rational> minimal_multiplicative_constant(const PointSet& A, const PointSet& B,
                                                        MapFamily family, const Rational& D,
                                                        const Rational& R,
                                                        const SearchBudget& budget = {});

/// Smallest grid value p/q >= x with q <= 64.
Rational round_up_to_grid(const Rational& x, std::int64_t max_den = 64);

struct Counterexample {
  PointSet A;
  PointSet B;
  Mapping witness;           ///< non-monotone, passes (3, 0, 0)
  /// Minimal M of the increasing family with D = R = 0; nullopt is +infinity.
  std::optional<Rational> increasing_min_M;
};

/// First pair of 4-point sets containing 0 (ordered by largest value, then
/// lexicographically) that has a non-monotone (3, 0, 0) rough isometry while
/// every rooted increasing one needs M >= L. Values are bounded by
/// budget.max_codomain_value; throws NotFoundWithinBudget otherwise.
Counterexample counterexample_family(std::int64_t L, const SearchBudget& budget = {});

}  // namespace roughiso
