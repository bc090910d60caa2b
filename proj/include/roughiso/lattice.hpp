#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "roughiso/oracle.hpp"
#include "roughiso/random.hpp"

namespace roughiso {

/// Pointwise maximum; throws DomainMismatch unless domains and codomains agree.
Mapping join(const Mapping& T1, const Mapping& T2);
/// Pointwise minimum.
Mapping meet(const Mapping& T1, const Mapping& T2);
/// T1 <= T2 pointwise.
bool precedes(const Mapping& T1, const Mapping& T2);

/// Rooted increasing rough isometries of a finite instance, ordered pointwise.
struct RiLattice {
  PointSet A;
  PointSet B;
  RiConstants constants;
  std::vector<Mapping> elements;  ///< lexicographic order of images
  std::size_t min_index = 0;
  std::size_t max_index = 0;
  /// Every pairwise join and meet was found among the elements.
  bool closed = true;
  /// x ^ (y v z) == (x ^ y) v (x ^ z) held on every checked triple.
  bool distributive = true;
  std::size_t triples_checked = 0;

  [[nodiscard]] std::size_t size() const { return elements.size(); }
  /// Index of an element with this image, if present.
  [[nodiscard]] std::optional<std::size_t> find(const std::vector<Coord>& image) const;
};

struct LatticeOptions {
  /// All triples are checked when size^3 is at most this, otherwise this
  /// many triples are drawn with `seed`.
  std::size_t max_triples = 200'000;
  Seed seed{0, {{"lattice", 0}}};
};

/// nullopt when the instance has no rooted increasing rough isometry.
std::optional<RiLattice> build_lattice(const PointSet& A, const PointSet& B, const RiConstants& c,
                                       const SearchBudget& budget = {},
                                       const LatticeOptions& options = {});

/// Covering pairs (lower, upper) of the pointwise order, as element indices.
std::vector<std::pair<std::size_t, std::size_t>> hasse_edges(const RiLattice& lat);

/// Exact covariance of (T(x), T(y)) under the uniform measure on the lattice;
/// x and y are domain indices.
Rational fkg_check(const RiLattice& lat, std::size_t x, std::size_t y);

/// Uniformly chosen element.
const Mapping& sample_uniform(const RiLattice& lat, Rng& rng);

struct ClosureReport {
  std::size_t elements = 0;
  std::size_t pairs_checked = 0;
  std::size_t failures = 0;
};

/// Join/meet closure of the rooted Markov maps of an instance.
ClosureReport markov_closure_sweep(const PointSet& A, const PointSet& B,
                                   const MarkovConstants& mc, const SearchBudget& budget = {});

}  // namespace roughiso
