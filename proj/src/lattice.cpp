#include "roughiso/lattice.hpp"

#include <algorithm>
#include <map>

#include "roughiso/errors.hpp"

namespace roughiso {
namespace {

void require_same_shape(const Mapping& T1, const Mapping& T2) {
  if (T1.domain != T2.domain || T1.codomain != T2.codomain || T1.image.size() != T2.image.size()) {
    throw Error(ErrorKind::DomainMismatch, "mappings have different domains or codomains");
  }
}

template <typename Op>
Mapping pointwise(const Mapping& T1, const Mapping& T2, Op op) {
  require_same_shape(T1, T2);
  Mapping out{T1.domain, T1.image, T1.codomain};
  for (std::size_t i = 0; i < out.image.size(); ++i) out.image[i] = op(T1.image[i], T2.image[i]);
  return out;
}

Int128 gcd128(Int128 a, Int128 b) {
  if (a < 0) a = -a;
  while (b != 0) {
    Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Counts pairwise join/meet misses among a set of images.
template <typename Contains>
std::size_t closure_failures(const std::vector<Mapping>& els, Contains contains,
                             std::size_t& pairs) {
  std::size_t failures = 0;
  for (std::size_t i = 0; i < els.size(); ++i) {
    for (std::size_t k = i + 1; k < els.size(); ++k) {
      ++pairs;
      if (!contains(join(els[i], els[k]).image)) ++failures;
      if (!contains(meet(els[i], els[k]).image)) ++failures;
    }
  }
  return failures;
}

}  // namespace

Mapping join(const Mapping& T1, const Mapping& T2) {
  return pointwise(T1, T2, [](Coord a, Coord b) { return std::max(a, b); });
}

Mapping meet(const Mapping& T1, const Mapping& T2) {
  return pointwise(T1, T2, [](Coord a, Coord b) { return std::min(a, b); });
}

bool precedes(const Mapping& T1, const Mapping& T2) {
  require_same_shape(T1, T2);
  for (std::size_t i = 0; i < T1.image.size(); ++i) {
    if (T1.image[i] > T2.image[i]) return false;
  }
  return true;
}

std::optional<std::size_t> RiLattice::find(const std::vector<Coord>& image) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), image,
                             [](const Mapping& m, const std::vector<Coord>& v) { return m.image < v; });
  if (it == elements.end() || it->image != image) return std::nullopt;
  return static_cast<std::size_t>(it - elements.begin());
}

std::optional<RiLattice> build_lattice(const PointSet& A, const PointSet& B, const RiConstants& c,
                                       const SearchBudget& budget, const LatticeOptions& options) {
  std::vector<Mapping> els = enumerate_increasing_ri(A, B, c, budget);
  if (els.empty()) return std::nullopt;
  RiLattice lat{A, B, c, std::move(els)};
  std::sort(lat.elements.begin(), lat.elements.end(),
            [](const Mapping& x, const Mapping& y) { return x.image < y.image; });

  std::size_t pairs = 0;
  lat.closed = closure_failures(lat.elements, [&](const auto& img) { return lat.find(img).has_value(); },
                                pairs) == 0;

  // Pointwise min and max exist by closure; locate them directly.
  const std::size_t N = lat.size();
  for (std::size_t i = 0; i < N; ++i) {
    if (precedes(lat.elements[i], lat.elements[lat.min_index])) lat.min_index = i;
    if (precedes(lat.elements[lat.max_index], lat.elements[i])) lat.max_index = i;
  }

  auto check = [&](std::size_t x, std::size_t y, std::size_t z) {
    const Mapping& X = lat.elements[x];
    const Mapping& Y = lat.elements[y];
    const Mapping& Z = lat.elements[z];
    if (meet(X, join(Y, Z)).image != join(meet(X, Y), meet(X, Z)).image) lat.distributive = false;
    ++lat.triples_checked;
  };
  if (N <= 1 || N * N * N <= options.max_triples) {
    for (std::size_t x = 0; x < N; ++x)
      for (std::size_t y = 0; y < N; ++y)
        for (std::size_t z = 0; z < N; ++z) check(x, y, z);
  } else {
    Rng rng(options.seed);
    for (std::size_t t = 0; t < options.max_triples; ++t) {
      check(rng.below(N), rng.below(N), rng.below(N));
    }
  }
  return lat;
}

std::vector<std::pair<std::size_t, std::size_t>> hasse_edges(const RiLattice& lat) {
  const std::size_t N = lat.size();
  std::vector<std::vector<char>> below(N, std::vector<char>(N, 0));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k)
      below[i][k] = i != k && precedes(lat.elements[i], lat.elements[k]);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t k = 0; k < N; ++k) {
      if (!below[i][k]) continue;
      bool covered = true;
      for (std::size_t z = 0; z < N && covered; ++z) {
        if (below[i][z] && below[z][k]) covered = false;
      }
      if (covered) out.emplace_back(i, k);
    }
  }
  return out;
}

Rational fkg_check(const RiLattice& lat, std::size_t x, std::size_t y) {
  if (lat.elements.empty()) throw Error(ErrorKind::PreconditionViolated, "empty lattice");
  if (x >= lat.A.size() || y >= lat.A.size()) {
    throw Error(ErrorKind::PreconditionViolated, "point index outside the domain");
  }
  Int128 sx = 0, sy = 0, sxy = 0;
  for (const Mapping& T : lat.elements) {
    sx = checked_add(sx, T.image[x]);
    sy = checked_add(sy, T.image[y]);
    sxy = checked_add(sxy, checked_mul(T.image[x], T.image[y]));
  }
  const Int128 N = static_cast<Int128>(lat.size());
  // Cov = (N * sxy - sx * sy) / N^2
  Int128 num = checked_add(checked_mul(N, sxy), -checked_mul(sx, sy));
  Int128 den = checked_mul(N, N);
  const Int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational::from_wide(num, den);
}

const Mapping& sample_uniform(const RiLattice& lat, Rng& rng) {
  if (lat.elements.empty()) throw Error(ErrorKind::PreconditionViolated, "empty lattice");
  return lat.elements[rng.below(lat.size())];
}

ClosureReport markov_closure_sweep(const PointSet& A, const PointSet& B,
                                   const MarkovConstants& mc, const SearchBudget& budget) {
  std::vector<Mapping> els = enumerate_markov_ri(A, B, mc, budget);
  std::map<std::vector<Coord>, bool> index;
  for (const Mapping& m : els) index[m.image] = true;
  ClosureReport rep;
  rep.elements = els.size();
  rep.failures = closure_failures(els, [&](const auto& img) { return index.count(img) > 0; },
                                  rep.pairs_checked);
  return rep;
}

}  // namespace roughiso
