#pragma once

#include <cstdint>
#include <utility>

#include "roughiso/point_set.hpp"
#include "roughiso/random.hpp"
#include "roughiso/rational.hpp"
#include "roughiso/verify.hpp"

namespace roughiso {

/// Rooted percolation with `count_points` points and i.i.d. Geometric(p) gaps.
PointSet sample_bernoulli_rooted(std::size_t count_points, const Rational& p, const Seed& seed);

std::int64_t sample_geom_truncated(std::int64_t M, const Seed& seed);
std::int64_t sample_geom_shifted(std::int64_t M, const Seed& seed);

/// x ~ Geom_{<=M}(1/2), y ~ Geom(1/2) with x <= y: y = Z_1, x = first Z_i <= M.
std::pair<std::int64_t, std::int64_t> couple_dominance(std::int64_t M, const Seed& seed);

/// Rooted set whose first L gaps are short, gap L+1 long, and the rest
/// an unconditioned percolation generated run by run.
PointSet sample_with_initial_short_gaps(std::int64_t L, std::int64_t M, std::size_t horizon_points,
                                        const Seed& seed);

struct PoissonCoupling {
  RealPointSet poisson;
  PointSet percolation;
  RealMapping mapping;  ///< percolation (lifted to ticks) -> poisson
  RiConstants constants;
  Rational c;  ///< cell width actually used (dyadic)
};

/// Poisson(alpha) on the window [0, N c) and the percolation n in {0..N-1}
/// present iff the Poisson set meets [n c, (n+1) c). c = -log(1-p)/alpha is
/// rounded to the nearest multiple of 2^-32 so cells align with the tick grid.
PoissonCoupling couple_poisson_percolation(const Rational& alpha, const Rational& p,
                                           const Rational& horizon, const Seed& seed);

struct RescaleCoupling {
  RealPointSet image_set;
  RealMapping mapping;
  RiConstants constants;
  bool exact = true;  ///< false when some (alpha/gamma) x fell between grid ticks
};

/// x -> floor((alpha/gamma) x) on the tick grid. Constants are
/// (max(r, 1/r), 0, 0) when every image is exact, otherwise D is one tick.
RescaleCoupling rescale_coupling(const Rational& alpha, const Rational& gamma, const RealPointSet& A);

/// Poisson process of the given rate on [0, horizon) in ticks.
RealPointSet sample_poisson(double rate, Ticks horizon, const Seed& seed);

}  // namespace roughiso
