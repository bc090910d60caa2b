#include "roughiso/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "roughiso/errors.hpp"

namespace roughiso {

PointSet sample_bernoulli_rooted(std::size_t count_points, const Rational& p, const Seed& seed) {
  if (count_points < 1) throw Error(ErrorKind::PreconditionViolated, "count_points must be >= 1");
  if (!(p > Rational(0) && p < Rational(1))) {
    throw Error(ErrorKind::PreconditionViolated, "p must lie in (0,1)");
  }
  Rng rng(seed.child("bernoulli"));
  const bool half = p == Rational(1, 2);
  const double pd = p.to_double();
  std::vector<Coord> pts;
  pts.reserve(count_points);
  pts.push_back(0);
  while (pts.size() < count_points) pts.push_back(pts.back() + (half ? rng.geom_half() : rng.geom(pd)));
  return PointSet::from_points(std::move(pts), true);
}

std::int64_t sample_geom_truncated(std::int64_t M, const Seed& seed) {
  if (M < 1) throw Error(ErrorKind::PreconditionViolated, "M must be >= 1");
  Rng rng(seed.child("geom_truncated"));
  return rng.geom_le(M);
}

std::int64_t sample_geom_shifted(std::int64_t M, const Seed& seed) {
  if (M < 0) throw Error(ErrorKind::PreconditionViolated, "M must be >= 0");
  Rng rng(seed.child("geom_shifted"));
  return rng.geom_gt(M);
}

std::pair<std::int64_t, std::int64_t> couple_dominance(std::int64_t M, const Seed& seed) {
  if (M < 1) throw Error(ErrorKind::PreconditionViolated, "M must be >= 1");
  Rng rng(seed.child("dominance"));
  std::int64_t y = rng.geom_half();
  std::int64_t z = y;
  while (z > M) z = rng.geom_half();
  return {z, y};
}

PointSet sample_with_initial_short_gaps(std::int64_t L, std::int64_t M, std::size_t horizon_points,
                                        const Seed& seed) {
  if (L < 0 || M < 1) throw Error(ErrorKind::PreconditionViolated, "need L >= 0 and M >= 1");
  if (horizon_points <= static_cast<std::size_t>(L) + 1) {
    throw Error(ErrorKind::PreconditionViolated, "horizon_points must exceed L + 1");
  }
  Rng runs(seed.child("runs"));
  Rng shorts(seed.child("short"));
  Rng longs(seed.child("long"));
  std::vector<Coord> pts{0};
  pts.reserve(horizon_points);
  auto push = [&](Coord g) {
    if (pts.size() < horizon_points) pts.push_back(pts.back() + g);
  };
  std::int64_t run = L;
  while (pts.size() < horizon_points) {
    for (std::int64_t i = 0; i < run && pts.size() < horizon_points; ++i) push(shorts.geom_le(M));
    push(longs.geom_gt(M));
    run = runs.run_length(M);
  }
  return PointSet::from_points(std::move(pts), true);
}

RealPointSet sample_poisson(double rate, Ticks horizon, const Seed& seed) {
  Rng rng(seed.child("poisson"));
  std::vector<Ticks> ticks;
  double pos = 0.0;
  Ticks last = -1;
  for (;;) {
    pos += rng.exponential(rate) * static_cast<double>(kTickScale);
    if (pos >= static_cast<double>(horizon)) break;
    // Rounding onto the grid; two arrivals in the same tick are merged.
    Ticks t = static_cast<Ticks>(std::floor(pos));
    if (t > last) {
      ticks.push_back(t);
      last = t;
    }
  }
  return RealPointSet::from_ticks(std::move(ticks));
}

PoissonCoupling couple_poisson_percolation(const Rational& alpha, const Rational& p,
                                           const Rational& horizon, const Seed& seed) {
  if (!(alpha > Rational(0)) || !(p > Rational(0) && p < Rational(1)) || !(horizon > Rational(0))) {
    throw Error(ErrorKind::PreconditionViolated, "need alpha > 0, p in (0,1), horizon > 0");
  }
  const long double c_real = -std::log1p(-p.to_long_double()) / alpha.to_long_double();
  const Ticks c_ticks = std::max<Ticks>(1, std::llround(c_real * static_cast<long double>(kTickScale)));
  const Rational c = from_ticks(c_ticks);
  const Ticks horizon_ticks = static_cast<Ticks>(std::floor(horizon.to_long_double() * kTickScale));
  const std::int64_t cells = horizon_ticks / c_ticks;
  if (cells < 1) throw Error(ErrorKind::EmptyWindow, "horizon shorter than one cell");

  RealPointSet poisson = sample_poisson(alpha.to_double(), cells * c_ticks, seed);
  std::vector<Coord> perc;
  std::vector<Ticks> image;
  for (Ticks t : poisson.ticks()) {
    Coord cell = t / c_ticks;
    if (perc.empty() || perc.back() != cell) {
      perc.push_back(cell);
      image.push_back(t);  // smallest Poisson point of the cell
    }
  }
  if (poisson.empty() || perc.empty()) throw Error(ErrorKind::EmptyWindow, "no Poisson point in window");

  PoissonCoupling out;
  out.c = c;
  out.percolation = PointSet::from_points(perc, false);
  out.mapping = RealMapping{RealPointSet::from_integers(out.percolation), std::move(image), poisson};
  out.poisson = std::move(poisson);
  out.constants = RiConstants{max(c, c.reciprocal()), c, c};
  return out;
}

RescaleCoupling rescale_coupling(const Rational& alpha, const Rational& gamma, const RealPointSet& A) {
  if (A.empty()) throw Error(ErrorKind::PreconditionViolated, "A must be nonempty");
  if (!(alpha > Rational(0) && gamma > Rational(0))) {
    throw Error(ErrorKind::PreconditionViolated, "alpha and gamma must be positive");
  }
  const Rational r = alpha / gamma;
  RescaleCoupling out;
  std::vector<Ticks> image;
  image.reserve(A.size());
  for (Ticks t : A.ticks()) {
    Int128 num = checked_mul(t, r.num());
    Int128 q = num / r.den();
    if (q * r.den() != num) out.exact = false;
    if (q > std::numeric_limits<Ticks>::max()) throw std::overflow_error("rescaled point too large");
    image.push_back(static_cast<Ticks>(q));
  }
  std::vector<Ticks> set = image;
  set.erase(std::unique(set.begin(), set.end()), set.end());
  out.image_set = RealPointSet::from_ticks(set);
  out.mapping = RealMapping{A, std::move(image), out.image_set};
  out.constants = RiConstants{max(r, r.reciprocal()), out.exact ? Rational(0) : from_ticks(1), Rational(0)};
  return out;
}

}  // namespace roughiso
