#include <gtest/gtest.h>

#include <algorithm>

#include "naive.hpp"
#include "roughiso/construct.hpp"
#include "roughiso/errors.hpp"
#include "roughiso/oracle.hpp"
#include "roughiso/verify.hpp"

using namespace roughiso;

namespace {

PointSet ps(std::vector<Coord> v, bool rooted = true) { return PointSet::from_points(std::move(v), rooted); }

RiConstants ri(Rational M, Rational D, Rational R) { return {M, D, R}; }
MarkovConstants mk(Rational M, Rational F, Rational R) { return {M, F, R}; }

Verdict fail(ViolationKind k, std::vector<std::int64_t> w) { return Verdict::fail(k, std::move(w)); }

std::vector<Coord> random_image(Rng& rng, const PointSet& A, const PointSet& B, bool sorted) {
  std::vector<Coord> t(A.size());
  for (auto& v : t) v = B[rng.below(B.size())];
  if (sorted) std::sort(t.begin(), t.end());
  return t;
}

// Window [first, last] of a monotone map, shifted so both sides start at 0.
Mapping window(const Mapping& T, std::size_t first, std::size_t last) {
  const PointSet A = T.domain.window(first, last);
  const Coord lo = T.image[first], hi = T.image[last];
  std::vector<Coord> b;
  for (Coord v : T.codomain.points()) {
    if (v >= lo && v <= hi) b.push_back(v - lo);
  }
  std::vector<Coord> img;
  for (std::size_t i = first; i <= last; ++i) img.push_back(T.image[i] - lo);
  return Mapping{A, img, PointSet::from_points(b)};
}

}  // namespace

TEST(VerifyRough, Examples) {
  const PointSet A = ps({0, 2, 3, 7});
  EXPECT_TRUE(verify_rough_isometry(A, A, A.points(), ri(1, 0, 0)).ok());
  EXPECT_EQ(verify_rough_isometry(ps({0, 1}), ps({0, 5}), {0, 5}, ri(3, 0, 0)),
            fail(ViolationKind::DistortionHigh, {0, 1}));
  EXPECT_TRUE(verify_rough_isometry(ps({0, 3}), ps({0, 1}), {0, 1}, ri(3, 0, 0)).ok());
}

TEST(VerifyRough, ImageOutsideCodomainThrows) {
  try {
    verify_rough_isometry(ps({0, 1}), ps({0, 2}), {0, 1}, ri(1, 0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ImageNotInCodomain);
  }
}

TEST(VerifyRough, MBelowOneActsAsOne) {
  const PointSet A = ps({0, 1, 2});
  EXPECT_EQ(verify_rough_isometry(A, A, A.points(), ri(Rational(1, 2), 0, 0)),
            verify_rough_isometry(A, A, A.points(), ri(1, 0, 0)));
}

TEST(VerifyRooted, Examples) {
  const PointSet A = ps({0, 4, 5});
  EXPECT_TRUE(verify_rooted(A, A, A.points(), ri(1, 0, 0)).ok());
  const PointSet B = ps({0, 1, 5, 6});
  EXPECT_EQ(verify_rooted(A, B, {1, 5, 6}, ri(10, 10, 10)), fail(ViolationKind::NotRooted, {0}));
}

TEST(VerifyIncreasing, Examples) {
  EXPECT_TRUE(verify_increasing(std::vector<Coord>{3, 3, 3}).ok());
  EXPECT_EQ(verify_increasing(std::vector<Coord>{0, 5, 3}), fail(ViolationKind::NotMonotone, {2}));
  EXPECT_TRUE(verify_increasing(std::vector<Coord>{0, 1, 2, 9}).ok());
}

TEST(VerifyMarkov, Examples) {
  const PointSet A = ps({0, 1, 3});
  EXPECT_TRUE(verify_markov(A, A, A.points(), mk(1, 0, 0)).ok());
  EXPECT_TRUE(verify_markov(ps({0, 1}), ps({0, 5}), {0, 5}, mk(5, 0, 0)).ok());
  EXPECT_EQ(verify_markov(ps({0, 1}), ps({0, 5}), {0, 5}, mk(4, 0, 0)),
            fail(ViolationKind::AdjacencyDistortion, {0, 1}));
}

TEST(VerifyMarkov, FiberWidthAndDensity) {
  const PointSet A = ps({0, 1, 2, 3});
  const PointSet B = ps({0, 1, 4});
  EXPECT_EQ(verify_markov(A, B, {0, 1, 1, 1}, mk(1, 1, 3)), fail(ViolationKind::FiberWidth, {1, 3}));
  EXPECT_TRUE(verify_markov(A, B, {0, 1, 1, 1}, mk(1, 2, 3)).ok());
  EXPECT_EQ(verify_markov(A, B, {0, 1, 1, 1}, mk(1, 2, 2)), fail(ViolationKind::Density, {2}));
}

TEST(Constants, MarkovToIncreasing) {
  EXPECT_EQ(markov_to_increasing_constants(mk(10, 10, 10)), ri(30, Rational(1, 2), 10));
  EXPECT_EQ(markov_to_increasing_constants(mk(1, 0, 0)), ri(1, Rational(1, 2), 0));
  EXPECT_EQ(markov_to_increasing_constants(mk(3, 2, 5)), ri(7, Rational(1, 2), 5));
}

TEST(Constants, IncreasingToMarkov) {
  EXPECT_EQ(increasing_to_markov_constants(ri(2, 1, 3)), mk(5, 2, 3));
  EXPECT_EQ(increasing_to_markov_constants(ri(7, 0, 4)), mk(7, 0, 4));
  EXPECT_EQ(increasing_to_markov_constants(ri(1, 1, 0)), mk(3, 1, 0));
}

TEST(CutPoint, Examples) {
  const PointSet A = ps({0, 1, 2});
  EXPECT_EQ(find_cut_point(A, {0, 1, 2}), 0u);
  EXPECT_EQ(find_cut_point(A, {0, 5, 3}), 0u);
  // x = 0 already qualifies: every later image (0 and 3) is <= 5.
  EXPECT_EQ(find_cut_point(A, {5, 0, 3}), 0u);
  EXPECT_EQ(find_cut_point(ps({0, 1, 2, 3}), {2, 0, 4, 1}), 1u);
  EXPECT_EQ(find_cut_point(ps({0, 1, 2, 3}), {2, 0, 4, 3}), 1u);
  EXPECT_EQ(find_cut_point(ps({0, 1, 2, 3}), {2, 1, 3, 0}), 2u);
}

TEST(CutPoint, MatchesDefinitionalScan) {
  Rng rng(Seed{11, {{"cut", 0}}});
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const PointSet A = naive::random_set(rng, n, 3);
    std::vector<Coord> T(n);
    for (auto& v : T) v = static_cast<Coord>(rng.below(6));
    std::optional<std::size_t> expect;
    for (std::size_t x = 0; x < n && !expect; ++x) {
      bool above = true, below = true;
      for (std::size_t z = x + 1; z < n; ++z) {
        above = above && T[z] >= T[x];
        below = below && T[z] <= T[x];
      }
      if (above || below) expect = x;
    }
    ASSERT_EQ(find_cut_point(A, T), expect);
    if (naive::monotone(T)) ASSERT_EQ(find_cut_point(A, T), 0u);
  }
}

// The monotone fast path and the general scan must agree with the
// definition, witness included.
TEST(VerifyRough, NaiveEquivalence) {
  Rng rng(Seed{12, {{"equiv", 0}}});
  for (int trial = 0; trial < 4000; ++trial) {
    const std::size_t na = 1 + rng.below(trial % 10 == 0 ? 200 : 12);
    const std::size_t nb = 1 + rng.below(trial % 10 == 0 ? 200 : 12);
    const PointSet A = naive::random_set(rng, na, 4, trial % 3 != 0);
    const PointSet B = naive::random_set(rng, nb, 4, trial % 3 != 0);
    const auto T = random_image(rng, A, B, trial % 2 == 0);
    const RiConstants c{Rational(1) + naive::random_rational(rng, 3), naive::random_rational(rng, 3),
                        naive::random_rational(rng, 4)};
    ASSERT_EQ(verify_rough_isometry(A, B, T, c), naive::rough(A, B, T, c)) << "trial " << trial;
    ASSERT_EQ(verify_rooted(A, B, T, c).ok(), naive::rooted_ok(A, B, T, c));
    const MarkovConstants mc{Rational(1) + naive::random_rational(rng, 3), naive::random_rational(rng, 3),
                             naive::random_rational(rng, 4)};
    ASSERT_EQ(verify_markov(A, B, T, mc).ok(), naive::markov_ok(A, B, T, mc)) << "trial " << trial;
  }
}

TEST(VerifyRough, WitnessReproducesFailure) {
  Rng rng(Seed{13, {{"witness", 0}}});
  for (int trial = 0; trial < 1000; ++trial) {
    const PointSet A = naive::random_set(rng, 2 + rng.below(10), 4);
    const PointSet B = naive::random_set(rng, 2 + rng.below(10), 4);
    const auto T = random_image(rng, A, B, trial % 2 == 0);
    const RiConstants c{Rational(2), Rational(1), Rational(1)};
    const Verdict v = verify_rough_isometry(A, B, T, c);
    if (v.ok() || v.violation->kind == ViolationKind::Density) continue;
    const auto i = static_cast<std::size_t>(v.violation->witness[0]);
    const auto j = static_cast<std::size_t>(v.violation->witness[1]);
    const PointSet A2 = PointSet::from_points({A[i], A[j]}, false);
    EXPECT_FALSE(verify_rough_isometry(A2, B, {T[i], T[j]}, RiConstants{c.M, c.D, Rational(1000)}).ok());
  }
}

TEST(VerifyRooted, StrengthensRough) {
  Rng rng(Seed{14, {{"rooted", 0}}});
  for (int trial = 0; trial < 2000; ++trial) {
    const PointSet A = naive::random_set(rng, 1 + rng.below(8), 3);
    const PointSet B = naive::random_set(rng, 1 + rng.below(8), 3);
    const auto T = random_image(rng, A, B, true);
    const RiConstants c{Rational(3), Rational(1), Rational(2)};
    if (verify_rooted(A, B, T, c).ok()) ASSERT_TRUE(verify_rough_isometry(A, B, T, c).ok());
  }
}

// Markov maps taken from the construction and from exhaustive enumeration.
TEST(LemmaNine, RoundTrip) {
  std::vector<std::pair<Mapping, MarkovConstants>> markov_maps;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Params p = default_params(512);
    const BuildResult r = build_ri(p, Seed{s, {}});
    if (r.success) markov_maps.emplace_back(r.T, p.markov());
  }
  Rng rng(Seed{15, {{"lemma9", 0}}});
  std::vector<std::pair<Mapping, RiConstants>> increasing_maps;
  while (markov_maps.size() < 300 || increasing_maps.size() < 300) {
    const PointSet A = naive::random_set(rng, 2 + rng.below(5), 3);
    const PointSet B = naive::random_set(rng, 2 + rng.below(5), 3);
    const MarkovConstants mc{Rational(2) + naive::random_rational(rng, 2), naive::random_rational(rng, 3),
                             naive::random_rational(rng, 3)};
    for (const Mapping& m : enumerate_markov_ri(A, B, mc)) markov_maps.emplace_back(m, mc);
    const RiConstants c{Rational(1) + naive::random_rational(rng, 2), naive::random_rational(rng, 2),
                        naive::random_rational(rng, 3)};
    for (const Mapping& m : enumerate_increasing_ri(A, B, c)) increasing_maps.emplace_back(m, c);
  }
  for (const auto& [T, mc] : markov_maps) {
    ASSERT_TRUE(verify_markov(T, mc).ok());
    ASSERT_TRUE(verify_rooted(T, markov_to_increasing_constants(mc)).ok());
    ASSERT_TRUE(verify_increasing(T).ok());
  }
  for (const auto& [T, c] : increasing_maps) {
    ASSERT_TRUE(verify_rooted(T, c).ok());
    ASSERT_TRUE(verify_markov(T, increasing_to_markov_constants(c)).ok());
  }
}

TEST(Restrict, MonotoneRestrictionKeepsConstants) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Params p = default_params(512);
    const BuildResult r = build_ri(p, Seed{s, {}});
    ASSERT_TRUE(r.success);
    const RiConstants c = markov_to_increasing_constants(p.markov());
    for (std::size_t n : {1u, 2u, 17u, 100u, 511u, 512u}) {
      const Restriction res = restrict(r.T.domain, r.T.codomain, r.T.image, n, c.R + Rational(1), c);
      ASSERT_EQ(res.A.size(), n);
      ASSERT_EQ(res.B.back(), *std::max_element(res.T.image.begin(), res.T.image.end()));
      ASSERT_TRUE(verify_rooted(res.T, c).ok()) << "n=" << n;
      EXPECT_EQ(res.constants, (RiConstants{c.M, c.D, c.R + Rational(1)}));
    }
  }
}

TEST(Restrict, FullLengthIsIdentity) {
  const PointSet A = ps({0, 1, 3}), B = ps({0, 2, 3, 5});
  const Restriction res = restrict(A, B, {0, 3, 5}, 3, Rational(1), ri(2, 0, 0));
  EXPECT_EQ(res.A, A);
  EXPECT_EQ(res.B, B);
  EXPECT_EQ(res.T.image, (std::vector<Coord>{0, 3, 5}));
}

// A non-monotone map whose restriction loses the cover of b = 1.
TEST(Restrict, NonMonotoneCutCanBreakDensity) {
  const PointSet A = ps({0, 1, 2}), B = ps({0, 1, 2});
  ASSERT_TRUE(verify_rooted(A, B, {0, 2, 1}, ri(3, 1, 0)).ok());
  const Restriction res = restrict(A, B, {0, 2, 1}, 2, Rational(1, 2), ri(3, 1, 0));
  const Verdict v = verify_rooted(res.T, res.constants);
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.violation->kind, ViolationKind::Density);
  EXPECT_LE(res.B[static_cast<std::size_t>(v.violation->witness[0])], res.B.back());
}

TEST(Window, MarkovClosedUnderWindows) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Params p = default_params(512);
    const BuildResult r = build_ri(p, Seed{s, {}});
    ASSERT_TRUE(r.success);
    Rng rng(Seed{s, {{"window", 0}}});
    for (int k = 0; k < 100; ++k) {
      std::size_t a = rng.below(r.T.domain.size()), b = rng.below(r.T.domain.size());
      if (a > b) std::swap(a, b);
      ASSERT_TRUE(verify_markov(window(r.T, a, b), p.markov()).ok()) << a << ".." << b;
    }
  }
}

TEST(EventEw, Examples) {
  std::vector<Coord> unit(101);
  for (Coord i = 0; i <= 100; ++i) unit[static_cast<std::size_t>(i)] = i;
  EXPECT_FALSE(event_Ew(ps(unit), 0, Rational(40), Rational(2), 50));
  EXPECT_TRUE(event_Ew(ps({0, 1, 40, 41, 42}), 0, Rational(40), Rational(2), 1));
  EXPECT_THROW(event_Ew(ps({0, 1, 2}), 0, Rational(4), Rational(2), 2), Error);
  EXPECT_THROW(event_Ew(ps({0, 1, 2}), 1, Rational(4), Rational(2), 0), Error);
}

TEST(EventEw, MatchesDefinition) {
  Rng rng(Seed{16, {{"ew", 0}}});
  for (int trial = 0; trial < 2000; ++trial) {
    const PointSet A = naive::random_set(rng, 2 + rng.below(30), 12);
    const Coord w = static_cast<Coord>(rng.below(static_cast<std::uint64_t>(A.back())));
    const Coord horizon = w + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(A.back() - w)));
    const Rational L = Rational(1) + naive::random_rational(rng, 30);
    const Rational M = Rational(1) + naive::random_rational(rng, 2);
    bool expect = false;
    for (std::size_t i = 0; i + 1 < A.size(); ++i) {
      if (A[i] <= w || A[i] > horizon) continue;
      const Rational g(A[i + 1] - A[i]);
      if (g >= L / (Rational(4) * M * M * M) && g >= Rational(A[i] - w) / (Rational(2) * M * M)) expect = true;
    }
    ASSERT_EQ(event_Ew(A, w, L, M, horizon), expect);
  }
}

TEST(BigGap, LMinFormula) {
  EXPECT_EQ(L_min(Rational(2), Rational(1, 2)), Rational(16));
  EXPECT_EQ(L_min(Rational(1, 2), Rational(1)), Rational(2));
  EXPECT_EQ(L_min(Rational(5), Rational(0)), Rational(0));
}

TEST(BigGap, MonotoneMapsNeverMeetPrecondition) {
  const PointSet A = ps({0, 1, 2, 5});
  EXPECT_THROW(big_gap_conclusion(A, {0, 1, 1, 3}, 1, 2, ri(1, 0, 0), Rational(1, 2)), Error);
}

// x = 10 (T = 10), y = 13 (T = 5), L = 5, M = 1. The last point with
// T(z) <= 10 is z = 16; z - x = 6 >= L/2M and Gap(16) = 24 >= 6/2.
TEST(BigGap, HandBuiltInstance) {
  const PointSet A = ps({0, 10, 13, 16, 40});
  const auto z = big_gap_conclusion(A, {0, 10, 5, 8, 30}, 1, 2, ri(1, 0, 0), Rational(5));
  ASSERT_TRUE(z.has_value());
  EXPECT_EQ(z->z, 16);
  EXPECT_EQ(z->gap, 24);
}

TEST(BigGap, ConclusionRechecks) {
  Rng rng(Seed{17, {{"biggap", 0}}});
  int found = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const PointSet A = naive::random_set(rng, 3 + rng.below(8), 10);
    std::vector<Coord> T(A.size());
    for (auto& v : T) v = static_cast<Coord>(rng.below(40));
    const std::size_t x = rng.below(A.size() - 1);
    const std::size_t y = x + 1 + rng.below(A.size() - x - 1);
    const RiConstants c{Rational(1) + naive::random_rational(rng, 1), Rational(0), Rational(0)};
    const Rational L(5);
    if (Rational(T[y]) > Rational(T[x]) - L) continue;
    const auto z = big_gap_conclusion(A, T, x, y, c, L);
    if (!z) continue;
    ++found;
    ASSERT_GE(z->z, A[y]);
    ASSERT_GE(Rational(z->z - A[x]), L / (Rational(2) * c.M));
    if (z->gap) ASSERT_GE(Rational(*z->gap), Rational(z->z - A[x]) / (Rational(2) * c.M * c.M));
  }
  EXPECT_GT(found, 100);
}
