#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "roughiso/blocks.hpp"
#include "roughiso/errors.hpp"
#include "roughiso/processes.hpp"
#include "roughiso/stats.hpp"

using namespace roughiso;

namespace {

PointSet from_gaps(std::vector<Coord> gaps) { return PointSet::from_gaps(gaps); }

Seed seed_of(std::uint64_t s, const char* label) { return Seed{s, {{label, 0}}}; }

double truncated_pmf(std::int64_t M, std::int64_t k) {
  if (k < 1 || k > M) return 0;
  return std::ldexp(1.0, static_cast<int>(-k)) / (1 - std::ldexp(1.0, static_cast<int>(-M)));
}

ChiSquare fit_truncated(const std::map<std::int64_t, std::uint64_t>& counts, std::int64_t M) {
  return chi_square_discrete(
      counts, 1, [M](std::int64_t k) { return truncated_pmf(M, k); },
      [M](std::int64_t v) {
        double t = 0;
        for (std::int64_t k = v; k <= M; ++k) t += truncated_pmf(M, k);
        return t;
      });
}

// Blue of length L followed by a red segment and K closing short gaps.
PointSet glue(const PointSet& blue, const PointSet& red, std::int64_t K) {
  std::vector<Coord> gaps = blue.gaps();
  for (Coord g : red.gaps()) gaps.push_back(g);
  for (std::int64_t i = 0; i < K; ++i) gaps.push_back(1);
  return PointSet::from_gaps(gaps);
}

}  // namespace

TEST(Decompose, HandTrace) {
  // points 0 1 2 5 6 7: the gap 2 -> 5 is the only long one.
  const BlockDecomposition d = decompose(from_gaps({1, 1, 3, 1, 1}), {2, 2});
  ASSERT_EQ(d.blocks.size(), 1u);
  const Block& b = d.blocks[0];
  EXPECT_EQ(b.s_time, 2);
  EXPECT_EQ(b.t_time, 5);
  EXPECT_EQ(b.blue.points(), (std::vector<Coord>{0, 1, 2}));
  EXPECT_EQ(b.red.points(), (std::vector<Coord>{2, 5}));
  EXPECT_EQ(d.leftover.points(), (std::vector<Coord>{5, 6, 7}));
}

TEST(Decompose, AllShortGivesNoBlock) {
  const BlockDecomposition d = decompose(from_gaps({1, 2, 1, 2, 2, 1}), {2, 2});
  EXPECT_TRUE(d.blocks.empty());
  EXPECT_EQ(d.leftover.size(), 7u);
}

TEST(Decompose, LongFirstGapGivesRootBlue) {
  const BlockDecomposition d = decompose(from_gaps({4, 1, 1, 1}), {2, 2});
  ASSERT_EQ(d.blocks.size(), 1u);
  EXPECT_EQ(d.blocks[0].blue.points(), std::vector<Coord>{0});
  EXPECT_EQ(d.blocks[0].s_time, 0);
}

TEST(Decompose, RedCanHoldSeveralLongGaps) {
  // Long, one short (run < K), long, then K shorts.
  const BlockDecomposition d = decompose(from_gaps({1, 5, 1, 6, 1, 1, 1}), {2, 3});
  ASSERT_EQ(d.blocks.size(), 1u);
  EXPECT_EQ(d.blocks[0].red.points(), (std::vector<Coord>{1, 6, 7, 13}));
  EXPECT_EQ(count_long_gaps(d.blocks[0].red, 2), 2);
}

TEST(Decompose, RejectsUnrooted) {
  EXPECT_THROW(decompose(PointSet::from_points({1, 2}, false), {1, 1}), Error);
}

TEST(Structure, DecomposedSamplesAreOk) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const PointSet A = sample_bernoulli_rooted(3000, Rational(1, 2), seed_of(s, "st"));
    for (BlockParams bp : {BlockParams{2, 2}, BlockParams{3, 4}, BlockParams{5, 3}}) {
      const BlockDecomposition d = decompose(A, bp);
      const auto v = structure_check(d, bp);
      ASSERT_FALSE(v.has_value()) << v->kind << " seed " << s;
      // The leftover never holds a complete red segment.
      const PointSet rest = d.leftover.window(0, d.leftover.size() - 1);
      EXPECT_TRUE(decompose(rest, bp).blocks.size() <= 1u);
      if (!d.blocks.empty()) {
        // The leftover starts at T_k, whose first K gaps are short; a
        // complete block would need its own long gap and K closing shorts.
        const BlockDecomposition again = decompose(rest, bp);
        EXPECT_TRUE(again.blocks.empty()) << "seed " << s;
      }
    }
  }
}

TEST(Structure, CorruptedRedStartIsCaught) {
  BlockDecomposition d = decompose(from_gaps({1, 1, 3, 1, 1}), {2, 2});
  ASSERT_EQ(d.blocks.size(), 1u);
  Block& b = d.blocks[0];
  // Pretend S_1 is the point 1, so the red segment starts with a short gap.
  b.s_index = 1;
  b.s_time = 1;
  b.blue = PointSet::from_points({0, 1}, true);
  b.red = PointSet::from_points({1, 2, 5}, false);
  const auto v = structure_check(d, {2, 2});
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->kind, "RedStartShort");
}

TEST(Structure, BlueTooShortAfterFirstBlock) {
  // Two blocks with K = 2: the second blue run has only one short gap
  // before its long gap, which decompose can never produce.
  BlockDecomposition d = decompose(from_gaps({1, 3, 1, 1, 4, 1, 1}), {2, 2});
  ASSERT_EQ(d.blocks.size(), 2u);
  EXPECT_FALSE(structure_check(d, {2, 2}).has_value());
  d.blocks[1].blue = PointSet::from_points({4}, false);
  EXPECT_TRUE(structure_check(d, {2, 2}).has_value());
}

TEST(EventE0, Examples) {
  EXPECT_TRUE(event_E0(from_gaps({1, 1, 1, 1}), {3, 4}));
  EXPECT_FALSE(event_E0(from_gaps({4, 1, 1, 1}), {3, 4}));
  EXPECT_TRUE(event_E0(from_gaps({3, 3, 3, 3, 9}), {3, 4}));
  EXPECT_THROW(event_E0(from_gaps({1, 1}), {3, 4}), Error);
}

TEST(EventE0, FrequencyAtSixFour) {
  const int N = 200'000;
  int hits = 0;
  for (int i = 0; i < N; ++i) {
    hits += event_E0(sample_bernoulli_rooted(5, Rational(1, 2), seed_of(static_cast<std::uint64_t>(i), "e0")), {6, 4});
  }
  const double exact = std::pow(1 - 1.0 / 64, 4);
  EXPECT_TRUE(clopper_pearson(static_cast<std::uint64_t>(hits), N, kThreeSigma).contains(exact));
}

TEST(Blue, UnitGapsWhenMIsOne) {
  const PointSet b = sample_rooted_blue(7, 1, seed_of(1, "blue"));
  EXPECT_EQ(b.points(), (std::vector<Coord>{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(Blue, GapLaw) {
  std::map<std::int64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < 100'000; ++s) {
    const PointSet b = sample_rooted_blue(6, 4, seed_of(s, "bl"));
    ASSERT_EQ(b.size(), 7u);
    for (Coord g : b.gaps()) {
      ASSERT_GE(g, 1);
      ASSERT_LE(g, 4);
      ++counts[g];
    }
  }
  EXPECT_GT(fit_truncated(counts, 4).p_value, 0.01);
}

// Gaps after a fixed cut T of a blue segment of length L have the law of a
// fresh blue segment of length L - T.
TEST(Blue, StoppingTimeCut) {
  const std::int64_t L = 10, T = 4, M = 3;
  std::map<std::int64_t, std::uint64_t> after_cut, fresh;
  for (std::uint64_t s = 0; s < 50'000; ++s) {
    const auto gaps = sample_rooted_blue(L, M, seed_of(s, "cut")).gaps();
    for (std::size_t i = static_cast<std::size_t>(T); i < gaps.size(); ++i) ++after_cut[gaps[i]];
    for (Coord g : sample_rooted_blue(L - T, M, seed_of(s, "fresh")).gaps()) ++fresh[g];
  }
  EXPECT_GT(fit_truncated(after_cut, M).p_value, 0.01);
  EXPECT_GT(fit_truncated(fresh, M).p_value, 0.01);
}

TEST(Red, ShapeAndSingleLongGapDraws) {
  int single = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const PointSet r = sample_rooted_red(3, 2, seed_of(s, "red"));
    const auto gaps = r.gaps();
    ASSERT_FALSE(gaps.empty());
    ASSERT_GT(gaps.front(), 3);
    ASSERT_GT(gaps.back(), 3);
    std::int64_t run = 0;
    for (Coord g : gaps) {
      run = g <= 3 ? run + 1 : 0;
      ASSERT_LT(run, 2);
    }
    single += gaps.size() == 1;
  }
  EXPECT_GT(single, 0);
}

TEST(Red, LongGapCountIsGeometric) {
  const std::int64_t M = 3, K = 2;
  const double p = std::pow(1 - std::ldexp(1.0, -static_cast<int>(M)), static_cast<double>(K));
  std::map<std::int64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < 100'000; ++s) ++counts[count_long_gaps(sample_rooted_red(M, K, seed_of(s, "X")), M)];
  const ChiSquare fit = chi_square_discrete(
      counts, 1, [p](std::int64_t k) { return geometric_pmf(p, k); },
      [p](std::int64_t k) { return geometric_tail(p, k); });
  EXPECT_GT(fit.p_value, 0.01);
}

TEST(RoundTrip, BlueRedBoundariesRecovered) {
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const std::int64_t M = 3, K = 3;
    const std::int64_t L = K + static_cast<std::int64_t>(s % 5);
    const PointSet blue = sample_rooted_blue(L, M, seed_of(s, "rb"));
    const PointSet red = sample_rooted_red(M, K, seed_of(s, "rr"));
    const PointSet A = glue(blue, red, K);
    const BlockDecomposition d = decompose(A, {M, K});
    ASSERT_EQ(d.blocks.size(), 1u);
    EXPECT_EQ(d.blocks[0].s_index, static_cast<std::size_t>(L));
    EXPECT_EQ(d.blocks[0].t_index, static_cast<std::size_t>(L) + red.size() - 1);
    EXPECT_EQ(d.blocks[0].red.window(0, d.blocks[0].red.size() - 1), red);
  }
}

TEST(GapStream, FiniteStreamMatchesPoints) {
  const PointSet A = sample_bernoulli_rooted(500, Rational(1, 2), seed_of(3, "gs"));
  GapStream g = GapStream::from_points(A, 3);
  for (std::size_t i = 0; i < A.size(); ++i) ASSERT_EQ(g.point(i), A[i]);
  for (std::size_t i = 1; i < A.size(); ++i) ASSERT_EQ(g.is_long(i), A.gap(i) > 3);
  EXPECT_THROW(g.point(A.size()), Error);
}

TEST(GapStream, DemandDrivenIsDeterministic) {
  GapStream a = GapStream::percolation(4, seed_of(5, "pd"), 100'000);
  GapStream b = GapStream::percolation(4, seed_of(5, "pd"), 100'000);
  // Reading b out of order must not change its values.
  const Coord far = b.point(5000);
  EXPECT_EQ(b.shorts_after(0), a.shorts_after(0));
  for (std::size_t i = 0; i <= 5000; ++i) ASSERT_EQ(a.point(i), b.point(i));
  EXPECT_EQ(a.point(5000), far);
}

TEST(GapStream, InitialShortRunHasExactLength) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    GapStream g = GapStream::with_initial_short_gaps(7, 3, seed_of(s, "init"), 10'000);
    EXPECT_EQ(g.shorts_after(0), 7);
    EXPECT_TRUE(g.is_long(8));
  }
}

TEST(GapStream, StreamLimitIsEnforced) {
  GapStream g = GapStream::percolation(2, seed_of(1, "lim"), 50);
  g.point(50);
  try {
    g.point(51);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StreamExhausted);
  }
}
