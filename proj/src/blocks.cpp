#include "roughiso/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roughiso/errors.hpp"

namespace roughiso {

namespace {

PointSet slice(const PointSet& A, std::size_t first, std::size_t last) {
  std::vector<Coord> pts(A.points().begin() + static_cast<std::ptrdiff_t>(first),
                         A.points().begin() + static_cast<std::ptrdiff_t>(last) + 1);
  return PointSet::from_points(std::move(pts), A.rooted() && first == 0);
}

}  // namespace

BlockDecomposition decompose(const PointSet& A, const BlockParams& bp) {
  if (!A.rooted()) throw Error(ErrorKind::PreconditionViolated, "decompose needs a rooted set");
  const std::size_t n = A.size();
  auto is_short = [&](std::size_t i) { return A[i + 1] - A[i] <= bp.M; };  // forward gap of point i
  BlockDecomposition dec;
  std::size_t t_prev = 0;
  for (;;) {
    std::size_t s = t_prev;
    while (s + 1 < n && is_short(s)) ++s;
    if (s + 1 >= n) break;
    std::optional<std::size_t> t;
    std::size_t run_start = s + 1;
    std::int64_t run = 0;
    for (std::size_t k = s + 1; k + 1 < n; ++k) {
      if (is_short(k)) {
        if (++run == bp.K) {
          t = run_start;
          break;
        }
      } else {
        run_start = k + 1;
        run = 0;
      }
    }
    if (!t) break;
    Block b;
    b.t_prev_index = t_prev;
    b.s_index = s;
    b.t_index = *t;
    b.s_time = A[s];
    b.t_time = A[*t];
    b.blue = slice(A, t_prev, s);
    b.red = slice(A, s, *t);
    dec.blocks.push_back(std::move(b));
    t_prev = *t;
  }
  dec.leftover = slice(A, t_prev, n - 1);
  return dec;
}

bool event_E0(const PointSet& A, const BlockParams& bp) {
  if (A.size() < static_cast<std::size_t>(bp.K) + 1) {
    throw Error(ErrorKind::PreconditionViolated, "E0 needs at least K gaps");
  }
  for (std::int64_t i = 1; i <= bp.K; ++i) {
    if (A.gap(static_cast<std::size_t>(i)) > bp.M) return false;
  }
  return true;
}

PointSet sample_rooted_blue(std::int64_t L, std::int64_t M, const Seed& seed) {
  if (L < 0 || M < 1) throw Error(ErrorKind::PreconditionViolated, "need L >= 0, M >= 1");
  Rng rng(seed.child("blue"));
  std::vector<Coord> gaps(static_cast<std::size_t>(L));
  for (auto& g : gaps) g = rng.geom_le(M);
  return PointSet::from_gaps(gaps);
}

PointSet sample_rooted_red(std::int64_t M, std::int64_t K, const Seed& seed) {
  if (M < 1 || K < 1) throw Error(ErrorKind::PreconditionViolated, "need M, K >= 1");
  Rng rng(seed.child("red"));
  const double close_prob = std::exp(static_cast<double>(K) * std::log1p(-long_gap_probability(M)));
  std::vector<Coord> gaps;
  gaps.push_back(rng.geom_gt(M));
  const std::int64_t N = rng.geom(close_prob) - 1;
  for (std::int64_t s = 0; s < N; ++s) {
    const std::int64_t Z = rng.run_length_below(M, K);
    for (std::int64_t i = 0; i < Z; ++i) gaps.push_back(rng.geom_le(M));
    gaps.push_back(rng.geom_gt(M));
  }
  return PointSet::from_gaps(gaps);
}

std::int64_t count_long_gaps(const PointSet& segment, std::int64_t M) {
  std::int64_t x = 0;
  for (std::size_t i = 1; i < segment.size(); ++i) x += segment.gap(i) > M ? 1 : 0;
  return x;
}

std::optional<BlockViolation> structure_check(const BlockDecomposition& dec, const BlockParams& bp) {
  // Rebuild the underlying sequence; consecutive pieces share endpoints.
  std::vector<Coord> seq;
  auto append = [&](const PointSet& piece) {
    for (std::size_t i = 0; i < piece.size(); ++i) {
      if (i == 0 && !seq.empty()) continue;
      seq.push_back(piece[i]);
    }
  };
  std::vector<std::size_t> s_idx, t_idx, t_prev_idx;
  for (std::size_t k = 0; k < dec.blocks.size(); ++k) {
    const Block& b = dec.blocks[k];
    auto fail = [&](const char* kind, std::int64_t index) {
      return BlockViolation{k, kind, index};
    };
    if (b.blue.empty() || b.red.empty() || b.blue.back() != b.red.front()) {
      return fail("SegmentsNotContiguous", 0);
    }
    if (!seq.empty() && seq.back() != b.blue.front()) return fail("BlocksNotContiguous", 0);
    t_prev_idx.push_back(seq.empty() ? 0 : seq.size() - 1);
    append(b.blue);
    s_idx.push_back(seq.size() - 1);
    append(b.red);
    t_idx.push_back(seq.size() - 1);
    if (b.s_time != b.red.front() || b.t_time != b.red.back()) return fail("TimesMismatch", 0);
  }
  append(dec.leftover);
  auto gap_after = [&](std::size_t i) { return seq[i + 1] - seq[i]; };

  for (std::size_t k = 0; k < dec.blocks.size(); ++k) {
    auto fail = [&](const char* kind, std::size_t index) {
      return BlockViolation{k, kind, static_cast<std::int64_t>(index)};
    };
    for (std::size_t i = t_prev_idx[k]; i < s_idx[k]; ++i) {
      if (gap_after(i) > bp.M) return fail("BlueGapLong", i);
    }
    if (k > 0 && static_cast<std::int64_t>(s_idx[k] - t_prev_idx[k]) < bp.K) {
      return fail("BlueTooShort", t_prev_idx[k]);
    }
    if (s_idx[k] == t_idx[k] || gap_after(s_idx[k]) <= bp.M) return fail("RedStartShort", s_idx[k]);
    if (gap_after(t_idx[k] - 1) <= bp.M) return fail("RedEndShort", t_idx[k] - 1);
    // Maximality: no interior red point is already followed by K short gaps.
    for (std::size_t i = s_idx[k] + 1; i < t_idx[k]; ++i) {
      std::int64_t run = 0;
      for (std::size_t j = i; j + 1 < seq.size() && run < bp.K && gap_after(j) <= bp.M; ++j) ++run;
      if (run >= bp.K) return fail("RedNotMaximal", i);
    }
    for (std::size_t j = 0; j < static_cast<std::size_t>(bp.K) && t_idx[k] + j + 1 < seq.size(); ++j) {
      if (gap_after(t_idx[k] + j) > bp.M) return fail("ShortRunAfterT", t_idx[k] + j);
    }
  }
  // The leftover must not contain a complete block.
  if (!dec.leftover.empty()) {
    BlockDecomposition rest = decompose(dec.leftover.window(0, dec.leftover.size() - 1), bp);
    if (!rest.blocks.empty()) return BlockViolation{dec.blocks.size(), "LeftoverHasBlock", 0};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// GapStream

GapStream GapStream::percolation(std::int64_t M, const Seed& seed, std::size_t max_gaps) {
  if (M < 1) throw Error(ErrorKind::PreconditionViolated, "M must be >= 1");
  GapStream s;
  s.M_ = M;
  s.max_gaps_ = max_gaps;
  s.run_rng_.emplace(seed.child("runs"));
  s.short_rng_.emplace(seed.child("short"));
  s.long_rng_.emplace(seed.child("long"));
  return s;
}

GapStream GapStream::with_initial_short_gaps(std::int64_t initial_short, std::int64_t M,
                                             const Seed& seed, std::size_t max_gaps) {
  if (initial_short < 0) throw Error(ErrorKind::PreconditionViolated, "initial_short must be >= 0");
  GapStream s = percolation(M, seed, max_gaps);
  s.runs_.push_back(Run{1, initial_short, s.long_rng_->geom_gt(M)});
  return s;
}

GapStream GapStream::from_points(const PointSet& points, std::int64_t M) {
  if (!points.rooted()) throw Error(ErrorKind::PreconditionViolated, "stream needs a rooted set");
  GapStream s;
  s.M_ = M;
  s.finite_ = true;
  s.max_gaps_ = points.size() - 1;
  s.points_ = points.points();
  std::size_t first = 1;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points.gap(i) > M) {
      s.runs_.push_back(Run{first, static_cast<std::int64_t>(i - first), points.gap(i)});
      first = i + 1;
    }
  }
  return s;
}

void GapStream::check_limit(std::size_t gap_index) const {
  if (gap_index > max_gaps_) {
    throw Error(ErrorKind::StreamExhausted,
                "gap " + std::to_string(gap_index) + " is past the stream horizon " +
                    std::to_string(max_gaps_));
  }
}

const GapStream::Run& GapStream::run_for(std::size_t gap_index) {
  if (finite_) {
    if (runs_.empty() || runs_.back().long_index() < gap_index) {
      throw Error(ErrorKind::StreamExhausted, "run containing gap " + std::to_string(gap_index) +
                                                  " is not closed within the data");
    }
  } else {
    while (runs_.empty() || runs_.back().long_index() < gap_index) {
      std::size_t first = runs_.empty() ? 1 : runs_.back().long_index() + 1;
      std::int64_t len = run_rng_->run_length(M_);
      // Cap absurd lengths (M in the hundreds) so index arithmetic stays finite.
      len = std::clamp<std::int64_t>(len, 0, std::int64_t{1} << 60);
      runs_.push_back(Run{first, len, long_rng_->geom_gt(M_)});
    }
  }
  auto it = std::upper_bound(runs_.begin(), runs_.end(), gap_index,
                             [](std::size_t g, const Run& r) { return g < r.first_gap; });
  return *(it - 1);
}

bool GapStream::is_long(std::size_t i) {
  if (i == 0) throw std::out_of_range("gap index starts at 1");
  if (finite_) {
    check_limit(i);
    return points_[i] - points_[i - 1] > M_;
  }
  return run_for(i).long_index() == i;
}

std::int64_t GapStream::shorts_after(std::size_t index) {
  const Run& r = run_for(index + 1);
  return static_cast<std::int64_t>(r.long_index() - (index + 1));
}

void GapStream::materialize(std::size_t gap_index) {
  check_limit(gap_index);
  if (finite_) return;
  while (points_.size() <= gap_index) {
    std::size_t i = points_.size();
    const Run& r = run_for(i);
    Coord g = r.long_index() == i ? r.long_value : short_rng_->geom_le(M_);
    points_.push_back(points_.back() + g);
  }
}

Coord GapStream::point(std::size_t index) {
  materialize(index);
  return points_[index];
}

Coord GapStream::gap(std::size_t i) {
  if (i == 0) throw std::out_of_range("gap index starts at 1");
  materialize(i);
  return points_[i] - points_[i - 1];
}

PointSet GapStream::window(std::size_t first, std::size_t last) {
  materialize(last);
  std::vector<Coord> pts;
  pts.reserve(last - first + 1);
  for (std::size_t i = first; i <= last; ++i) pts.push_back(points_[i] - points_[first]);
  return PointSet::from_points(std::move(pts), true);
}

PointSet GapStream::prefix_points(std::size_t last) {
  materialize(last);
  return PointSet::from_points(
      std::vector<Coord>(points_.begin(), points_.begin() + static_cast<std::ptrdiff_t>(last) + 1), true);
}

}  // namespace roughiso
