#include "roughiso/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "roughiso/errors.hpp"

namespace roughiso {

// ---------------------------------------------------------------------------
// Parameters

Params default_params_log2(long double log2n) {
  if (!(log2n >= 1)) throw Error(ErrorKind::PreconditionViolated, "n must be >= 2");
  Params p;
  p.log2n = log2n;
  p.n = log2n < 64 ? static_cast<std::uint64_t>(std::llroundl(std::exp2l(log2n)))
                   : std::numeric_limits<std::uint64_t>::max();
  const long double s = std::sqrt(log2n);
  // Largest integer strictly below s, then test q > 0.99 s via squares.
  auto q = static_cast<std::int64_t>(std::floor(s));
  if (static_cast<long double>(q) * q >= log2n) --q;
  const bool inside = q >= 1 && 10000.0L * q * q > 9801.0L * log2n;
  if (!inside) {
    q = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(s)));
    p.small_n = true;
  }
  p.q = q;
  p.alpha = static_cast<long double>(q) / s;
  p.M = p.F = p.R = 10 * q;
  p.K = q <= 62 ? (std::int64_t{1} << q) : std::numeric_limits<std::int64_t>::max();
  return p;
}

Params default_params(std::uint64_t n) {
  if (n < 2) throw Error(ErrorKind::PreconditionViolated, "n must be >= 2");
  // Exact for powers of two; log2l is correctly rounded there.
  Params p = default_params_log2(std::log2l(static_cast<long double>(n)));
  p.n = n;
  return p;
}

std::string to_string(StageFailureKind kind) {
  switch (kind) {
    case StageFailureKind::None: return "None";
    case StageFailureKind::EventE: return "EventE";
    case StageFailureKind::CombNotFound: return "CombNotFound";
    case StageFailureKind::ReverseMapInfeasible: return "ReverseMapInfeasible";
    case StageFailureKind::ResidualInvariant: return "ResidualInvariant";
    case StageFailureKind::E0: return "E0";
    case StageFailureKind::StreamExhausted: return "StreamExhausted";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Subsegments and combs

Subsegments divide_subsegments(const PointSet& U, std::int64_t Z) {
  if (Z < 0) throw Error(ErrorKind::PreconditionViolated, "Z must be >= 0");
  Subsegments out;
  std::size_t start = 0;
  while (start < U.size()) {
    std::size_t last = start;
    while (last + 1 < U.size() && U[last + 1] - U[start] <= Z) ++last;
    out.ranges.emplace_back(start, last);
    start = last + 1;
  }
  return out;
}

CombResult comb_search(const std::vector<std::int64_t>& G, const CombSpec& spec, std::int64_t limit) {
  const std::size_t m = spec.a.size();
  if (m == 0 || spec.d.size() + 1 != m) {
    throw Error(ErrorKind::PreconditionViolated, "comb needs m >= 1 teeth and m-1 distances");
  }
  std::vector<std::int64_t> offset(m, 0);
  for (std::size_t k = 1; k < m; ++k) {
    if (spec.d[k - 1] < 0) throw Error(ErrorKind::PreconditionViolated, "distances must be >= 0");
    offset[k] = offset[k - 1] + spec.d[k - 1] + 1;
  }
  CombResult out;
  for (std::int64_t l = 1; l <= limit; ++l) {
    bool valid = true;
    for (std::size_t k = 0; k < m && valid; ++k) {
      const std::int64_t idx = l + offset[k];
      if (idx > static_cast<std::int64_t>(G.size())) {
        throw Error(ErrorKind::InsufficientGaps,
                    "comb tooth needs gap " + std::to_string(idx) + " of " + std::to_string(G.size()));
      }
      valid = G[static_cast<std::size_t>(idx - 1)] >= spec.a[k];
    }
    if (valid) {
      out.position = l;
      out.stopping_index = l + offset[m - 1];
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Block map

namespace {

/// Largest integer S with 2S <= K or S^2 log2n <= L1^2.
std::int64_t event_cap(std::int64_t K, std::int64_t L1, long double log2n) {
  const std::int64_t half = K / 2;
  auto c = static_cast<std::int64_t>(std::floor(static_cast<long double>(L1) / std::sqrt(log2n)));
  auto fits = [&](std::int64_t s) {
    return static_cast<long double>(s) * s * log2n <= static_cast<long double>(L1) * L1;
  };
  while (c > 0 && !fits(c)) --c;
  while (fits(c + 1)) ++c;
  return std::max(half, c);
}

bool event_holds(std::int64_t S, std::int64_t K, std::int64_t L1, long double log2n) {
  return 2 * S <= K || static_cast<long double>(S) * S * log2n <= static_cast<long double>(L1) * L1;
}

bool all_short(const PointSet& U, std::int64_t M) {
  for (std::size_t i = 1; i < U.size(); ++i) {
    if (U.gap(i) > M) return false;
  }
  return true;
}

/// Injective monotone Markov map from u[0..S] onto w with u[0] -> w[0] and
/// u[S] -> w.back(). A step of U2 with gap g may advance from w[k] to any
/// later w[k2] with w[k2] - w[k] <= M g, provided the skipped W points lie
/// within R of w[k] or w[k2]. Returns W indices, or nullopt if no such map
/// exists.
///
/// Shortening a valid step keeps it valid, and a later start reaches at least
/// as far, so the indices reachable after t steps form the interval
/// [t, f(t)] with f(t) the greedy farthest jump from f(t-1). Existence is
/// then f(S) == w.size()-1, and a path is recovered backwards via
/// k_t = min(f(t), k_{t+1} - 1). Time and memory are linear.
std::optional<std::vector<std::int64_t>> reverse_map(const PointSet& u, const PointSet& w,
                                                     std::int64_t M, std::int64_t R) {
  const std::size_t S = u.size() - 1;
  const std::size_t Wn = w.size();
  if (Wn < S + 1) return std::nullopt;
  std::vector<std::size_t> f(S + 1);
  f[0] = 0;
  std::size_t cover_ptr = 0;
  for (std::size_t t = 0; t < S; ++t) {
    const std::size_t k = f[t];
    const Coord reach = M * (u[t + 1] - u[t]);
    // First index farther than R from w[k].
    cover_ptr = std::max(cover_ptr, k + 1);
    while (cover_ptr < Wn && w[cover_ptr] - w[k] <= R) ++cover_ptr;
    std::size_t k2 = k;
    while (k2 + 1 < Wn && w[k2 + 1] - w[k] <= reach &&
           (cover_ptr >= k2 + 1 || w[k2 + 1] - w[cover_ptr] <= R)) {
      ++k2;
    }
    if (k2 == k) return std::nullopt;  // cannot move at all
    f[t + 1] = std::min(k2, Wn - 1 - (S - (t + 1)));
  }
  if (f[S] != Wn - 1) return std::nullopt;
  std::vector<std::int64_t> out(S + 1);
  std::size_t next = Wn - 1;
  out[S] = static_cast<std::int64_t>(next);
  for (std::size_t t = S; t-- > 0;) {
    next = std::min(f[t], next - 1);
    out[t] = static_cast<std::int64_t>(next);
  }
  return out;
}

}  // namespace

BlockMapResult block_map(const PointSet& U1, const PointSet& V, const PointSet& U2, const Params& p,
                         const BlockMapOptions& options) {
  const std::int64_t M = p.M, F = p.F, K = p.K;
  const std::int64_t L1 = static_cast<std::int64_t>(U1.size()) - 1;
  const std::int64_t L2 = options.u2_length.value_or(static_cast<std::int64_t>(U2.size()) - 1);
  if (!U1.rooted() || !V.rooted() || !U2.rooted()) {
    throw Error(ErrorKind::PreconditionViolated, "block_map needs rooted segments");
  }
  if (2 * L1 < K || L2 < std::max(K, L1)) {
    throw Error(ErrorKind::PreconditionViolated, "need L1 >= K/2 and L2 >= max(K, L1)");
  }
  if (!all_short(U1, M) || !all_short(U2, M)) {
    throw Error(ErrorKind::PreconditionViolated, "blue segments must have only short gaps");
  }
  if (V.size() < 2 || V.gap(1) <= M || V.gap(V.size() - 1) <= M) {
    throw Error(ErrorKind::PreconditionViolated, "red segment must start and end with a long gap");
  }

  BlockMapResult r;
  // (1) subsegments of U1.
  const Subsegments u1_parts = divide_subsegments(U1, F);
  r.Y = u1_parts.count();

  // (3) long gaps of V and the sub-subsegments between them.
  std::vector<std::size_t> z;  // V indices where a long gap starts
  for (std::size_t i = 0; i + 1 < V.size(); ++i) {
    if (V[i + 1] - V[i] > M) {
      z.push_back(i);
      r.b.push_back(V[i + 1] - V[i]);
    }
  }
  r.X = static_cast<std::int64_t>(z.size());
  std::vector<Subsegments> v_parts;
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    v_parts.push_back(divide_subsegments(V.window(z[j] + 1, z[j + 1]), F));
    r.Ys.push_back(v_parts.back().count());
  }
  const std::int64_t RX = std::accumulate(r.Ys.begin(), r.Ys.end(), std::int64_t{0});

  // (4) comb search on the gaps of U2 after the first Y + 1 of them.
  CombSpec spec;
  for (std::int64_t bi : r.b) spec.a.push_back((bi + M - 1) / M);
  for (std::int64_t yi : r.Ys) spec.d.push_back(yi - 1);
  const std::int64_t capS = event_cap(K, L1, p.log2n);
  const std::int64_t limit_event = capS - r.Y - 1 - RX;
  const std::int64_t limit_u2 = L2 - r.Y - 1 - RX;
  const std::int64_t limit = std::min(limit_event, limit_u2);
  const StageFailureKind miss =
      limit_u2 <= limit_event ? StageFailureKind::CombNotFound : StageFailureKind::EventE;
  if (limit < 1) {
    r.failure = miss;
    return r;
  }
  std::vector<std::int64_t> G;
  for (std::size_t i = static_cast<std::size_t>(r.Y) + 2; i < U2.size(); ++i) G.push_back(U2.gap(i));
  const CombResult comb = comb_search(G, spec, limit);
  if (!comb.position) {
    r.failure = miss;
    return r;
  }
  r.Z = *comb.position;
  r.S = r.Y + r.Z + 1 + RX;
  if (!event_holds(r.S, K, L1, p.log2n)) {
    r.failure = StageFailureKind::EventE;
    return r;
  }

  // W = U1 followed by the translated V.
  std::vector<Coord> w = U1.points();
  for (std::size_t i = 1; i < V.size(); ++i) w.push_back(U1.back() + V[i]);
  r.W = PointSet::from_points(std::move(w), true);
  const PointSet u2 = U2.prefix(static_cast<std::size_t>(r.S) + 1);

  if (options.need_T1) {
    std::vector<std::int64_t> idx(r.W.size());
    // Many-to-one on the subsegments of U1, then one-to-one from i0 on.
    std::vector<std::int64_t> part_of(static_cast<std::size_t>(L1) + 1);
    for (std::size_t j = 0; j < u1_parts.ranges.size(); ++j) {
      for (std::size_t i = u1_parts.ranges[j].first; i <= u1_parts.ranges[j].second; ++i) {
        part_of[i] = static_cast<std::int64_t>(j) + 1;
      }
    }
    std::int64_t i0 = -1;
    for (std::int64_t i = 0; i <= L1; ++i) {
      const std::int64_t j = part_of[static_cast<std::size_t>(i)];
      if (i0 < 0 && L1 - i == r.Y + r.Z - (j - 1)) i0 = i;
      idx[static_cast<std::size_t>(i)] =
          i0 < 0 ? j - 1 : part_of[static_cast<std::size_t>(i0)] - 1 + (i - i0);
    }
    // Short runs of V: sub-subsegment k of V^j goes to Y+Z+1+R_j+(k-1).
    std::int64_t Rj = 0;
    for (std::size_t j = 0; j + 1 < z.size(); ++j) {
      const std::size_t base = z[j] + 1;
      for (std::size_t k = 0; k < v_parts[j].ranges.size(); ++k) {
        for (std::size_t v = v_parts[j].ranges[k].first; v <= v_parts[j].ranges[k].second; ++v) {
          idx[static_cast<std::size_t>(L1) + base + v] = r.Y + r.Z + 1 + Rj + static_cast<std::int64_t>(k);
        }
      }
      Rj += r.Ys[j];
    }
    idx.back() = r.S;
    r.T1_index = idx;
    std::vector<Coord> image;
    image.reserve(idx.size());
    for (std::int64_t t : idx) image.push_back(u2[static_cast<std::size_t>(t)]);
    r.T1 = Mapping{r.W, std::move(image), u2};
  }

  if (options.need_T2) {
    auto rev = reverse_map(u2, r.W, M, p.R);
    if (!rev) {
      r.failure = StageFailureKind::ReverseMapInfeasible;
      return r;
    }
    r.T2_index = *rev;
    std::vector<Coord> image;
    image.reserve(rev->size());
    for (std::int64_t k : *rev) image.push_back(r.W[static_cast<std::size_t>(k)]);
    r.T2 = Mapping{u2, std::move(image), r.W};
  }
  r.success = true;
  return r;
}

// ---------------------------------------------------------------------------
// Staged construction

namespace {

struct Side {
  GapStream* stream;
  std::size_t P;   // index of the current junction point
  std::int64_t L;  // short gaps following P that are still unused
};

/// End of the red segment that follows the blue run ending at index Q, and
/// the number of short gaps after it. Uses run lengths only.
std::pair<std::size_t, std::int64_t> end_of_red(GapStream& s, std::size_t Q, std::int64_t K) {
  std::size_t t = Q + 1;
  for (;;) {
    const std::int64_t sa = s.shorts_after(t);
    if (sa >= K) return {t, sa};
    t += static_cast<std::size_t>(sa) + 1;
  }
}

}  // namespace

BuildResult build_ri(GapStream& A, GapStream& B, const Params& p, const BuildOptions& options) {
  BuildResult out;
  const std::int64_t K = p.K;
  const std::size_t n = static_cast<std::size_t>(p.n);
  if (n < 1) throw Error(ErrorKind::PreconditionViolated, "n must be >= 1");

  StageRecord s0;
  s0.case_tag = "E0";
  s0.LA = A.shorts_after(0);
  s0.LB = B.shorts_after(0);
  s0.success = s0.LA >= K && s0.LB >= K;
  if (!s0.success) s0.failure = StageFailureKind::E0;
  out.stages.push_back(s0);
  if (!s0.success) {
    out.failed_stage = 0;
    out.failure = StageFailureKind::E0;
    return out;
  }

  Side a{&A, 0, s0.LA};
  Side b{&B, 0, s0.LB};
  std::vector<std::int64_t> img{0};  // B index of each A index mapped so far
  const std::size_t horizon = std::min({options.horizon, A.max_gaps(), B.max_gaps()});

  for (std::int64_t j = 1; a.P + 1 < n; ++j) {
    StageRecord rec;
    rec.stage = j;
    const bool a_into_b = b.L >= a.L;
    Side& ws = a_into_b ? a : b;  // side whose block is mapped
    Side& us = a_into_b ? b : a;  // side whose blue segment absorbs it
    rec.case_tag = a_into_b ? "A-into-B" : "B-into-A";

    const std::size_t Q = ws.P + static_cast<std::size_t>(ws.L);
    const std::int64_t capS = event_cap(K, ws.L, p.log2n);
    const std::size_t u_end = us.P + static_cast<std::size_t>(std::min(us.L, capS));
    std::optional<std::pair<std::size_t, std::int64_t>> red_end;
    bool full_fits = Q <= horizon && u_end <= horizon;
    if (full_fits) {
      try {
        red_end = end_of_red(*ws.stream, Q, K);
        full_fits = red_end->first <= horizon;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::StreamExhausted) throw;
        full_fits = false;
      }
    }

    if (!full_fits) {
      // Remaining points of A(n) sit inside A's current blue run: map them
      // many-to-one by subsegments onto consecutive points of B's blue run.
      const std::size_t last = n - 1;
      const bool inside = last <= a.P + static_cast<std::size_t>(a.L) && last <= horizon;
      Subsegments parts;
      if (inside) parts = divide_subsegments(A.window(a.P, last), p.F);
      if (!inside || parts.count() - 1 > b.L || b.P + static_cast<std::size_t>(parts.count()) - 1 > horizon) {
        throw Error(ErrorKind::StreamExhausted,
                    "stage " + std::to_string(j) + " needs points beyond the horizon " +
                        std::to_string(horizon));
      }
      for (std::size_t k = 0; k < parts.ranges.size(); ++k) {
        for (std::size_t i = parts.ranges[k].first; i <= parts.ranges[k].second; ++i) {
          if (i == 0) continue;
          img.push_back(static_cast<std::int64_t>(b.P + k));
        }
      }
      rec.case_tag = "terminal";
      rec.terminal = true;
      rec.success = true;
      rec.Y = parts.count();
      rec.S = parts.count() - 1;
      a.L -= static_cast<std::int64_t>(last - a.P);
      a.P = last;
      b.L -= rec.S;
      b.P += static_cast<std::size_t>(rec.S);
      rec.PA_index = static_cast<std::int64_t>(a.P);
      rec.PB_index = static_cast<std::int64_t>(b.P);
      rec.PA = A.point(a.P);
      rec.PB = B.point(b.P);
      rec.LA = a.L;
      rec.LB = b.L;
      out.stages.push_back(rec);
      break;
    }

    const PointSet U1 = ws.stream->window(ws.P, Q);
    const PointSet V = ws.stream->window(Q, red_end->first);
    const PointSet U2 = us.stream->window(us.P, u_end);
    BlockMapOptions bmo;
    bmo.need_T1 = a_into_b;
    bmo.need_T2 = !a_into_b;
    bmo.u2_length = us.L;
    const BlockMapResult bm = block_map(U1, V, U2, p, bmo);
    rec.S = bm.S;
    rec.Y = bm.Y;
    rec.Z = bm.Z;
    rec.X = bm.X;
    rec.Ys = bm.Ys;
    if (!bm.success) {
      rec.failure = bm.failure;
      rec.PA_index = static_cast<std::int64_t>(a.P);
      rec.PB_index = static_cast<std::int64_t>(b.P);
      rec.LA = a.L;
      rec.LB = b.L;
      out.stages.push_back(rec);
      out.failed_stage = j;
      out.failure = bm.failure;
      return out;
    }

    if (a_into_b) {
      // W lives in A, U2 in B.
      for (std::size_t i = 1; i < bm.T1_index.size(); ++i) {
        img.push_back(static_cast<std::int64_t>(b.P) + bm.T1_index[i]);
      }
      a.P = red_end->first;
      a.L = red_end->second;
      b.P += static_cast<std::size_t>(bm.S);
      b.L -= bm.S;
    } else {
      // U2 lives in A, W in B.
      for (std::size_t i = 1; i < bm.T2_index.size(); ++i) {
        img.push_back(static_cast<std::int64_t>(b.P) + bm.T2_index[i]);
      }
      a.P += static_cast<std::size_t>(bm.S);
      a.L -= bm.S;
      b.P = red_end->first;
      b.L = red_end->second;
    }
    rec.PA_index = static_cast<std::int64_t>(a.P);
    rec.PB_index = static_cast<std::int64_t>(b.P);
    rec.PA = A.point(a.P);
    rec.PB = B.point(b.P);
    rec.LA = a.L;
    rec.LB = b.L;
    if (2 * std::min(a.L, b.L) < K || std::max(a.L, b.L) < K) {
      rec.failure = StageFailureKind::ResidualInvariant;
      out.stages.push_back(rec);
      out.failed_stage = j;
      out.failure = rec.failure;
      return out;
    }
    rec.success = true;
    out.stages.push_back(rec);
  }

  // Restrict to the first n points of A and the initial segment of B they reach.
  std::vector<Coord> image(n);
  std::int64_t top = 0;
  for (std::size_t i = 0; i < n; ++i) {
    image[i] = B.point(static_cast<std::size_t>(img[i]));
    top = std::max(top, img[i]);
  }
  out.T = Mapping{A.prefix_points(n - 1), std::move(image), B.prefix_points(static_cast<std::size_t>(top))};
  out.PA = A.point(a.P);
  out.PB = B.point(b.P);
  out.success = true;
  return out;
}

BuildResult build_ri(const Params& p, const Seed& seed, const BuildOptions& options) {
  GapStream A = GapStream::percolation(p.M, seed.child("A"), options.horizon);
  GapStream B = GapStream::percolation(p.M, seed.child("B"), options.horizon);
  return build_ri(A, B, p, options);
}

Baseline trivial_baseline(const PointSet& A, const PointSet& B, std::size_t n) {
  if (n < 1 || A.size() < n || B.size() < n) {
    throw Error(ErrorKind::PreconditionViolated, "both sets need at least n points");
  }
  Rational M(1);
  for (std::size_t i = 1; i < n; ++i) {
    const Rational ga(A.gap(i)), gb(B.gap(i));
    M = max(M, max(gb / ga, ga / gb));
  }
  Baseline out;
  const PointSet a = A.prefix(n), b = B.prefix(n);
  out.T = Mapping{a, b.points(), b};
  out.constants = RiConstants{M, Rational(0), Rational(0)};
  return out;
}

}  // namespace roughiso
