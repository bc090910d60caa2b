#include "roughiso/verify.hpp"

#include <algorithm>
#include <iostream>

#include "roughiso/errors.hpp"

namespace roughiso {
namespace {

Rational at_least_one(const Rational& M) {
  if (M < Rational(1)) {
    std::clog << "warning: multiplicative constant " << M.str() << " < 1 treated as 1\n";
    return Rational(1);
  }
  return M;
}

void check_codomain(const std::vector<std::int64_t>& image, const std::vector<std::int64_t>& codomain) {
  const bool sorted = std::is_sorted(image.begin(), image.end());
  auto c = codomain.begin();
  for (std::size_t i = 0; i < image.size(); ++i) {
    bool found;
    if (sorted) {
      // Merge walk: images only move right.
      while (c != codomain.end() && *c < image[i]) ++c;
      found = c != codomain.end() && *c == image[i];
    } else {
      found = std::binary_search(codomain.begin(), codomain.end(), image[i]);
    }
    if (!found) {
      throw Error(ErrorKind::ImageNotInCodomain,
                  "image of domain index " + std::to_string(i) + " (" + std::to_string(image[i]) +
                      ") is not a codomain point");
    }
  }
}

/// Smallest codomain index farther than R (in ticks: rd*|y-b| > rn*scale)
/// from every image value.
std::optional<std::size_t> first_uncovered(const std::vector<std::int64_t>& image,
                                           const std::vector<std::int64_t>& codomain,
                                           const Rational& R, std::int64_t scale) {
  std::vector<std::int64_t> copy;
  const std::vector<std::int64_t>* values = &image;
  if (!std::is_sorted(image.begin(), image.end())) {
    copy = image;
    std::sort(copy.begin(), copy.end());
    values = &copy;
  }
  const std::vector<std::int64_t>& sorted = *values;
  const Int128 rhs = checked_mul(R.num(), scale);
  std::size_t next = 0;  // first image value >= b
  for (std::size_t k = 0; k < codomain.size(); ++k) {
    const std::int64_t b = codomain[k];
    while (next < sorted.size() && sorted[next] < b) ++next;
    Int128 best = -1;
    if (next < sorted.size()) best = static_cast<Int128>(sorted[next]) - b;
    if (next > 0) {
      Int128 d = static_cast<Int128>(b) - sorted[next - 1];
      if (best < 0 || d < best) best = d;
    }
    if (best < 0 || checked_mul(best, R.den()) > rhs) return k;
  }
  return std::nullopt;
}

bool is_nondecreasing(const std::vector<std::int64_t>& image) {
  return std::is_sorted(image.begin(), image.end());
}

/// Pair-distortion scan shared by the integer and dyadic verifiers.
Verdict check_pairs(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& t,
                    const RiConstants& c, std::int64_t scale) {
  const Int128 mn = c.M.num(), md = c.M.den(), dn = c.D.num(), dd = c.D.den();
  const Int128 low_bound = checked_mul(checked_mul(mn, dn), scale);
  const Int128 high_bound = checked_mul(checked_mul(md, dn), scale);
  const Int128 a = checked_mul(md, dd);  // coefficient on |dx| (low) and |dT| (high)
  const Int128 b = checked_mul(mn, dd);  // coefficient on |dT| (low) and |dx| (high)
  const std::size_t n = x.size();

  auto low_fails = [&](std::size_t i, std::size_t j) {
    Int128 dx = static_cast<Int128>(x[j]) - x[i];
    Int128 dt = static_cast<Int128>(t[j]) - t[i];
    if (dt < 0) dt = -dt;
    return checked_add(checked_mul(a, dx), -low_bound) > checked_mul(b, dt);
  };
  auto high_fails = [&](std::size_t i, std::size_t j) {
    Int128 dx = static_cast<Int128>(x[j]) - x[i];
    Int128 dt = static_cast<Int128>(t[j]) - t[i];
    if (dt < 0) dt = -dt;
    return checked_mul(a, dt) > checked_add(checked_mul(b, dx), high_bound);
  };
  auto report = [&](std::size_t i) -> Verdict {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (low_fails(i, j)) {
        return Verdict::fail(ViolationKind::DistortionLow,
                             {static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)});
      }
      if (high_fails(i, j)) {
        return Verdict::fail(ViolationKind::DistortionHigh,
                             {static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)});
      }
    }
    return Verdict::pass();
  };

  if (is_nondecreasing(t)) {
    // For monotone T every |dT| = T_j - T_i, so both inequalities telescope
    // into differences of per-point potentials:
    //   low  violated iff v_j - v_i > low_bound,  v = a*x - b*T
    //   high violated iff u_j - u_i > high_bound, u = a*T - b*x
    // and a suffix maximum finds the smallest offending i in O(n).
    auto v = [&](std::size_t k) { return checked_add(checked_mul(a, x[k]), -checked_mul(b, t[k])); };
    auto u = [&](std::size_t k) { return checked_add(checked_mul(a, t[k]), -checked_mul(b, x[k])); };
    std::optional<std::size_t> first_bad;
    if (n >= 2) {
      Int128 max_u = u(n - 1), max_v = v(n - 1);  // maxima over indices > k
      for (std::size_t k = n - 1; k-- > 0;) {
        const Int128 uk = u(k), vk = v(k);
        if (checked_add(max_v, -vk) > low_bound || checked_add(max_u, -uk) > high_bound) {
          first_bad = k;
        }
        max_u = std::max(max_u, uk);
        max_v = std::max(max_v, vk);
      }
    }
    if (!first_bad) return Verdict::pass();
    return report(*first_bad);
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    Verdict v = report(i);
    if (!v.ok()) return v;
  }
  return Verdict::pass();
}

Verdict rough_core(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& t,
                   const std::vector<std::int64_t>& codomain, const RiConstants& c0,
                   std::int64_t scale) {
  if (x.size() != t.size()) {
    throw Error(ErrorKind::DomainMismatch, "image length differs from domain size");
  }
  check_codomain(t, codomain);
  RiConstants c = c0.normalized();
  Verdict pairs = check_pairs(x, t, c, scale);
  if (!pairs.ok()) return pairs;
  if (auto k = first_uncovered(t, codomain, c.R, scale)) {
    return Verdict::fail(ViolationKind::Density, {static_cast<std::int64_t>(*k)});
  }
  return Verdict::pass();
}

}  // namespace

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DistortionLow: return "DistortionLow";
    case ViolationKind::DistortionHigh: return "DistortionHigh";
    case ViolationKind::Density: return "Density";
    case ViolationKind::NotRooted: return "NotRooted";
    case ViolationKind::NotMonotone: return "NotMonotone";
    case ViolationKind::AdjacencyDistortion: return "AdjacencyDistortion";
    case ViolationKind::FiberWidth: return "FiberWidth";
  }
  return "Unknown";
}

ViolationKind violation_kind_from_string(std::string_view name) {
  for (auto k : {ViolationKind::DistortionLow, ViolationKind::DistortionHigh, ViolationKind::Density,
                 ViolationKind::NotRooted, ViolationKind::NotMonotone,
                 ViolationKind::AdjacencyDistortion, ViolationKind::FiberWidth}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown violation kind: " + std::string(name));
}

RiConstants RiConstants::normalized() const { return {at_least_one(M), D, R}; }
MarkovConstants MarkovConstants::normalized() const { return {at_least_one(M), F, R}; }

Verdict verify_rough_isometry(const PointSet& A, const PointSet& B,
                              const std::vector<Coord>& image, const RiConstants& c) {
  return rough_core(A.points(), image, B.points(), c, 1);
}

Verdict verify_rough_isometry(const Mapping& T, const RiConstants& c) {
  return verify_rough_isometry(T.domain, T.codomain, T.image, c);
}

Verdict verify_rough_isometry(const RealMapping& T, const RiConstants& c) {
  return rough_core(T.domain.ticks(), T.image, T.codomain.ticks(), c, kTickScale);
}

Verdict verify_rooted(const PointSet& A, const PointSet& B, const std::vector<Coord>& image,
                      const RiConstants& c) {
  if (image.size() != A.size()) {
    throw Error(ErrorKind::DomainMismatch, "image length differs from domain size");
  }
  check_codomain(image, B.points());
  if (A.empty() || A.front() != 0 || image.front() != 0) {
    return Verdict::fail(ViolationKind::NotRooted, {0});
  }
  return verify_rough_isometry(A, B, image, c);
}

Verdict verify_rooted(const Mapping& T, const RiConstants& c) {
  return verify_rooted(T.domain, T.codomain, T.image, c);
}

Verdict verify_increasing(const std::vector<Coord>& image) {
  for (std::size_t j = 1; j < image.size(); ++j) {
    if (image[j] < image[j - 1]) {
      return Verdict::fail(ViolationKind::NotMonotone, {static_cast<std::int64_t>(j)});
    }
  }
  return Verdict::pass();
}

Verdict verify_increasing(const Mapping& T) { return verify_increasing(T.image); }

Verdict verify_markov(const PointSet& A, const PointSet& B, const std::vector<Coord>& image,
                      const MarkovConstants& mc0) {
  if (image.size() != A.size()) {
    throw Error(ErrorKind::DomainMismatch, "image length differs from domain size");
  }
  check_codomain(image, B.points());
  const MarkovConstants mc = mc0.normalized();
  if (A.empty() || A.front() != 0 || image.front() != 0) {
    return Verdict::fail(ViolationKind::NotRooted, {0});
  }
  if (Verdict v = verify_increasing(image); !v.ok()) return v;

  const Int128 mn = mc.M.num(), md = mc.M.den();
  for (std::size_t i = 0; i + 1 < A.size(); ++i) {
    if (image[i] == image[i + 1]) continue;
    Int128 dx = A[i + 1] - A[i];
    Int128 dt = image[i + 1] - image[i];
    if (checked_mul(md, dx) > checked_mul(mn, dt) || checked_mul(md, dt) > checked_mul(mn, dx)) {
      return Verdict::fail(ViolationKind::AdjacencyDistortion,
                           {static_cast<std::int64_t>(i), static_cast<std::int64_t>(i + 1)});
    }
  }

  for (std::size_t first = 0; first < A.size();) {
    std::size_t last = first;
    while (last + 1 < A.size() && image[last + 1] == image[first]) ++last;
    Int128 width = A[last] - A[first];
    if (checked_mul(width, mc.F.den()) > mc.F.num()) {
      return Verdict::fail(ViolationKind::FiberWidth,
                           {static_cast<std::int64_t>(first), static_cast<std::int64_t>(last)});
    }
    first = last + 1;
  }

  if (auto k = first_uncovered(image, B.points(), mc.R, 1)) {
    return Verdict::fail(ViolationKind::Density, {static_cast<std::int64_t>(*k)});
  }
  return Verdict::pass();
}

Verdict verify_markov(const Mapping& T, const MarkovConstants& mc) {
  return verify_markov(T.domain, T.codomain, T.image, mc);
}

RiConstants markov_to_increasing_constants(const MarkovConstants& mc) {
  return {Rational(2) * mc.F + mc.M, Rational(1, 2), mc.R};
}

MarkovConstants increasing_to_markov_constants(const RiConstants& c) {
  return {c.M * c.D + c.M + c.D, c.M * c.D, c.R};
}

std::optional<std::size_t> find_cut_point(const PointSet& A, const std::vector<Coord>& image) {
  const std::size_t n = A.size();
  if (image.size() != n) throw Error(ErrorKind::DomainMismatch, "image length differs from domain size");
  if (n == 0) return std::nullopt;
  // suffix_min[k] / suffix_max[k] over images of indices > k.
  std::vector<Coord> suffix_min(n), suffix_max(n);
  Coord lo = image[n - 1], hi = image[n - 1];
  suffix_min[n - 1] = lo;
  suffix_max[n - 1] = hi;
  for (std::size_t k = n - 1; k-- > 0;) {
    suffix_min[k] = lo;
    suffix_max[k] = hi;
    lo = std::min(lo, image[k]);
    hi = std::max(hi, image[k]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 == n) return k;
    if (suffix_min[k] >= image[k] || suffix_max[k] <= image[k]) return k;
  }
  return std::nullopt;
}

Restriction restrict(const PointSet& A, const PointSet& B, const std::vector<Coord>& image,
                     std::size_t n, const Rational& L, const RiConstants& c) {
  if (n == 0 || n > A.size()) throw Error(ErrorKind::PreconditionViolated, "n must be in [1, |A|]");
  if (image.size() != A.size()) throw Error(ErrorKind::DomainMismatch, "image length differs from domain size");
  if (!(L > c.R)) throw Error(ErrorKind::PreconditionViolated, "restriction needs L > R");
  Coord top = *std::max_element(image.begin(), image.begin() + static_cast<std::ptrdiff_t>(n));
  auto idx = B.index_of(top);
  if (!idx) throw Error(ErrorKind::ImageNotInCodomain, "maximal image is not a codomain point");
  Restriction r;
  r.A = A.prefix(n);
  r.B = B.prefix(*idx + 1);
  r.T = Mapping{r.A, std::vector<Coord>(image.begin(), image.begin() + static_cast<std::ptrdiff_t>(n)), r.B};
  r.constants = {c.M, c.D, L};
  return r;
}

bool event_Ew(const PointSet& A, Coord w, const Rational& L, const Rational& M, Coord horizon) {
  if (horizon < w) throw Error(ErrorKind::HorizonTooSmall, "horizon lies before w");
  if (A.empty() || A.back() <= horizon) {
    throw Error(ErrorKind::HorizonTooSmall, "gaps of points up to the horizon are not determined");
  }
  // gap >= L / 4M^3  <=>  gap * 4 mn^3 ld >= ln md^3
  // gap >= (z-w) / 2M^2  <=>  gap * 2 mn^2 >= (z-w) md^2
  const Int128 mn = M.num(), md = M.den(), ln = L.num(), ld = L.den();
  const Int128 fixed_coef = checked_mul(checked_mul(4 * mn, mn * mn), ld);
  const Int128 fixed_rhs = checked_mul(ln, md * md * md);
  const Int128 dist_coef = 2 * mn * mn, dist_scale = md * md;
  auto start = std::upper_bound(A.points().begin(), A.points().end(), w);
  for (auto it = start; it != A.points().end() && *it <= horizon; ++it) {
    std::size_t i = static_cast<std::size_t>(it - A.points().begin());
    const Int128 gap = A[i + 1] - A[i];
    if (checked_mul(gap, fixed_coef) >= fixed_rhs &&
        checked_mul(gap, dist_coef) >= checked_mul(*it - w, dist_scale)) {
      return true;
    }
  }
  return false;
}

Rational L_min(const Rational& M, const Rational& D) {
  return max(Rational(2) * D, Rational(8) * D * M * M);
}

std::optional<BigGap> big_gap_conclusion(const PointSet& A, const std::vector<Coord>& image,
                                         std::size_t x_index, std::size_t y_index,
                                         const RiConstants& c, const Rational& L) {
  if (image.size() != A.size()) throw Error(ErrorKind::DomainMismatch, "image length differs from domain size");
  if (!(x_index < y_index && y_index < A.size())) {
    throw Error(ErrorKind::PreconditionViolated, "need x < y inside A");
  }
  if (Rational(image[y_index]) > Rational(image[x_index]) - L) {
    throw Error(ErrorKind::PreconditionViolated, "T(y) > T(x) - L");
  }
  std::size_t z = y_index;
  for (std::size_t k = A.size(); k-- > y_index;) {
    if (image[k] <= image[x_index]) {
      z = k;
      break;
    }
  }
  BigGap out{z, A[z], std::nullopt};
  const Rational dist(A[z] - A[x_index]);
  if (dist < L / (Rational(2) * c.M)) return std::nullopt;
  if (z + 1 < A.size()) {
    out.gap = A[z + 1] - A[z];
    if (Rational(*out.gap) < dist / (Rational(2) * c.M * c.M)) return std::nullopt;
  }
  return out;
}

}  // namespace roughiso
