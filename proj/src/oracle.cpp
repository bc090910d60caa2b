#include "roughiso/oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

#include "roughiso/errors.hpp"

namespace roughiso {
namespace {

void check_instance(const PointSet& A, const PointSet& B, const SearchBudget& budget) {
  if (A.size() > budget.max_domain_points) {
    throw Error(ErrorKind::BudgetExceeded, "domain has " + std::to_string(A.size()) +
                                               " points, budget " +
                                               std::to_string(budget.max_domain_points));
  }
  if (B.size() > budget.max_codomain_points) {
    throw Error(ErrorKind::BudgetExceeded, "codomain has " + std::to_string(B.size()) +
                                               " points, budget " +
                                               std::to_string(budget.max_codomain_points));
  }
  if (!B.empty() && B.back() > budget.max_codomain_value) {
    throw Error(ErrorKind::BudgetExceeded,
                "codomain value " + std::to_string(B.back()) + " exceeds budget");
  }
}

class NodeCounter {
 public:
  explicit NodeCounter(std::uint64_t limit) : limit_(limit) {}
  void tick() {
    if (++count_ > limit_) {
      throw Error(ErrorKind::BudgetExceeded,
                  "search expanded more than " + std::to_string(limit_) + " nodes");
    }
  }

 private:
  std::uint64_t limit_;
  std::uint64_t count_ = 0;
};

/// Pair bounds dx/M - D <= dt <= M dx + D, scaled to integers.
struct PairBounds {
  Int128 mn, md, dn, dd;
  explicit PairBounds(const RiConstants& c)
      : mn(c.M.num()), md(c.M.den()), dn(c.D.num()), dd(c.D.den()) {}

  [[nodiscard]] bool low_ok(Int128 dx, Int128 dt) const {
    return md * dd * dx <= mn * (dd * dt + dn);
  }
  [[nodiscard]] bool high_ok(Int128 dx, Int128 dt) const {
    return md * dd * dt <= mn * dd * dx + md * dn;
  }
};

struct Radius {
  Int128 rn, rd;
  explicit Radius(const Rational& R) : rn(R.num()), rd(R.den()) {}
  [[nodiscard]] bool covers(Coord y, Coord b) const {
    Int128 d = static_cast<Int128>(y) - b;
    if (d < 0) d = -d;
    return d * rd <= rn;
  }
};

/// Codomain points strictly between indices lo and hi are each within R of B[lo] or B[hi].
bool gap_covered(const PointSet& B, std::size_t lo, std::size_t hi, const Radius& r) {
  for (std::size_t k = lo + 1; k < hi; ++k) {
    if (!r.covers(B[lo], B[k]) && !r.covers(B[hi], B[k])) return false;
  }
  return true;
}

bool tail_covered(const PointSet& B, std::size_t last, const Radius& r) {
  for (std::size_t k = last + 1; k < B.size(); ++k) {
    if (!r.covers(B[last], B[k])) return false;
  }
  return true;
}

bool rootable(const PointSet& A, const PointSet& B) {
  return !A.empty() && !B.empty() && A.front() == 0 && B.front() == 0;
}

Mapping make_mapping(const PointSet& A, const PointSet& B, const std::vector<std::size_t>& js) {
  std::vector<Coord> image(js.size());
  for (std::size_t i = 0; i < js.size(); ++i) image[i] = B[js[i]];
  return Mapping{A, std::move(image), B};
}

/// Markov search: state (i, j, f) = domain index, image index, fiber start.
class MarkovSearch {
 public:
  MarkovSearch(const PointSet& A, const PointSet& B, const MarkovConstants& mc,
               const SearchBudget& budget)
      : A_(A), B_(B), mc_(mc.normalized()), r_(mc_.R), nodes_(budget.max_nodes),
        max_results_(budget.max_results) {
    check_instance(A, B, budget);
    const std::size_t n = A.size(), m = B.size();
    memo_.assign(n * m * n, kUnknown);
  }

  std::optional<Mapping> first() {
    if (!rootable(A_, B_)) return std::nullopt;
    std::vector<std::size_t> js{0};
    if (!alive(0, 0, 0)) return std::nullopt;
    std::size_t i = 0, j = 0, f = 0;
    while (i + 1 < A_.size()) {
      for (const auto& [j2, f2] : moves(i, j, f)) {
        if (alive(i + 1, j2, f2)) {
          j = j2;
          f = f2;
          break;
        }
      }
      js.push_back(j);
      ++i;
    }
    return make_mapping(A_, B_, js);
  }

  std::vector<Mapping> all() {
    std::vector<Mapping> out;
    if (!rootable(A_, B_) || !alive(0, 0, 0)) return out;
    std::vector<std::size_t> js{0};
    expand(0, 0, 0, js, out);
    return out;
  }

 private:
  static constexpr signed char kUnknown = -1;

  [[nodiscard]] std::size_t key(std::size_t i, std::size_t j, std::size_t f) const {
    return (i * B_.size() + j) * A_.size() + f;
  }

  /// Admissible (image, fiber start) for domain index i+1, in increasing image order.
  std::vector<std::pair<std::size_t, std::size_t>> moves(std::size_t i, std::size_t j,
                                                         std::size_t f) const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const Int128 dx = A_[i + 1] - A_[i];
    if (static_cast<Int128>(A_[i + 1] - A_[f]) * mc_.F.den() <= mc_.F.num()) {
      out.emplace_back(j, f);
    }
    const Int128 mn = mc_.M.num(), md = mc_.M.den();
    for (std::size_t j2 = j + 1; j2 < B_.size(); ++j2) {
      const Int128 dt = B_[j2] - B_[j];
      if (md * dt > mn * dx) break;
      if (!gap_covered(B_, j, j2, r_)) break;
      if (md * dx > mn * dt) continue;
      out.emplace_back(j2, i + 1);
    }
    return out;
  }

  bool alive(std::size_t i, std::size_t j, std::size_t f) {
    signed char& m = memo_[key(i, j, f)];
    if (m != kUnknown) return m != 0;
    nodes_.tick();
    bool ok = false;
    if (i + 1 == A_.size()) {
      ok = tail_covered(B_, j, r_);
    } else {
      for (const auto& [j2, f2] : moves(i, j, f)) {
        if (alive(i + 1, j2, f2)) {
          ok = true;
          break;
        }
      }
    }
    memo_[key(i, j, f)] = ok ? 1 : 0;
    return ok;
  }

  void expand(std::size_t i, std::size_t j, std::size_t f, std::vector<std::size_t>& js,
              std::vector<Mapping>& out) {
    if (i + 1 == A_.size()) {
      if (out.size() >= max_results_) {
        throw Error(ErrorKind::BudgetExceeded, "more than " + std::to_string(max_results_) +
                                                   " mappings");
      }
      out.push_back(make_mapping(A_, B_, js));
      return;
    }
    for (const auto& [j2, f2] : moves(i, j, f)) {
      if (!alive(i + 1, j2, f2)) continue;
      nodes_.tick();
      js.push_back(j2);
      expand(i + 1, j2, f2, js, out);
      js.pop_back();
    }
  }

  const PointSet& A_;
  const PointSet& B_;
  MarkovConstants mc_;
  Radius r_;
  NodeCounter nodes_;
  std::size_t max_results_;
  std::vector<signed char> memo_;
};

/// Depth-first search over image index sequences with pairwise pruning.
/// `visit` returns true to stop the search.
class RoughSearch {
 public:
  RoughSearch(const PointSet& A, const PointSet& B, const RiConstants& c, bool monotone,
              bool rooted, const SearchBudget& budget)
      : A_(A), B_(B), c_(c.normalized()), pairs_(c_), r_(c_.R), monotone_(monotone),
        rooted_(rooted), nodes_(budget.max_nodes) {
    check_instance(A, B, budget);
  }

  void run(const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    if (A_.empty() || B_.empty()) return;
    if (rooted_ && !rootable(A_, B_)) return;
    visit_ = &visit;
    js_.clear();
    stop_ = false;
    step(0);
  }

 private:
  void step(std::size_t i) {
    if (stop_) return;
    if (i == A_.size()) {
      if (complete_covered()) stop_ = (*visit_)(js_);
      return;
    }
    std::size_t lo = 0, hi = B_.size();
    if (i == 0 && rooted_) hi = 1;
    if (monotone_ && i > 0) lo = js_.back();
    for (std::size_t j = lo; j < hi && !stop_; ++j) {
      nodes_.tick();
      bool high_fail = false;
      if (!pairs_fit(i, j, high_fail)) {
        // Along a monotone scan dt only grows, so a high-side failure is final.
        if (monotone_ && high_fail) break;
        continue;
      }
      if (monotone_ && i > 0 && j > js_.back() && !gap_covered(B_, js_.back(), j, r_)) break;
      js_.push_back(j);
      step(i + 1);
      js_.pop_back();
    }
  }

  bool pairs_fit(std::size_t i, std::size_t j, bool& high_fail) const {
    for (std::size_t k = 0; k < i; ++k) {
      const Int128 dx = A_[i] - A_[k];
      Int128 dt = static_cast<Int128>(B_[j]) - B_[js_[k]];
      if (dt < 0) dt = -dt;
      if (!pairs_.high_ok(dx, dt)) {
        high_fail = monotone_;
        return false;
      }
      if (!pairs_.low_ok(dx, dt)) return false;
    }
    return true;
  }

  [[nodiscard]] bool complete_covered() const {
    if (monotone_) return tail_covered(B_, js_.back(), r_);
    std::vector<Coord> image(js_.size());
    for (std::size_t i = 0; i < js_.size(); ++i) image[i] = B_[js_[i]];
    std::sort(image.begin(), image.end());
    for (std::size_t k = 0; k < B_.size(); ++k) {
      auto it = std::lower_bound(image.begin(), image.end(), B_[k]);
      bool ok = it != image.end() && r_.covers(*it, B_[k]);
      if (!ok && it != image.begin()) ok = r_.covers(*(it - 1), B_[k]);
      if (!ok) return false;
    }
    return true;
  }

  const PointSet& A_;
  const PointSet& B_;
  RiConstants c_;
  PairBounds pairs_;
  Radius r_;
  bool monotone_;
  bool rooted_;
  NodeCounter nodes_;
  const std::function<bool(const std::vector<std::size_t>&)>* visit_ = nullptr;
  std::vector<std::size_t> js_;
  bool stop_ = false;
};

std::vector<Coord> distances(const PointSet& S) {
  std::vector<Coord> d;
  for (std::size_t i = 0; i < S.size(); ++i) {
    for (std::size_t k = i + 1; k < S.size(); ++k) d.push_back(S[k] - S[i]);
  }
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

/// Values of M at which some pair constraint becomes tight; the minimal
/// accepted M is always one of them (or 1).
std::vector<Rational> critical_values(const PointSet& A, const PointSet& B, MapFamily family,
                                      const Rational& D) {
  std::vector<Rational> out{Rational(1)};
  const std::vector<Coord> da = distances(A);
  std::vector<Coord> db = distances(B);
  db.insert(db.begin(), 0);
  for (Coord dx : da) {
    for (Coord dt : db) {
      if (family == MapFamily::Markov) {
        if (dt == 0) continue;
        out.emplace_back(dt, dx);
        out.emplace_back(dx, dt);
        continue;
      }
      const Rational low_den = Rational(dt) + D;
      if (low_den > Rational(0)) out.push_back(Rational(dx) / low_den);
      const Rational high_num = Rational(dt) - D;
      if (high_num > Rational(0)) out.push_back(high_num / Rational(dx));
    }
  }
  std::erase_if(out, [](const Rational& v) { return v < Rational(1); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool accepts(const PointSet& A, const PointSet& B, MapFamily family, const Rational& M,
             const Rational& D, const Rational& R, const SearchBudget& budget) {
  switch (family) {
    case MapFamily::Rooted:
      return exists_general_ri(A, B, RiConstants{M, D, R}, budget).has_value();
    case MapFamily::Increasing:
      return exists_increasing_ri(A, B, RiConstants{M, D, R}, budget).has_value();
    case MapFamily::Markov:
      return exists_markov_ri(A, B, MarkovConstants{M, D, R}, budget).has_value();
  }
  return false;
}

/// Lexicographic successor of a 4-subset of [0, V] that contains 0.
bool next_quad(std::vector<Coord>& s, Coord V) {
  for (int k = 3; k >= 1; --k) {
    if (s[k] < V - (3 - k)) {
      ++s[k];
      for (int t = k + 1; t < 4; ++t) s[t] = s[t - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<Mapping> exists_markov_ri(const PointSet& A, const PointSet& B,
                                        const MarkovConstants& mc, const SearchBudget& budget) {
  return MarkovSearch(A, B, mc, budget).first();
}

std::vector<Mapping> enumerate_markov_ri(const PointSet& A, const PointSet& B,
                                         const MarkovConstants& mc, const SearchBudget& budget) {
  return MarkovSearch(A, B, mc, budget).all();
}

std::optional<Mapping> exists_increasing_ri(const PointSet& A, const PointSet& B,
                                            const RiConstants& c, const SearchBudget& budget) {
  std::optional<Mapping> out;
  RoughSearch(A, B, c, true, true, budget).run([&](const std::vector<std::size_t>& js) {
    out = make_mapping(A, B, js);
    return true;
  });
  return out;
}

std::vector<Mapping> enumerate_increasing_ri(const PointSet& A, const PointSet& B,
                                             const RiConstants& c, const SearchBudget& budget) {
  std::vector<Mapping> out;
  RoughSearch(A, B, c, true, true, budget).run([&](const std::vector<std::size_t>& js) {
    if (out.size() >= budget.max_results) {
      throw Error(ErrorKind::BudgetExceeded,
                  "more than " + std::to_string(budget.max_results) + " mappings");
    }
    out.push_back(make_mapping(A, B, js));
    return false;
  });
  return out;
}

std::optional<Mapping> exists_general_ri(const PointSet& A, const PointSet& B,
                                         const RiConstants& c, const SearchBudget& budget,
                                         const GeneralSearchOptions& options) {
  std::optional<Mapping> out;
  RoughSearch(A, B, c, false, options.rooted, budget).run([&](const std::vector<std::size_t>& js) {
    if (options.require_non_monotone && std::is_sorted(js.begin(), js.end())) return false;
    out = make_mapping(A, B, js);
    return true;
  });
  return out;
}

std::string_view to_string(MapFamily family) {
  switch (family) {
    case MapFamily::Rooted: return "rooted";
    case MapFamily::Increasing: return "increasing";
    case MapFamily::Markov: return "markov";
  }
  return "unknown";
}

MapFamily map_family_from_string(std::string_view name) {
  for (auto f : {MapFamily::Rooted, MapFamily::Increasing, MapFamily::Markov}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown map family: " + std::string(name));
}

Rational round_up_to_grid(const Rational& x, std::int64_t max_den) {
  Rational best(x.ceil());
  for (std::int64_t q = 2; q <= max_den; ++q) {
    Rational candidate((x * Rational(q)).ceil(), q);
    if (candidate < best) best = candidate;
  }
  return best;
}

std::optional<Rational> minimal_multiplicative_constant(const PointSet& A, const PointSet& B,
                                                        MapFamily family, const Rational& D,
                                                        const Rational& R,
                                                        const SearchBudget& budget) {
  const std::vector<Rational> cands = critical_values(A, B, family, D);
  if (!accepts(A, B, family, cands.back(), D, R, budget)) return std::nullopt;
  std::size_t lo = 0, hi = cands.size() - 1;  // cands[hi] accepts
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (accepts(A, B, family, cands[mid], D, R, budget)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return round_up_to_grid(cands[lo]);
}

Counterexample counterexample_family(std::int64_t L, const SearchBudget& budget) {
  if (L < 1) throw Error(ErrorKind::PreconditionViolated, "L must be positive");
  const RiConstants three{Rational(3), Rational(0), Rational(0)};
  const GeneralSearchOptions general{false, true};
  for (Coord V = 3; V <= budget.max_codomain_value; ++V) {
    std::vector<Coord> a{0, 1, 2, 3};
    do {
      std::vector<Coord> b{0, 1, 2, 3};
      do {
        if (std::max(a.back(), b.back()) != V) continue;
        const PointSet A = PointSet::from_points(a), B = PointSet::from_points(b);
        auto witness = exists_general_ri(A, B, three, budget, general);
        if (!witness) continue;
        auto m = minimal_multiplicative_constant(A, B, MapFamily::Increasing, Rational(0),
                                                 Rational(0), budget);
        if (!m || *m >= Rational(L)) {
          return Counterexample{A, B, *witness, m};
        }
      } while (next_quad(b, V));
    } while (next_quad(a, V));
  }
  throw Error(ErrorKind::NotFoundWithinBudget,
              "no counterexample with values up to " + std::to_string(budget.max_codomain_value));
}

}  // namespace roughiso
