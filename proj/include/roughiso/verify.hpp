#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roughiso/point_set.hpp"
#include "roughiso/rational.hpp"

namespace roughiso {

/// Rough-isometry constants (M, D, R).
struct RiConstants {
  Rational M{1};
  Rational D{0};
  Rational R{0};

  /// Copy with M raised to 1 if it was below (the bounds only weaken).
  [[nodiscard]] RiConstants normalized() const;
  friend bool operator==(const RiConstants&, const RiConstants&) = default;
};

/// Markov rough-isometry constants (M, F, R).
struct MarkovConstants {
  Rational M{1};
  Rational F{0};
  Rational R{0};

  [[nodiscard]] MarkovConstants normalized() const;
  friend bool operator==(const MarkovConstants&, const MarkovConstants&) = default;
};

enum class ViolationKind {
  DistortionLow,
  DistortionHigh,
  Density,
  NotRooted,
  NotMonotone,
  AdjacencyDistortion,
  FiberWidth,
};

std::string_view to_string(ViolationKind kind);
ViolationKind violation_kind_from_string(std::string_view name);

/// Failed check. Witness entries are indices: domain indices for pair and
/// monotonicity failures, a codomain index for Density.
struct Violation {
  ViolationKind kind;
  std::vector<std::int64_t> witness;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct Verdict {
  std::optional<Violation> violation;

  [[nodiscard]] bool ok() const { return !violation.has_value(); }
  explicit operator bool() const { return ok(); }
  static Verdict pass() { return {}; }
  static Verdict fail(ViolationKind kind, std::vector<std::int64_t> witness) {
    return Verdict{Violation{kind, std::move(witness)}};
  }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// All verifiers compare exactly. Pair violations are reported for the
// lexicographically smallest pair (i, j), i < j, with DistortionLow checked
// before DistortionHigh; Density reports the smallest uncovered codomain index.

Verdict verify_rough_isometry(const PointSet& A, const PointSet& B,
                              const std::vector<Coord>& image, const RiConstants& c);
Verdict verify_rough_isometry(const Mapping& T, const RiConstants& c);
Verdict verify_rough_isometry(const RealMapping& T, const RiConstants& c);

Verdict verify_rooted(const PointSet& A, const PointSet& B, const std::vector<Coord>& image,
                      const RiConstants& c);
Verdict verify_rooted(const Mapping& T, const RiConstants& c);

Verdict verify_increasing(const std::vector<Coord>& image);
Verdict verify_increasing(const Mapping& T);

Verdict verify_markov(const PointSet& A, const PointSet& B, const std::vector<Coord>& image,
                      const MarkovConstants& mc);
Verdict verify_markov(const Mapping& T, const MarkovConstants& mc);

/// (2F + M, 1/2, R).
RiConstants markov_to_increasing_constants(const MarkovConstants& mc);
/// (MD + M + D, MD, R).
MarkovConstants increasing_to_markov_constants(const RiConstants& c);

/// Smallest point x (as a domain index) after which T stays on one side of T(x).
std::optional<std::size_t> find_cut_point(const PointSet& A, const std::vector<Coord>& image);

struct Restriction {
  PointSet A;
  PointSet B;
  Mapping T;
  RiConstants constants;
};

/// Restricts T to the first n points of A and B to its shortest prefix that
/// contains every image; candidate constants are (M, D, L).
Restriction restrict(const PointSet& A, const PointSet& B, const std::vector<Coord>& image,
                     std::size_t n, const Rational& L, const RiConstants& c);

/// E^w_{L,M} evaluated over points z with w < z <= horizon.
///
/// Gap(z) must be known for those z, so A needs a point beyond the horizon;
/// otherwise HorizonTooSmall is thrown. Points beyond the horizon are not
/// examined: the answer is exact for the truncated event only.
bool event_Ew(const PointSet& A, Coord w, const Rational& L, const Rational& M, Coord horizon);

/// Smallest L supported by the big-gap argument: max(2D, 8 D M^2).
Rational L_min(const Rational& M, const Rational& D);

struct BigGap {
  std::size_t z_index;
  Coord z;
  std::optional<Coord> gap;  ///< nullopt when z is the last point (Gap = infinity)
};

/// Point z of the big-gap argument: the largest z with T(z) <= T(x).
/// Returns nullopt if that z fails the conclusion (hypotheses violated).
std::optional<BigGap> big_gap_conclusion(const PointSet& A, const std::vector<Coord>& image,
                                         std::size_t x_index, std::size_t y_index,
                                         const RiConstants& c, const Rational& L);

}  // namespace roughiso
