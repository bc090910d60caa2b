#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roughiso/rational.hpp"

namespace roughiso {

using Coord = std::int64_t;

/// Finite, strictly increasing set of non-negative integers.
///
/// Gap i (for i >= 1) is points[i] - points[i-1]; gap 0 is undefined.
class PointSet {
 public:
  PointSet() = default;

  /// Validates ordering, non-negativity and (if rooted) points[0] == 0.
  static PointSet from_points(std::vector<Coord> points, bool rooted = true);
  /// Rooted set 0, g1, g1+g2, ...
  static PointSet from_gaps(const std::vector<Coord>& gaps);

  [[nodiscard]] const std::vector<Coord>& points() const { return points_; }
  [[nodiscard]] bool rooted() const { return rooted_; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] bool empty() const { return points_.empty(); }
  [[nodiscard]] Coord operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] Coord front() const { return points_.front(); }
  [[nodiscard]] Coord back() const { return points_.back(); }

  [[nodiscard]] Coord gap(std::size_t i) const { return points_[i] - points_[i - 1]; }
  [[nodiscard]] std::vector<Coord> gaps() const;

  [[nodiscard]] std::optional<std::size_t> index_of(Coord value) const;
  [[nodiscard]] bool contains(Coord value) const { return index_of(value).has_value(); }

  /// First `count` points (rooted flag preserved).
  [[nodiscard]] PointSet prefix(std::size_t count) const;
  /// Points with index in [first, last], shifted so that points[first] becomes 0.
  [[nodiscard]] PointSet window(std::size_t first, std::size_t last) const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<Coord> points_;
  bool rooted_ = false;
};

/// Ticks of a dyadic fixed-point real: value = ticks / 2^kFracBits.
using Ticks = std::int64_t;
inline constexpr int kFracBits = 32;
inline constexpr Ticks kTickScale = Ticks{1} << kFracBits;

/// Strictly increasing set of non-negative dyadic rationals with denominator 2^32.
class RealPointSet {
 public:
  RealPointSet() = default;
  static RealPointSet from_ticks(std::vector<Ticks> ticks);
  /// Each value must be exactly representable on the 2^-32 grid.
  static RealPointSet from_rationals(const std::vector<Rational>& values);
  /// Integer set lifted onto the tick grid.
  static RealPointSet from_integers(const PointSet& points);

  [[nodiscard]] const std::vector<Ticks>& ticks() const { return ticks_; }
  [[nodiscard]] std::size_t size() const { return ticks_.size(); }
  [[nodiscard]] bool empty() const { return ticks_.empty(); }
  [[nodiscard]] Ticks operator[](std::size_t i) const { return ticks_[i]; }
  [[nodiscard]] Rational value(std::size_t i) const;
  [[nodiscard]] std::vector<std::string> to_strings() const;

  friend bool operator==(const RealPointSet&, const RealPointSet&) = default;

 private:
  std::vector<Ticks> ticks_;
};

/// T : domain -> codomain, stored as one image value per domain point.
struct Mapping {
  PointSet domain;
  std::vector<Coord> image;
  PointSet codomain;
};

/// Mapping between dyadic real sets; images are tick values.
struct RealMapping {
  RealPointSet domain;
  std::vector<Ticks> image;
  RealPointSet codomain;
};

/// Tick value of an exact dyadic rational; throws if not on the grid.
Ticks to_ticks(const Rational& value);
Rational from_ticks(Ticks ticks);

}  // namespace roughiso
