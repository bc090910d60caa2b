#include "roughiso/point_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace roughiso {

PointSet PointSet::from_points(std::vector<Coord> points, bool rooted) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] < 0) throw std::invalid_argument("point set contains a negative value");
    if (i > 0 && points[i] <= points[i - 1]) {
      throw std::invalid_argument("point set is not strictly increasing at index " +
                                  std::to_string(i));
    }
  }
  if (rooted && (points.empty() || points.front() != 0)) {
    throw std::invalid_argument("rooted point set must start at 0");
  }
  PointSet s;
  s.points_ = std::move(points);
  s.rooted_ = rooted;
  return s;
}

PointSet PointSet::from_gaps(const std::vector<Coord>& gaps) {
  std::vector<Coord> pts;
  pts.reserve(gaps.size() + 1);
  pts.push_back(0);
  for (Coord g : gaps) {
    if (g < 1) throw std::invalid_argument("gaps must be positive");
    pts.push_back(pts.back() + g);
  }
  return from_points(std::move(pts), true);
}

std::vector<Coord> PointSet::gaps() const {
  std::vector<Coord> out;
  if (points_.size() > 1) out.reserve(points_.size() - 1);
  for (std::size_t i = 1; i < points_.size(); ++i) out.push_back(points_[i] - points_[i - 1]);
  return out;
}

std::optional<std::size_t> PointSet::index_of(Coord value) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), value);
  if (it == points_.end() || *it != value) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin());
}

PointSet PointSet::prefix(std::size_t count) const {
  PointSet s;
  s.points_.assign(points_.begin(), points_.begin() + std::min(count, points_.size()));
  s.rooted_ = rooted_;
  return s;
}

PointSet PointSet::window(std::size_t first, std::size_t last) const {
  if (first > last || last >= points_.size()) throw std::out_of_range("bad point-set window");
  std::vector<Coord> pts;
  pts.reserve(last - first + 1);
  for (std::size_t i = first; i <= last; ++i) pts.push_back(points_[i] - points_[first]);
  return from_points(std::move(pts), true);
}

Ticks to_ticks(const Rational& value) {
  Rational scaled = value * Rational(kTickScale);
  if (!scaled.is_integer()) {
    throw std::invalid_argument("value " + value.str() + " is not on the 2^-32 grid");
  }
  return scaled.num();
}

Rational from_ticks(Ticks ticks) { return Rational(ticks, kTickScale); }

RealPointSet RealPointSet::from_ticks(std::vector<Ticks> ticks) {
  for (std::size_t i = 0; i < ticks.size(); ++i) {
    if (ticks[i] < 0) throw std::invalid_argument("real point set contains a negative value");
    if (i > 0 && ticks[i] <= ticks[i - 1]) {
      throw std::invalid_argument("real point set is not strictly increasing");
    }
  }
  RealPointSet s;
  s.ticks_ = std::move(ticks);
  return s;
}

RealPointSet RealPointSet::from_rationals(const std::vector<Rational>& values) {
  std::vector<Ticks> t;
  t.reserve(values.size());
  for (const auto& v : values) t.push_back(to_ticks(v));
  return from_ticks(std::move(t));
}

RealPointSet RealPointSet::from_integers(const PointSet& points) {
  std::vector<Ticks> t;
  t.reserve(points.size());
  for (Coord p : points.points()) {
    if (p >= (Ticks{1} << (62 - kFracBits))) throw std::overflow_error("point too large for tick grid");
    t.push_back(p * kTickScale);
  }
  return from_ticks(std::move(t));
}

Rational RealPointSet::value(std::size_t i) const { return roughiso::from_ticks(ticks_[i]); }

std::vector<std::string> RealPointSet::to_strings() const {
  std::vector<std::string> out;
  out.reserve(ticks_.size());
  for (std::size_t i = 0; i < ticks_.size(); ++i) {
    Rational v = value(i);
    out.push_back(std::to_string(v.num()) + "/" + std::to_string(v.den()));
  }
  return out;
}

}  // namespace roughiso
