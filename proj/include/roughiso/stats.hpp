#pragma once

#include <cstdint>
#include <functional>
#include <map>

namespace roughiso {

struct Interval {
  double lo = 0;
  double hi = 1;
  [[nodiscard]] bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Two-sided 3-sigma confidence level.
inline constexpr double kThreeSigma = 0.99730020393673981;

/// Exact (Clopper-Pearson) binomial interval for k successes in n trials.
Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence = 0.95);

struct ChiSquare {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
  int bins = 0;
};

/// Goodness of fit of integer-valued samples against a law on {support_min, ...}.
///
/// Consecutive values are merged into a bin until its expected count reaches
/// `min_expected`; the last bin absorbs the whole upper tail (tail(v) = P(X >= v)).
ChiSquare chi_square_discrete(const std::map<std::int64_t, std::uint64_t>& counts,
                              std::int64_t support_min,
                              const std::function<double(std::int64_t)>& pmf,
                              const std::function<double(std::int64_t)>& tail,
                              double min_expected = 5.0);

/// Geometric(p) on {1, 2, ...}.
double geometric_pmf(double p, std::int64_t k);
double geometric_tail(double p, std::int64_t k);

}  // namespace roughiso
