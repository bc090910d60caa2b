#include "roughiso/stats.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace roughiso {

Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence) {
  if (n == 0 || k > n) throw std::invalid_argument("clopper_pearson needs 0 <= k <= n, n >= 1");
  const double alpha = 1.0 - confidence;
  const auto kd = static_cast<double>(k), nd = static_cast<double>(n);
  Interval out;
  out.lo = k == 0 ? 0.0 : boost::math::ibeta_inv(kd, nd - kd + 1, alpha / 2);
  out.hi = k == n ? 1.0 : boost::math::ibeta_inv(kd + 1, nd - kd, 1 - alpha / 2);
  return out;
}

ChiSquare chi_square_discrete(const std::map<std::int64_t, std::uint64_t>& counts,
                              std::int64_t support_min,
                              const std::function<double(std::int64_t)>& pmf,
                              const std::function<double(std::int64_t)>& tail,
                              double min_expected) {
  std::uint64_t total = 0;
  for (const auto& [v, c] : counts) {
    if (v < support_min) throw std::invalid_argument("sample outside the support");
    total += c;
  }
  if (total == 0) throw std::invalid_argument("chi-square needs samples");
  const auto N = static_cast<double>(total);

  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double obs = 0, exp = 0;
  auto it = counts.begin();
  std::int64_t v = support_min;
  for (;; ++v) {
    // Close off once the rest of the support cannot fill another bin.
    if (N * tail(v) < min_expected) break;
    while (it != counts.end() && it->first < v) ++it;
    if (it != counts.end() && it->first == v) obs += static_cast<double>(it->second);
    exp += N * pmf(v);
    if (exp >= min_expected && N * tail(v + 1) >= min_expected) {
      bins.emplace_back(obs, exp);
      obs = exp = 0;
    }
  }
  // Upper tail from v on, merged with whatever is still open.
  exp += N * tail(v);
  for (auto jt = counts.lower_bound(v); jt != counts.end(); ++jt) obs += static_cast<double>(jt->second);
  bins.emplace_back(obs, exp);

  ChiSquare out;
  out.bins = static_cast<int>(bins.size());
  out.dof = out.bins - 1;
  for (const auto& [o, e] : bins) out.statistic += (o - e) * (o - e) / e;
  out.p_value = out.dof > 0 ? boost::math::gamma_q(out.dof / 2.0, out.statistic / 2.0) : 1.0;
  return out;
}

double geometric_pmf(double p, std::int64_t k) {
  if (k < 1) return 0;
  return p * std::exp(static_cast<double>(k - 1) * std::log1p(-p));
}

double geometric_tail(double p, std::int64_t k) {
  if (k <= 1) return 1;
  return std::exp(static_cast<double>(k - 1) * std::log1p(-p));
}

}  // namespace roughiso
