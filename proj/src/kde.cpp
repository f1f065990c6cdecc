#include "hvm/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hvm/error.hpp"

namespace hvm {

double kde_cdf(std::span<const double> stats, double bandwidth, double s) {
  double acc = 0.0;
  const double scale = 1.0 / (bandwidth * std::numbers::sqrt2);
  for (const double v : stats) acc += 0.5 * std::erfc(-(s - v) * scale);
  return acc / static_cast<double>(stats.size());
}

KdeLimit kde_control_limit(std::span<const double> stats, double delta) {
  if (stats.empty()) throw HvmError(ErrorKind::EmptyInput, "no statistics to fit a control limit");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw HvmError(ErrorKind::InvalidDelta, "significance level must lie in (0, 1)");
  }
  const auto [min_it, max_it] = std::minmax_element(stats.begin(), stats.end());
  const double n = static_cast<double>(stats.size());

  double mean = 0.0;
  for (const double v : stats) mean += v;
  mean /= n;
  double ss = 0.0;
  for (const double v : stats) ss += (v - mean) * (v - mean);
  const double sd = stats.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  if (!(sd > 0.0)) return {*max_it, 0.0};

  const double h = 1.06 * sd * std::pow(n, -0.2);
  const double target = 1.0 - delta;
  double lo = *min_it - 5.0 * h;
  double hi = *max_it + 10.0 * h;
  // Invariant: cdf(lo) < target <= cdf(hi).
  for (int iter = 0; iter < 200; ++iter) {
    if (hi - lo <= 1e-8 * std::max(std::abs(hi), std::abs(lo))) break;
    const double mid = 0.5 * (lo + hi);
    if (kde_cdf(stats, h, mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, h};
}

}  // namespace hvm
