#pragma once

#include <span>

namespace hvm {

struct KdeLimit {
  double limit = 0.0;
  double bandwidth = 0.0;  // 0 in the degenerate (zero spread) case
};

/// Gaussian-kernel density control limit.
///
/// Bandwidth follows Silverman's rule, h = 1.06 * std(stats) * n^(-1/5) with
/// the n-1 standard deviation. The limit is the smallest s whose smoothed CDF
/// reaches 1 - delta, found by bisection on [min - 5h, max + 10h] to a relative
/// tolerance of 1e-8. With zero spread the limit is max(stats).
///
/// Throws EmptyInput for an empty sample and InvalidDelta unless 0 < delta < 1.
KdeLimit kde_control_limit(std::span<const double> stats, double delta);

/// Smoothed CDF at `s` for the given sample and bandwidth.
double kde_cdf(std::span<const double> stats, double bandwidth, double s);

}  // namespace hvm
