#include "hvm/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hvm/error.hpp"

namespace hvm {

namespace {

struct PairCounts {
  double n = 0;
  double sum_a = 0;
  double sum_b = 0;
  double sum_ab = 0;
};

PairCounts count_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw HvmError(ErrorKind::ShapeMismatch, "paired columns differ in length");
  }
  PairCounts c;
  c.n = static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.sum_a += a[i];
    c.sum_b += b[i];
    c.sum_ab += a[i] * b[i];
  }
  return c;
}

double count_frequency(std::span<const double> a, std::span<const double> b, int psi_a, int psi_b) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == psi_a && b[i] == psi_b) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(a.size());
}

}  // namespace

MarginalEstimate estimate_marginal_params(std::span<const double> column, VariableKind kind) {
  const auto n = column.size();
  if (n < 2) throw HvmError(ErrorKind::TooFewRows, "parameter estimation needs n >= 2");
  const double nd = static_cast<double>(n);
  double sum = 0.0;
  for (const double v : column) sum += v;

  if (kind == VariableKind::Binary) {
    const double lo = 1.0 / (nd + 1.0);
    const double hi = 1.0 - lo;
    const double raw = sum / nd;
    const double eta = std::clamp(raw, lo, hi);
    return {BernoulliParams{eta}, eta != raw};
  }

  const double mu = sum / nd;
  double ss = 0.0;
  for (const double v : column) ss += (v - mu) * (v - mu);
  const double raw = std::sqrt(ss / (nd - 1.0));
  const double floor = 1e-9 * (1.0 + std::abs(mu));
  const double sigma = std::max(raw, floor);
  return {GaussianParams{mu, sigma}, sigma != raw};
}

double bernoulli_marginal(std::span<const double> column, int psi) {
  if (column.empty()) return 0.0;
  double ones = 0.0;
  for (const double v : column) ones += v;
  const double p1 = ones / static_cast<double>(column.size());
  return psi * p1 + (1 - psi) * (1.0 - p1);
}

PairProbabilities pair_probabilities(std::span<const double> col_a, std::span<const double> col_b) {
  const auto c = count_pair(col_a, col_b);
  PairProbabilities out;
  out.sigma1 = c.sum_b > 0 ? c.sum_ab / c.sum_b : 0.0;
  out.sigma0 = c.sum_b < c.n ? (c.sum_a - c.sum_ab) / (c.n - c.sum_b) : 0.0;
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) out.joint[a][b] = bernoulli_joint(col_a, col_b, a, b);
  }
  return out;
}

double bernoulli_joint(std::span<const double> col_a, std::span<const double> col_b, int psi_a,
                       int psi_b) {
  const auto c = count_pair(col_a, col_b);
  if (c.n == 0) return 0.0;
  if (c.sum_b == 0 || c.sum_b == c.n) return count_frequency(col_a, col_b, psi_a, psi_b);

  const double s1 = c.sum_ab / c.sum_b;
  const double s0 = (c.sum_a - c.sum_ab) / (c.n - c.sum_b);
  const double p_b = bernoulli_marginal(col_b, psi_b);
  return p_b * (1 - psi_a + (2 * psi_a - 1) * (psi_b * s1 + (1 - psi_b) * s0));
}

double mutual_information(std::span<const double> col_a, std::span<const double> col_b) {
  if (col_a.size() != col_b.size()) {
    throw HvmError(ErrorKind::ShapeMismatch, "paired columns differ in length");
  }
  if (col_a.empty()) return 0.0;
  const std::array<double, 2> pa{bernoulli_marginal(col_a, 0), bernoulli_marginal(col_a, 1)};
  const std::array<double, 2> pb{bernoulli_marginal(col_b, 0), bernoulli_marginal(col_b, 1)};
  double mi = 0.0;
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      const double pab = bernoulli_joint(col_a, col_b, a, b);
      const double prod = pa[a] * pb[b];
      if (pab <= 0.0 || prod <= 0.0) continue;
      mi += pab * std::log(pab / prod);
    }
  }
  return std::max(mi, 0.0);
}

double closed_form_binarized_mi(double rho) {
  if (!(std::abs(rho) < 1.0)) {
    throw HvmError(ErrorKind::DomainError, "correlation must satisfy |rho| < 1");
  }
  const double a = std::asin(rho) / std::numbers::pi;
  const auto term = [](double w, double x) { return w > 0.0 ? w * std::log(x) : 0.0; };
  return term(a + 0.5, 2.0 * a + 1.0) + term(0.5 - a, 1.0 - 2.0 * a);
}

double mi_to_rho(double mi_nats) {
  if (!(mi_nats >= 0.0)) throw HvmError(ErrorKind::DomainError, "mutual information must be >= 0");
  return std::sqrt(-std::expm1(-2.0 * mi_nats));
}

Eigen::MatrixXd pairwise_mutual_information(const BinarizedView& view) {
  const auto d = view.columns.cols();
  Eigen::MatrixXd mi = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      const double v = mutual_information(view.column(static_cast<std::size_t>(j)),
                                          view.column(static_cast<std::size_t>(k)));
      mi(j, k) = v;
      mi(k, j) = v;
    }
  }
  return mi;
}

WeightVector feature_weights(const HybridDataset& data, std::span<const double> means) {
  const auto view = make_binarized_view(data, means);
  const auto mi = pairwise_mutual_information(view);
  const auto d = data.cols();
  WeightVector w;
  w.phi.assign(d, 1.0);
  if (d < 2) return w;
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      if (k != j) sum += mi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
    }
    w.phi[j] = 1.0 + sum / static_cast<double>(d - 1);
  }
  return w;
}

}  // namespace hvm
