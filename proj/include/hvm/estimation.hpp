#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "hvm/dataset.hpp"

namespace hvm {

struct GaussianParams {
  double mu = 0.0;
  double sigma = 1.0;
};

struct BernoulliParams {
  double eta = 0.5;
};

using MarginalParams = std::variant<GaussianParams, BernoulliParams>;

/// Fitted marginal plus a flag set when sigma was floored or eta clamped.
struct MarginalEstimate {
  MarginalParams params;
  bool degenerate = false;
};

/// Maximum-likelihood fit of one column. Gaussian uses the sample mean and the
/// n-1 standard deviation, floored at 1e-9*(1+|mu|). Bernoulli uses the sample
/// proportion of ones, clamped to [1/(n+1), 1 - 1/(n+1)].
MarginalEstimate estimate_marginal_params(std::span<const double> column, VariableKind kind);

/// Raw (unclamped) probability that a {0,1} column takes the value `psi`.
double bernoulli_marginal(std::span<const double> column, int psi);

/// Conditional and joint probabilities of a pair of {0,1} columns.
struct PairProbabilities {
  double sigma1 = 0.0;  // P(a=1 | b=1)
  double sigma0 = 0.0;  // P(a=1 | b=0)
  std::array<std::array<double, 2>, 2> joint{};  // joint[a][b]
};

PairProbabilities pair_probabilities(std::span<const double> col_a, std::span<const double> col_b);

/// P(a = psi_a, b = psi_b) through the conditional factorization
/// P(b=psi_b) * {1 - psi_a + (2 psi_a - 1)[psi_b s1 + (1 - psi_b) s0]}.
/// Falls back to the co-occurrence frequency when b is constant, where the
/// conditionals are undefined.
double bernoulli_joint(std::span<const double> col_a, std::span<const double> col_b, int psi_a,
                       int psi_b);

/// Mutual information of two {0,1} columns, in nats. Never negative.
double mutual_information(std::span<const double> col_a, std::span<const double> col_b);

/// Mutual information of the mean-thresholded versions of two jointly Gaussian
/// variables with correlation `rho`. Requires |rho| < 1.
double closed_form_binarized_mi(double rho);

/// Correlation magnitude of a bivariate Gaussian whose mutual information is
/// `mi_nats`: sqrt(1 - exp(-2 mi)).
double mi_to_rho(double mi_nats);

struct WeightVector {
  std::vector<double> phi;
};

/// Pairwise mutual information over the binarized view, symmetric d x d with a
/// zero diagonal.
Eigen::MatrixXd pairwise_mutual_information(const BinarizedView& view);

/// phi[j] = 1 + mean of the MI between column j and every other column, on the
/// binarized view. `means` is indexed by column (binary entries unused).
WeightVector feature_weights(const HybridDataset& data, std::span<const double> means);

}  // namespace hvm
