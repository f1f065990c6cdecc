#include <cmath>
#include <numbers>
#include <random>

#include "hvm/estimation.hpp"
#include "support.hpp"

using namespace hvm;
using hvm::test::column_matrix;
using hvm::test::specs_of;

namespace {

using Col = std::vector<double>;

double count_pairs(const Col& a, const Col& b, int pa, int pb) {
  int n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (a[i] == pa && b[i] == pb);
  return static_cast<double>(n) / static_cast<double>(a.size());
}

Col bits(unsigned mask, int len) {
  Col c;
  for (int i = 0; i < len; ++i) c.push_back((mask >> i) & 1u);
  return c;
}

}  // namespace

TEST(Marginal, GaussianSymmetricTriple) {
  const Col c{1, 2, 3};
  const auto est = estimate_marginal_params(c, VariableKind::Continuous);
  const auto& g = std::get<GaussianParams>(est.params);
  EXPECT_DOUBLE_EQ(g.mu, 2.0);
  EXPECT_DOUBLE_EQ(g.sigma, 1.0);
  EXPECT_FALSE(est.degenerate);
}

TEST(Marginal, BernoulliHalf) {
  const Col c{1, 1, 0, 0};
  const auto est = estimate_marginal_params(c, VariableKind::Binary);
  EXPECT_DOUBLE_EQ(std::get<BernoulliParams>(est.params).eta, 0.5);
  EXPECT_FALSE(est.degenerate);
}

TEST(Marginal, BernoulliClampedWhenConstant) {
  const Col zeros{0, 0, 0, 0};
  auto est = estimate_marginal_params(zeros, VariableKind::Binary);
  EXPECT_DOUBLE_EQ(std::get<BernoulliParams>(est.params).eta, 0.2);
  EXPECT_TRUE(est.degenerate);
  const Col ones{1, 1, 1, 1};
  est = estimate_marginal_params(ones, VariableKind::Binary);
  EXPECT_DOUBLE_EQ(std::get<BernoulliParams>(est.params).eta, 0.8);
  EXPECT_TRUE(est.degenerate);
}

TEST(Marginal, SigmaFlooredForConstantColumn) {
  const Col c{3, 3, 3};
  const auto est = estimate_marginal_params(c, VariableKind::Continuous);
  const auto& g = std::get<GaussianParams>(est.params);
  EXPECT_DOUBLE_EQ(g.mu, 3.0);
  EXPECT_DOUBLE_EQ(g.sigma, 4e-9);
  EXPECT_TRUE(est.degenerate);
}

TEST(BernoulliMarginal, Examples) {
  EXPECT_DOUBLE_EQ(bernoulli_marginal(Col{1, 0, 1, 0}, 1), 0.5);
  EXPECT_DOUBLE_EQ(bernoulli_marginal(Col{1, 1, 1, 0}, 0), 0.25);
  EXPECT_DOUBLE_EQ(bernoulli_marginal(Col{0, 0, 0}, 1), 0.0);
}

TEST(BernoulliJoint, Examples) {
  EXPECT_DOUBLE_EQ(bernoulli_joint(Col{1, 1, 0, 0}, Col{1, 0, 1, 0}, 1, 1), 0.25);
  EXPECT_DOUBLE_EQ(bernoulli_joint(Col{1, 0, 1, 0}, Col{1, 0, 1, 0}, 1, 0), 0.0);
  EXPECT_DOUBLE_EQ(bernoulli_joint(Col{1, 1, 1, 1}, Col{0, 0, 0, 0}, 1, 0), 1.0);
}

TEST(BernoulliJoint, MatchesCountingOnAllLengthFourPairs) {
  for (unsigned ma = 0; ma < 16; ++ma) {
    for (unsigned mb = 0; mb < 16; ++mb) {
      const Col a = bits(ma, 4), b = bits(mb, 4);
      for (int pa = 0; pa < 2; ++pa)
        for (int pb = 0; pb < 2; ++pb)
          EXPECT_NEAR(bernoulli_joint(a, b, pa, pb), count_pairs(a, b, pa, pb), 1e-15)
              << "a=" << ma << " b=" << mb << " psi=" << pa << pb;
    }
  }
}

TEST(PairProbabilities, InvariantsOnRandomColumns) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution ba(0.3), bb(0.6);
  for (int trial = 0; trial < 50; ++trial) {
    Col a(37), b(37);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = ba(rng);
      b[i] = trial % 2 ? bb(rng) : a[i];
    }
    const auto p = pair_probabilities(a, b);
    double sum = 0;
    for (const auto& row : p.joint)
      for (const double v : row) {
        EXPECT_GE(v, 0.0);
        sum += v;
      }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (int v = 0; v < 2; ++v) {
      EXPECT_NEAR(p.joint[v][0] + p.joint[v][1], bernoulli_marginal(a, v), 1e-12);
      EXPECT_NEAR(p.joint[0][v] + p.joint[1][v], bernoulli_marginal(b, v), 1e-12);
    }
  }
}

TEST(MutualInformation, Examples) {
  EXPECT_NEAR(mutual_information(Col{1, 0, 1, 0}, Col{0, 1, 0, 1}), std::numbers::ln2, 1e-15);
  EXPECT_NEAR(mutual_information(Col{1, 1, 0, 0}, Col{1, 0, 1, 0}), 0.0, 1e-15);
  EXPECT_NEAR(mutual_information(Col{1, 1, 1, 0}, Col{1, 1, 1, 0}), 0.56233514461880835, 1e-14);
}

TEST(MutualInformation, SymmetricNonNegativeAndBoundedByEntropy) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::bernoulli_distribution pa(0.05 + 0.9 * (trial % 10) / 10.0);
    Col a(25), b(25);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = pa(rng);
      b[i] = (trial % 3 == 0) ? 1.0 - a[i] : static_cast<double>(pa(rng));
    }
    const double m = mutual_information(a, b);
    EXPECT_GE(m, 0.0);
    EXPECT_NEAR(m, mutual_information(b, a), 1e-12);
    const double p = bernoulli_marginal(a, 1);
    const double h = (p > 0 && p < 1) ? -(p * std::log(p) + (1 - p) * std::log(1 - p)) : 0.0;
    EXPECT_LE(m, h + 1e-12);
  }
}

TEST(MutualInformation, ConstantColumnCarriesNoInformation) {
  EXPECT_NEAR(mutual_information(Col{1, 1, 1}, Col{0, 1, 0}), 0.0, 1e-15);
  EXPECT_NEAR(mutual_information(Col{0, 1, 0}, Col{0, 0, 0}), 0.0, 1e-15);
}

TEST(ClosedForm, ReferenceValues) {
  EXPECT_EQ(closed_form_binarized_mi(0.0), 0.0);
  EXPECT_NEAR(closed_form_binarized_mi(0.3), 0.018932620185306193, 1e-15);
  EXPECT_NEAR(closed_form_binarized_mi(0.6), 0.086433450763359980, 1e-15);
  EXPECT_NEAR(closed_form_binarized_mi(0.9), 0.28176228621731443, 1e-14);
  EXPECT_NEAR(closed_form_binarized_mi(1.0 - 1e-15), std::numbers::ln2, 1e-6);
}

TEST(ClosedForm, EvenAndIncreasingInMagnitude) {
  double prev = -1.0;
  for (double r = 0.0; r < 0.999; r += 0.01) {
    const double v = closed_form_binarized_mi(r);
    EXPECT_NEAR(v, closed_form_binarized_mi(-r), 1e-15);
    EXPECT_GT(v, prev);
    EXPECT_LT(v, std::numbers::ln2);
    prev = v;
  }
}

TEST(ClosedForm, DomainError) {
  EXPECT_HVM_ERROR(closed_form_binarized_mi(1.0), ErrorKind::DomainError);
  EXPECT_HVM_ERROR(closed_form_binarized_mi(-1.5), ErrorKind::DomainError);
}

TEST(MiToRho, Examples) {
  EXPECT_EQ(mi_to_rho(0.0), 0.0);
  EXPECT_NEAR(mi_to_rho(std::numbers::ln2), 0.86602540378443865, 1e-15);
  EXPECT_NEAR(mi_to_rho(50.0), 1.0, 1e-15);
  EXPECT_HVM_ERROR(mi_to_rho(-0.1), ErrorKind::DomainError);
}

TEST(MiToRho, InvertsGaussianMutualInformation) {
  for (const double r : {0.0, 0.25, -0.25, 0.5, -0.5, 0.9, -0.9, 0.999}) {
    EXPECT_NEAR(mi_to_rho(-0.5 * std::log(1 - r * r)), std::abs(r), 1e-12);
  }
}

TEST(FeatureWeights, IndependentPair) {
  const auto data = validate_dataset(specs_of("bb"), column_matrix({{1, 1, 0, 0}, {1, 0, 1, 0}}));
  const std::vector<double> means(2, 0.0);
  const auto w = feature_weights(data, means);
  EXPECT_NEAR(w.phi[0], 1.0, 1e-15);
  EXPECT_NEAR(w.phi[1], 1.0, 1e-15);
}

TEST(FeatureWeights, IdenticalPair) {
  const auto data = validate_dataset(specs_of("bb"), column_matrix({{1, 0, 1, 0}, {1, 0, 1, 0}}));
  const std::vector<double> means(2, 0.0);
  const auto w = feature_weights(data, means);
  EXPECT_NEAR(w.phi[0], 1 + std::numbers::ln2, 1e-14);
  EXPECT_NEAR(w.phi[1], 1 + std::numbers::ln2, 1e-14);
}

TEST(FeatureWeights, AveragesPairwiseValues) {
  const auto data = validate_dataset(
      specs_of("bbb"), column_matrix({{1, 1, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}}));
  const std::vector<double> means(3, 0.0);
  const auto w = feature_weights(data, means);
  EXPECT_NEAR(w.phi[0], 1 + std::numbers::ln2 / 2, 1e-14);
  EXPECT_NEAR(w.phi[1], 1 + std::numbers::ln2 / 2, 1e-14);
  EXPECT_NEAR(w.phi[2], 1.0, 1e-14);
}

TEST(FeatureWeights, ContinuousColumnsBinarizedAtMean) {
  const auto data = validate_dataset(specs_of("cb"), column_matrix({{-1.0, 3.0, -2.0, 5.0}, {0, 1, 0, 1}}));
  const std::vector<double> means{1.25, 0.0};
  const auto w = feature_weights(data, means);
  EXPECT_NEAR(w.phi[0], 1 + std::numbers::ln2, 1e-14);
}

TEST(FeatureWeights, SingleVariableHasUnitWeight) {
  const auto data = validate_dataset(specs_of("c"), column_matrix({{1.0, 2.0, 4.0}}));
  const std::vector<double> means{7.0 / 3.0};
  EXPECT_EQ(feature_weights(data, means).phi, std::vector<double>{1.0});
}

TEST(FeatureWeights, AtLeastOneAndMatrixSymmetric) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n01;
  Eigen::MatrixXd m(300, 4);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double z = n01(rng);
    m(i, 0) = z + 0.3 * n01(rng);
    m(i, 1) = -z + 0.5 * n01(rng);
    m(i, 2) = n01(rng) > 0.4;
    m(i, 3) = z > 0;
  }
  const auto data = validate_dataset(specs_of("ccbb"), m);
  const std::vector<double> means{m.col(0).mean(), m.col(1).mean(), 0, 0};
  const auto view = make_binarized_view(data, means);
  const auto mi = pairwise_mutual_information(view);
  EXPECT_TRUE(mi.isApprox(mi.transpose()));
  for (int j = 0; j < 4; ++j) EXPECT_EQ(mi(j, j), 0.0);
  for (const double phi : feature_weights(data, means).phi) EXPECT_GE(phi, 1.0);
}
