#include <cmath>
#include <numbers>
#include <random>

#include "hvm/model.hpp"
#include "hvm/model_io.hpp"
#include "hvm/simgen.hpp"
#include "support.hpp"

using namespace hvm;
using hvm::test::column_matrix;
using hvm::test::specs_of;

namespace {

HvmModel one_gaussian(double delta, double mu, double sigma) {
  HvmModel m;
  m.specs = specs_of("c");
  m.marginals = {{GaussianParams{mu, sigma}, false}};
  m.weights.phi = {1.0};
  m.delta = delta;
  m.refresh_coefficients();
  return m;
}

HvmModel one_bernoulli(double delta, double eta) {
  HvmModel m;
  m.specs = specs_of("b");
  m.marginals = {{BernoulliParams{eta}, false}};
  m.weights.phi = {1.0};
  m.delta = delta;
  m.refresh_coefficients();
  return m;
}

const HvmModel& exp2_model() {
  static const HvmModel model = train(generate_block(preset_config("exp2"), Phase::Normal, 4000, 77));
  return model;
}

}  // namespace

TEST(LogScore, SingleGaussianAtMean) {
  const auto model = one_gaussian(0.01, 1.7, 1.0);
  const std::vector<double> x{1.7};
  const auto s = log_score(x, model);
  EXPECT_NEAR(s.f, -0.92898886905817418, 1e-14);
  EXPECT_NEAR(s.s, 0.86302031883398550, 1e-14);
  // Same value through the direct density evaluation.
  const double direct = std::log(0.99 * std::exp(-0.0) / std::sqrt(2 * std::numbers::pi));
  EXPECT_NEAR(s.f, direct, 1e-14);
  EXPECT_FALSE(s.clamped);
}

TEST(LogScore, SymmetricBernoulli) {
  const auto model = one_bernoulli(1e-300, 0.5);
  const std::vector<double> one{1.0}, zero{0.0};
  EXPECT_NEAR(log_score(one, model).f, -std::numbers::ln2, 1e-15);
  EXPECT_NEAR(log_score(one, model).s, std::numbers::ln2 * std::numbers::ln2, 1e-15);
  EXPECT_EQ(log_score(zero, model).s, log_score(one, model).s);
}

TEST(LogScore, ClampAtZero) {
  const auto model = one_gaussian(0.01, 0.0, 0.01);
  const std::vector<double> x{0.0};
  const auto s = log_score(x, model);
  EXPECT_GT(s.f_raw, 0.0);
  EXPECT_EQ(s.f, 0.0);
  EXPECT_EQ(s.s, 0.0);
  EXPECT_TRUE(s.clamped);
}

TEST(LogScore, DecompositionAndDirectRouteAgree) {
  const auto& model = exp2_model();
  const auto data = generate_block(preset_config("exp2"), Phase::Faulty, 500, 5);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    std::vector<double> x(data.cols());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = data(i, j);
    const auto s = log_score(x, model);
    EXPECT_NEAR(s.f_raw, s.binary_dot + model.xi + s.epsilon, 1e-10);
    EXPECT_NEAR(s.f_raw, std::log(model.delta_tilde()) + log_occurrence_probability(x, model),
                1e-10 * (1 + std::abs(s.f_raw)));
    EXPECT_NEAR(s.f, std::min(s.f_raw, 0.0), 0.0);
    EXPECT_NEAR(s.s, s.f * s.f, 1e-12 * (1 + s.s));
    EXPECT_GE(s.s, 0.0);
  }
}

TEST(LogScore, StatisticGrowsAwayFromMean) {
  const auto model = one_gaussian(0.01, 0.0, 1.0);
  double prev = -1.0;
  for (double x = 0.0; x < 10.0; x += 0.25) {
    const std::vector<double> v{x};
    const double s = log_score(v, model).s;
    EXPECT_GT(s, prev);
    prev = s;
  }
}

TEST(LogScore, SpecMismatch) {
  const auto& model = exp2_model();
  std::vector<double> short_sample(3, 0.0);
  EXPECT_HVM_ERROR(log_score(short_sample, model), ErrorKind::SpecMismatch);
  std::vector<double> bad(10, 0.0);
  bad[7] = 0.5;
  EXPECT_HVM_ERROR(log_score(bad, model), ErrorKind::SpecMismatch);
}

TEST(Classify, TieIsFaulty) {
  EXPECT_EQ(classify(0.5, 1.0).state, MonitorState::Normal);
  EXPECT_EQ(classify(1.0, 1.0).state, MonitorState::Faulty);
  EXPECT_EQ(classify(2.0, 1.0).state, MonitorState::Faulty);
}

TEST(Detectability, ZeroLimit) {
  // s_lim = 0 leaves delta_tilde * P(x) < 1, which every Bernoulli sample meets.
  auto model = one_bernoulli(0.01, 0.3);
  model.s_lim = 0.0;
  EXPECT_TRUE(detectability_condition(std::vector<double>{1.0}, model));
  EXPECT_TRUE(detectability_condition(std::vector<double>{0.0}, model));
}

TEST(Detectability, StrictAtBoundary) {
  // delta_tilde rounds to 1, so the boundary is ln P = -sqrt(s_lim) exactly.
  auto model = one_bernoulli(1e-300, 0.5);
  const std::vector<double> x{1.0};
  const double log_p = log_occurrence_probability(x, model);
  model.s_lim = log_p * log_p;
  ASSERT_EQ(std::sqrt(model.s_lim), -log_p);
  EXPECT_FALSE(detectability_condition(x, model));
  model.s_lim *= 0.999;
  EXPECT_TRUE(detectability_condition(x, model));
}

TEST(Detectability, AgreesWithClassifyAwayFromClampAndTies) {
  const auto& model = exp2_model();
  const auto data = generate_block(preset_config("exp2"), Phase::Faulty, 2000, 31);
  int compared = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    std::vector<double> x(data.cols());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = data(i, j);
    const auto s = log_score(x, model);
    if (s.clamped || s.s == model.s_lim) continue;
    EXPECT_EQ(detectability_condition(x, model), classify(s.s, model.s_lim).state == MonitorState::Faulty);
    ++compared;
  }
  EXPECT_GT(compared, 1900);
}

TEST(Train, TrainingExceedanceNearDelta) {
  const auto& model = exp2_model();
  const auto data = generate_block(preset_config("exp2"), Phase::Normal, 4000, 77);
  const auto report = monitor(data, model);
  EXPECT_LE(report.faulty_fraction(), 0.015);
  EXPECT_GT(model.s_lim, 0.0);
  EXPECT_EQ(model.n_train, 4000u);
  EXPECT_EQ(model.tau.size(), 5u);
}

TEST(Train, ConstantBinaryColumnIsClampedWithWarning) {
  const auto data = validate_dataset(specs_of("cb"), column_matrix({{0.1, 0.7, -0.4, 1.3, 0.2}, {0, 0, 0, 0, 0}}));
  const auto model = train(data);
  EXPECT_DOUBLE_EQ(std::get<BernoulliParams>(model.marginals[1].params).eta, 1.0 / 6.0);
  const auto warnings = model.warnings();
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("'v2'"), std::string::npos) << warnings[0];
}

TEST(Train, InvalidDelta) {
  const auto data = validate_dataset(specs_of("c"), column_matrix({{0.1, 0.7, -0.4}}));
  EXPECT_HVM_ERROR(train(data, 0.0), ErrorKind::InvalidDelta);
  EXPECT_HVM_ERROR(train(data, 1.0), ErrorKind::InvalidDelta);
}

TEST(Train, DefaultDeltaIsOnePercent) {
  EXPECT_EQ(kDefaultDelta, 0.01);
  EXPECT_EQ(exp2_model().delta, 0.01);
}

TEST(Monitor, EmptyInputGivesEmptyReport) {
  const auto report = monitor(Eigen::MatrixXd(0, 10), exp2_model());
  EXPECT_EQ(report.size(), 0u);
  EXPECT_EQ(report.faulty_fraction(), 0.0);
}

TEST(Monitor, VerdictsFollowLimit) {
  const auto& model = exp2_model();
  const auto data = generate_block(preset_config("exp2"), Phase::Faulty, 300, 2);
  const auto report = monitor(data, model);
  std::size_t faulty = 0;
  for (const auto& v : report.verdicts) {
    EXPECT_EQ(v.limit, model.s_lim);
    EXPECT_EQ(v.state == MonitorState::Normal, v.statistic < v.limit);
    faulty += v.state == MonitorState::Faulty;
  }
  EXPECT_EQ(faulty, report.faulty);
}

TEST(Monitor, RejectsMismatchedVariables) {
  const auto other = generate_block(preset_config("exp2"), Phase::Normal, 10, 2);
  auto specs = other.specs();
  specs[0].name = "renamed";
  const HybridDataset renamed(specs, other.values());
  EXPECT_HVM_ERROR(monitor(renamed, exp2_model()), ErrorKind::SpecMismatch);
}

TEST(ModelIo, RoundTripIsBitExact) {
  const auto& model = exp2_model();
  const auto text = model_to_json(model);
  const auto back = model_from_json(text);
  EXPECT_EQ(model_to_json(back), text);
  EXPECT_EQ(back.s_lim, model.s_lim);
  EXPECT_EQ(back.xi, model.xi);
  EXPECT_EQ(back.tau, model.tau);
  EXPECT_EQ(back.weights.phi, model.weights.phi);
  EXPECT_EQ(back.specs, model.specs);
  const auto data = generate_block(preset_config("exp2"), Phase::Faulty, 50, 3);
  const auto a = monitor(data, model), b = monitor(data, back);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.verdicts[i].statistic, b.verdicts[i].statistic);
}

TEST(ModelIo, RejectsTamperedCoefficients) {
  auto text = model_to_json(exp2_model());
  const auto pos = text.find("\"xi\": ");
  ASSERT_NE(pos, std::string::npos);
  text.insert(pos + 6, "1");
  EXPECT_HVM_ERROR(model_from_json(text), ErrorKind::MalformedInput);
}

TEST(ModelIo, RejectsGarbage) {
  EXPECT_HVM_ERROR(model_from_json("{not json"), ErrorKind::MalformedInput);
  EXPECT_HVM_ERROR(model_from_json("{\"format\": \"other\"}"), ErrorKind::MalformedInput);
}
