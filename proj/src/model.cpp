#include "hvm/model.hpp"

#include <cmath>
#include <numbers>

#include "hvm/error.hpp"
#include "hvm/kde.hpp"

namespace hvm {

namespace {

const double kLogInvSqrt2Pi = -0.5 * std::log(2.0 * std::numbers::pi);

void check_sample(std::span<const double> sample, const HvmModel& model) {
  if (sample.size() != model.dims()) {
    throw HvmError(ErrorKind::SpecMismatch, "sample has " + std::to_string(sample.size()) +
                                                " values, model expects " +
                                                std::to_string(model.dims()));
  }
  for (std::size_t j = 0; j < sample.size(); ++j) {
    const double v = sample[j];
    if (!std::isfinite(v)) {
      throw HvmError(ErrorKind::SpecMismatch,
                     "non-finite value in column '" + model.specs[j].name + "'");
    }
    if (model.specs[j].kind == VariableKind::Binary && v != 0.0 && v != 1.0) {
      throw HvmError(ErrorKind::SpecMismatch,
                     "non-binary value in binary column '" + model.specs[j].name + "'");
    }
  }
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw HvmError(ErrorKind::InvalidDelta, "significance level must lie in (0, 1)");
  }
}

}  // namespace

std::vector<std::size_t> HvmModel::binary_indices() const {
  std::vector<std::size_t> out;
  for (const auto& s : specs) {
    if (s.kind == VariableKind::Binary) out.push_back(s.index);
  }
  return out;
}

std::vector<std::size_t> HvmModel::continuous_indices() const {
  std::vector<std::size_t> out;
  for (const auto& s : specs) {
    if (s.kind == VariableKind::Continuous) out.push_back(s.index);
  }
  return out;
}

std::vector<std::string> HvmModel::warnings() const {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < marginals.size(); ++j) {
    if (!marginals[j].degenerate) continue;
    out.push_back(specs[j].kind == VariableKind::Binary
                      ? "column '" + specs[j].name + "': response probability clamped"
                      : "column '" + specs[j].name + "': standard deviation floored");
  }
  return out;
}

void HvmModel::refresh_coefficients() {
  tau.clear();
  xi = std::log(delta_tilde());
  for (const auto j : binary_indices()) {
    const double eta = std::get<BernoulliParams>(marginals[j].params).eta;
    const double phi = weights.phi[j];
    tau.push_back(phi * std::log(eta / (1.0 - eta)));
    xi += phi * std::log(1.0 - eta);
  }
}

ScoreBreakdown log_score(std::span<const double> sample, const HvmModel& model) {
  check_sample(sample, model);
  ScoreBreakdown out;
  std::size_t b = 0;
  for (std::size_t j = 0; j < sample.size(); ++j) {
    const double phi = model.weights.phi[j];
    if (model.specs[j].kind == VariableKind::Binary) {
      out.binary_dot += model.tau[b++] * sample[j];
    } else {
      const auto& g = std::get<GaussianParams>(model.marginals[j].params);
      const double z = (sample[j] - g.mu) / g.sigma;
      out.epsilon += phi * (kLogInvSqrt2Pi - std::log(g.sigma) - 0.5 * z * z);
    }
  }
  out.f_raw = out.binary_dot + model.xi + out.epsilon;
  out.clamped = out.f_raw > 0.0;
  out.f = out.clamped ? 0.0 : out.f_raw;
  out.s = out.f * out.f;
  return out;
}

double log_occurrence_probability(std::span<const double> sample, const HvmModel& model) {
  check_sample(sample, model);
  double acc = 0.0;
  for (std::size_t j = 0; j < sample.size(); ++j) {
    const double phi = model.weights.phi[j];
    if (const auto* g = std::get_if<GaussianParams>(&model.marginals[j].params)) {
      const double dev = sample[j] - g->mu;
      acc += phi * (kLogInvSqrt2Pi - std::log(g->sigma) - dev * dev / (2.0 * g->sigma * g->sigma));
    } else {
      const double eta = std::get<BernoulliParams>(model.marginals[j].params).eta;
      acc += phi * std::log(sample[j] == 1.0 ? eta : 1.0 - eta);
    }
  }
  return acc;
}

Verdict classify(double statistic, double limit) {
  return {statistic, limit, statistic < limit ? MonitorState::Normal : MonitorState::Faulty};
}

bool detectability_condition(std::span<const double> sample, const HvmModel& model) {
  const double log_p = log_occurrence_probability(sample, model);
  return log_p < -std::log(model.delta_tilde()) - std::sqrt(model.s_lim);
}

HvmModel train(const HybridDataset& data, double delta) {
  check_delta(delta);
  HvmModel model;
  model.specs = data.specs();
  model.delta = delta;
  model.n_train = data.rows();

  // Gaussian and Bernoulli maximum-likelihood fits.
  std::vector<double> means(data.cols(), 0.0);
  model.marginals.reserve(data.cols());
  for (std::size_t j = 0; j < data.cols(); ++j) {
    model.marginals.push_back(estimate_marginal_params(data.column(j), data.spec(j).kind));
    if (const auto* g = std::get_if<GaussianParams>(&model.marginals.back().params)) {
      means[j] = g->mu;
    }
  }

  // Binarize, mutual information, weights.
  model.weights = feature_weights(data, means);
  model.refresh_coefficients();

  // Training statistics and control limit.
  std::vector<double> stats(data.rows());
  Eigen::VectorXd row(static_cast<Eigen::Index>(data.cols()));
  for (std::size_t i = 0; i < data.rows(); ++i) {
    row = data.values().row(static_cast<Eigen::Index>(i)).transpose();
    stats[i] = log_score({row.data(), data.cols()}, model).s;
  }
  const auto kde = kde_control_limit(stats, delta);
  model.s_lim = kde.limit;
  model.bandwidth = kde.bandwidth;
  return model;
}

MonitoringReport monitor(const Eigen::MatrixXd& samples, const HvmModel& model) {
  MonitoringReport report;
  const auto n = static_cast<std::size_t>(samples.rows());
  report.scores.reserve(n);
  report.verdicts.reserve(n);
  Eigen::VectorXd row(samples.cols());
  for (std::size_t i = 0; i < n; ++i) {
    row = samples.row(static_cast<Eigen::Index>(i)).transpose();
    ScoreBreakdown score;
    try {
      score = log_score({row.data(), static_cast<std::size_t>(row.size())}, model);
    } catch (const HvmError& e) {
      throw HvmError(e.kind(), "row " + std::to_string(i) + ": " + e.what());
    }
    report.verdicts.push_back(classify(score.s, model.s_lim));
    report.scores.push_back(score);
    if (report.verdicts.back().state == MonitorState::Faulty) ++report.faulty;
  }
  return report;
}

MonitoringReport monitor(const HybridDataset& data, const HvmModel& model) {
  if (data.cols() != model.dims()) {
    throw HvmError(ErrorKind::SpecMismatch, "dataset has " + std::to_string(data.cols()) +
                                                " columns, model expects " +
                                                std::to_string(model.dims()));
  }
  for (std::size_t j = 0; j < data.cols(); ++j) {
    const auto& a = data.spec(j);
    const auto& b = model.specs[j];
    if (a.name != b.name || a.kind != b.kind) {
      throw HvmError(ErrorKind::SpecMismatch, "column " + std::to_string(j) + " ('" + a.name +
                                                  "') does not match model variable '" + b.name +
                                                  "'");
    }
  }
  return monitor(data.values(), model);
}

}  // namespace hvm
