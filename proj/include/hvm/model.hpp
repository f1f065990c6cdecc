#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hvm/dataset.hpp"
#include "hvm/estimation.hpp"

namespace hvm {

inline constexpr double kDefaultDelta = 0.01;

/// Trained hybrid-variable monitor.
///
/// `tau` holds one coefficient per binary column (in binary_indices order),
/// phi_b * ln(eta / (1 - eta)). `xi` is ln(1 - delta) + sum_b phi_b ln(1 - eta).
/// Both are derived from `marginals` and `phi`; refresh_coefficients()
/// recomputes them.
struct HvmModel {
  std::vector<VariableSpec> specs;
  std::vector<MarginalEstimate> marginals;
  WeightVector weights;
  double delta = kDefaultDelta;
  std::vector<double> tau;
  double xi = 0.0;
  double s_lim = 0.0;
  double bandwidth = 0.0;
  std::size_t n_train = 0;

  double delta_tilde() const noexcept { return 1.0 - delta; }
  std::size_t dims() const noexcept { return specs.size(); }
  std::vector<std::size_t> binary_indices() const;
  std::vector<std::size_t> continuous_indices() const;
  /// Names of columns whose parameters were floored or clamped.
  std::vector<std::string> warnings() const;

  void refresh_coefficients();
};

struct ScoreBreakdown {
  double f = 0.0;      // min(f_raw, 0)
  double f_raw = 0.0;  // binary_dot + xi + epsilon
  double epsilon = 0.0;
  double binary_dot = 0.0;
  double s = 0.0;      // f^2
  bool clamped = false;
};

enum class MonitorState { Normal, Faulty };

struct Verdict {
  double statistic = 0.0;
  double limit = 0.0;
  MonitorState state = MonitorState::Normal;
};

struct MonitoringReport {
  std::vector<ScoreBreakdown> scores;
  std::vector<Verdict> verdicts;
  std::size_t faulty = 0;

  std::size_t size() const noexcept { return verdicts.size(); }
  double faulty_fraction() const noexcept {
    return verdicts.empty() ? 0.0 : static_cast<double>(faulty) / static_cast<double>(verdicts.size());
  }
};

/// Log-space score of one sample. Throws SpecMismatch for a wrong arity or a
/// non-{0,1} value in a binary slot.
ScoreBreakdown log_score(std::span<const double> sample, const HvmModel& model);

/// Direct log occurrence probability, sum of phi-weighted log densities and
/// log masses. Independent of the tau/xi precomputation used by log_score.
double log_occurrence_probability(std::span<const double> sample, const HvmModel& model);

/// Normal iff statistic < limit; a tie is Faulty.
Verdict classify(double statistic, double limit);

/// True iff (1 - delta) * P(x; theta) < exp(-sqrt(s_lim)), evaluated in log space.
/// Away from the clamp and from ties this matches classify() on log_score().s.
bool detectability_condition(std::span<const double> sample, const HvmModel& model);

/// Off-line modelling. Throws InvalidDelta unless 0 < delta < 1.
HvmModel train(const HybridDataset& data, double delta = kDefaultDelta);

/// Scores rows of `samples` (n x d) in order. An empty matrix yields an empty
/// report. SpecMismatch messages name the offending row.
MonitoringReport monitor(const Eigen::MatrixXd& samples, const HvmModel& model);

/// As above, after checking that the dataset's variables match the model's.
MonitoringReport monitor(const HybridDataset& data, const HvmModel& model);

}  // namespace hvm
