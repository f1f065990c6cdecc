#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace hvm {

/// PCA monitor over z-scored continuous data.
struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;        // per-column standard deviation (1 for constant columns)
  Eigen::MatrixXd loadings;     // d x k, orthonormal columns
  Eigen::VectorXd eigenvalues;  // retained, descending
  Eigen::VectorXd spectrum;     // all eigenvalues, descending
  std::size_t k = 0;
  double cpv = 0.8;
  bool degenerate = false;      // constant column or ridge applied
};

struct PcaStatistics {
  double t2 = 0.0;
  double q = 0.0;
};

/// Fits PCA and keeps the smallest k whose cumulative eigenvalue share reaches
/// `cpv`. Near-singular covariance gets a 1e-8*trace/d ridge.
PcaModel pca_fit(const Eigen::MatrixXd& data, double cpv);
PcaStatistics pca_score(std::span<const double> sample, const PcaModel& model);

/// Time-lagged augmentation: row t becomes [x_t, x_{t-1}, ..., x_{t-lag}], so
/// the output has n - lag rows and d*(lag+1) columns.
Eigen::MatrixXd dpca_augment(const Eigen::MatrixXd& data, std::size_t lag);

/// Mahalanobis-distance monitor.
struct MdModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd inverse_covariance;
  bool ridged = false;
};

MdModel md_fit(const Eigen::MatrixXd& data);
/// (x - mu)^T Sigma^-1 (x - mu).
double md_score(std::span<const double> sample, const MdModel& model);

/// One enabled comparison method, as written in `pca:0.80`, `dpca:0.80:lag2`
/// or `md`.
struct BaselineSpec {
  enum class Kind { Pca, Dpca, Md };
  Kind kind = Kind::Pca;
  double cpv = 0.8;
  std::size_t lag = 2;

  std::string label() const;
  bool operator==(const BaselineSpec&) const = default;
};

BaselineSpec parse_baseline(std::string_view token);
/// Comma-separated list; `none` or an empty string gives no baselines.
std::vector<BaselineSpec> parse_baseline_list(std::string_view text);
std::vector<BaselineSpec> default_baselines();

/// Statistic trace of one method over a test sequence, with its KDE limit.
struct StatisticSeries {
  std::string method;
  std::string statistic;
  std::vector<double> values;
  double limit = 0.0;
};

/// Fits the baseline on `train` (continuous columns only) with KDE limits at
/// `delta`, then scores `test`. DPCA borrows the last `lag` training rows as
/// history for the first test rows.
std::vector<StatisticSeries> run_baseline(const BaselineSpec& spec, const Eigen::MatrixXd& train,
                                          const Eigen::MatrixXd& test, double delta);

}  // namespace hvm
