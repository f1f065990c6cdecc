#include "hvm/baselines.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hvm/error.hpp"
#include "hvm/kde.hpp"

namespace hvm {

namespace {

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& centered) {
  return (centered.transpose() * centered) / static_cast<double>(centered.rows() - 1);
}

// Adds a 1e-8*trace/d ridge when the smallest eigenvalue is negligible.
bool regularize(Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double largest = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() > 1e-10 * largest && largest > 0.0) return false;
  const double d = static_cast<double>(cov.rows());
  const double trace = cov.trace();
  const double ridge = trace > 0.0 ? 1e-8 * trace / d : 1e-8;
  cov.diagonal().array() += ridge;
  return true;
}

std::vector<double> score_rows(const Eigen::MatrixXd& x, auto&& fn) {
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  Eigen::VectorXd row(x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    row = x.row(i).transpose();
    out[static_cast<std::size_t>(i)] = fn(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
  }
  return out;
}

}  // namespace

PcaModel pca_fit(const Eigen::MatrixXd& data, double cpv) {
  if (data.rows() < 2) throw HvmError(ErrorKind::TooFewRows, "PCA needs at least 2 rows");
  if (data.cols() < 1) throw HvmError(ErrorKind::EmptyInput, "PCA needs at least one column");
  if (!(cpv > 0.0 && cpv < 1.0)) throw HvmError(ErrorKind::InvalidConfig, "CPV must lie in (0, 1)");

  PcaModel model;
  model.cpv = cpv;
  model.mean = data.colwise().mean().transpose();
  Eigen::MatrixXd centered = data.rowwise() - model.mean.transpose();
  model.scale = (centered.colwise().squaredNorm() / static_cast<double>(data.rows() - 1))
                    .array()
                    .sqrt()
                    .transpose();
  for (Eigen::Index j = 0; j < model.scale.size(); ++j) {
    if (!(model.scale(j) > 0.0)) {
      model.scale(j) = 1.0;
      model.degenerate = true;
    }
  }
  const Eigen::MatrixXd z = centered.array().rowwise() / model.scale.transpose().array();
  Eigen::MatrixXd cov = sample_covariance(z);
  model.degenerate = regularize(cov) || model.degenerate;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const auto d = cov.rows();
  model.spectrum = es.eigenvalues().reverse();
  const Eigen::MatrixXd vectors = es.eigenvectors().rowwise().reverse();

  const double total = model.spectrum.sum();
  double cumulative = 0.0;
  model.k = static_cast<std::size_t>(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    cumulative += model.spectrum(i);
    if (cumulative / total >= cpv - 1e-12) {
      model.k = static_cast<std::size_t>(i + 1);
      break;
    }
  }
  const auto k = static_cast<Eigen::Index>(model.k);
  model.loadings = vectors.leftCols(k);
  model.eigenvalues = model.spectrum.head(k);
  return model;
}

PcaStatistics pca_score(std::span<const double> sample, const PcaModel& model) {
  if (static_cast<Eigen::Index>(sample.size()) != model.mean.size()) {
    throw HvmError(ErrorKind::SpecMismatch, "sample width does not match the PCA model");
  }
  const Eigen::Map<const Eigen::VectorXd> x(sample.data(), static_cast<Eigen::Index>(sample.size()));
  const Eigen::VectorXd z = (x - model.mean).cwiseQuotient(model.scale);
  const Eigen::VectorXd t = model.loadings.transpose() * z;
  PcaStatistics out;
  out.t2 = (t.array().square() / model.eigenvalues.array()).sum();
  out.q = (z - model.loadings * t).squaredNorm();
  return out;
}

Eigen::MatrixXd dpca_augment(const Eigen::MatrixXd& data, std::size_t lag) {
  if (lag < 1) throw HvmError(ErrorKind::InvalidConfig, "DPCA lag must be >= 1");
  const auto l = static_cast<Eigen::Index>(lag);
  if (data.rows() <= l) {
    throw HvmError(ErrorKind::TooShort, "need more than " + std::to_string(lag) + " rows for lag " +
                                            std::to_string(lag));
  }
  const auto n = data.rows() - l;
  const auto d = data.cols();
  Eigen::MatrixXd out(n, d * (l + 1));
  for (Eigen::Index shift = 0; shift <= l; ++shift) {
    out.middleCols(shift * d, d) = data.middleRows(l - shift, n);
  }
  return out;
}

MdModel md_fit(const Eigen::MatrixXd& data) {
  if (data.rows() < 2) throw HvmError(ErrorKind::TooFewRows, "MD needs at least 2 rows");
  MdModel model;
  model.mean = data.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.rowwise() - model.mean.transpose();
  Eigen::MatrixXd cov = sample_covariance(centered);
  model.ridged = regularize(cov);
  model.inverse_covariance = cov.ldlt().solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
  model.inverse_covariance = 0.5 * (model.inverse_covariance + model.inverse_covariance.transpose());
  return model;
}

double md_score(std::span<const double> sample, const MdModel& model) {
  if (static_cast<Eigen::Index>(sample.size()) != model.mean.size()) {
    throw HvmError(ErrorKind::SpecMismatch, "sample width does not match the MD model");
  }
  const Eigen::Map<const Eigen::VectorXd> x(sample.data(), static_cast<Eigen::Index>(sample.size()));
  const Eigen::VectorXd diff = x - model.mean;
  return diff.dot(model.inverse_covariance * diff);
}

std::string BaselineSpec::label() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Pca: os << "pca:" << cpv; break;
    case Kind::Dpca: os << "dpca:" << cpv << ":lag" << lag; break;
    case Kind::Md: os << "md"; break;
  }
  return os.str();
}

BaselineSpec parse_baseline(std::string_view token) {
  const auto fail = [&] {
    return HvmError(ErrorKind::InvalidConfig, "cannot parse baseline '" + std::string(token) + "'");
  };
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto colon = token.find(':', pos);
    parts.push_back(token.substr(pos, colon == token.npos ? token.npos : colon - pos));
    if (colon == token.npos) break;
    pos = colon + 1;
  }
  const auto parse_cpv = [&](std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !(v > 0.0 && v < 1.0)) throw fail();
    return v;
  };
  BaselineSpec spec;
  if (parts[0] == "md" && parts.size() == 1) {
    spec.kind = BaselineSpec::Kind::Md;
  } else if (parts[0] == "pca" && parts.size() <= 2) {
    spec.kind = BaselineSpec::Kind::Pca;
    if (parts.size() == 2) spec.cpv = parse_cpv(parts[1]);
  } else if (parts[0] == "dpca" && parts.size() <= 3) {
    spec.kind = BaselineSpec::Kind::Dpca;
    if (parts.size() >= 2) spec.cpv = parse_cpv(parts[1]);
    if (parts.size() == 3) {
      auto s = parts[2];
      if (s.starts_with("lag")) s.remove_prefix(3);
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), spec.lag);
      if (ec != std::errc() || ptr != s.data() + s.size() || spec.lag < 1) throw fail();
    }
  } else {
    throw fail();
  }
  return spec;
}

std::vector<BaselineSpec> parse_baseline_list(std::string_view text) {
  std::vector<BaselineSpec> out;
  if (text.empty() || text == "none") return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    auto token = text.substr(pos, comma == text.npos ? text.npos : comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) out.push_back(parse_baseline(token));
    if (comma == text.npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<BaselineSpec> default_baselines() {
  return {{BaselineSpec::Kind::Pca, 0.8, 2},
          {BaselineSpec::Kind::Dpca, 0.8, 2},
          {BaselineSpec::Kind::Md, 0.8, 2}};
}

std::vector<StatisticSeries> run_baseline(const BaselineSpec& spec, const Eigen::MatrixXd& train,
                                          const Eigen::MatrixXd& test, double delta) {
  const auto limit_of = [delta](const std::vector<double>& stats) {
    return kde_control_limit(stats, delta).limit;
  };

  switch (spec.kind) {
    case BaselineSpec::Kind::Md: {
      const auto model = md_fit(train);
      const auto score = [&](std::span<const double> x) { return md_score(x, model); };
      return {{"MD", "D", score_rows(test, score), limit_of(score_rows(train, score))}};
    }
    case BaselineSpec::Kind::Pca:
    case BaselineSpec::Kind::Dpca: {
      const bool dynamic = spec.kind == BaselineSpec::Kind::Dpca;
      Eigen::MatrixXd fit_data = train;
      Eigen::MatrixXd eval_data = test;
      if (dynamic) {
        const auto l = static_cast<Eigen::Index>(spec.lag);
        if (train.rows() < l) throw HvmError(ErrorKind::TooShort, "training data shorter than lag");
        Eigen::MatrixXd history(l + test.rows(), test.cols());
        history << train.bottomRows(l), test;
        fit_data = dpca_augment(train, spec.lag);
        eval_data = dpca_augment(history, spec.lag);
      }
      const auto model = pca_fit(fit_data, spec.cpv);
      const auto t2 = [&](std::span<const double> x) { return pca_score(x, model).t2; };
      const auto q = [&](std::span<const double> x) { return pca_score(x, model).q; };
      const std::string method = dynamic ? "DPCA" : "PCA";
      return {{method, "T2", score_rows(eval_data, t2), limit_of(score_rows(fit_data, t2))},
              {method, "Q", score_rows(eval_data, q), limit_of(score_rows(fit_data, q))}};
    }
  }
  return {};
}

}  // namespace hvm
