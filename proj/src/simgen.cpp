#include "hvm/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hvm/csv_io.hpp"
#include "hvm/error.hpp"
#include "hvm/fault.hpp"

namespace hvm {

using nlohmann::json;

ExperimentConfig preset_config(std::string_view id) {
  ExperimentConfig c;
  c.baselines = default_baselines();
  if (id == "exp1") {
    c.name = "exp1";
    c.continuous_normal = {{1.35, 0.66}, {2.65, 0.80}, {0.86, 0.66}, {1.80, 0.90}, {0.99, 0.55}};
    c.continuous_fault = {{0.15, 0.66}, {0.05, 0.78}, {0.10, 0.60}, {0.15, 0.89}, {0.30, 0.58}};
    c.binary_normal = {{0, 5}, {0, 6}, {1, 12}, {1, 2}, {1, 8}};
    c.binary_fault = {{0, 50}, {0, 45}, {0, 38}, {0, 35}, {0, 48}};
    c.fault_mode = FaultMode::AdditiveNoise;
  } else if (id == "exp2") {
    c.name = "exp2";
    c.continuous_normal = {{1.50, 0.76}, {3.00, 0.68}, {1.70, 0.85}, {0.80, 1.01}, {0.89, 0.64}};
    c.continuous_fault = {{0.55, 0.55}, {2.55, 1.01}, {2.20, 1.00}, {1.45, 0.91}, {1.30, 0.55}};
    c.binary_normal = {{0, 10}, {0, 5}, {1, 15}, {1, 8}, {1, 10}};
    c.binary_fault = {{1, 5}, {1, 10}, {0, 10}, {0, 15}, {0, 8}};
    c.fault_mode = FaultMode::ReplaceDistribution;
  } else {
    throw HvmError(ErrorKind::InvalidConfig, "unknown experiment preset '" + std::string(id) + "'");
  }
  return c;
}

bool is_preset(std::string_view id) { return id == "exp1" || id == "exp2"; }

void validate_config(const ExperimentConfig& c) {
  const auto fail = [](const std::string& why) { return HvmError(ErrorKind::InvalidConfig, why); };
  if (c.continuous_normal.size() != c.continuous_fault.size()) {
    throw fail("continuous normal and fault lists differ in length");
  }
  if (c.binary_normal.size() != c.binary_fault.size()) {
    throw fail("binary normal and fault lists differ in length");
  }
  if (c.continuous_normal.empty() && c.binary_normal.empty()) throw fail("no variables configured");
  for (const auto* list : {&c.continuous_normal, &c.continuous_fault}) {
    for (const auto& g : *list) {
      if (!std::isfinite(g.mu) || !(g.sigma > 0.0) || !std::isfinite(g.sigma)) {
        throw fail("continuous variables need finite mu and sigma > 0");
      }
    }
  }
  for (const auto* list : {&c.binary_normal, &c.binary_fault}) {
    for (const auto& b : *list) {
      if (b.nominal != 0 && b.nominal != 1) throw fail("binary nominal value must be 0 or 1");
      if (!(b.ratio_percent >= 0.0 && b.ratio_percent <= 50.0)) {
        throw fail("jump ratio must lie in [0, 50] percent for isolated jumps");
      }
    }
  }
  if (c.n_train < 2) throw fail("n_train must be at least 2");
  if (c.fault_start < 2 || c.fault_start > c.n_test) throw fail("fault_start must lie in [2, n_test]");
  if (c.fault_start - 1 < 2 || c.n_test - (c.fault_start - 1) < 2) {
    throw fail("each test segment needs at least 2 samples");
  }
  if (c.repeats < 1) throw fail("repeats must be at least 1");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw fail("delta must lie in (0, 1)");
}

std::string config_to_json(const ExperimentConfig& c) {
  const auto gaussians = [](const std::vector<GaussianSpec>& v) {
    json a = json::array();
    for (const auto& g : v) a.push_back({{"mu", g.mu}, {"sigma", g.sigma}});
    return a;
  };
  const auto binaries = [](const std::vector<BinarySpec>& v) {
    json a = json::array();
    for (const auto& b : v) a.push_back({{"value", b.nominal}, {"ratio_percent", b.ratio_percent}});
    return a;
  };
  json baselines = json::array();
  for (const auto& b : c.baselines) baselines.push_back(b.label());
  json doc = {
      {"name", c.name},
      {"n_train", c.n_train},
      {"n_test", c.n_test},
      {"fault_start", c.fault_start},
      {"continuous_normal", gaussians(c.continuous_normal)},
      {"continuous_fault", gaussians(c.continuous_fault)},
      {"binary_normal", binaries(c.binary_normal)},
      {"binary_fault", binaries(c.binary_fault)},
      {"fault_mode", c.fault_mode == FaultMode::AdditiveNoise ? "additive_noise" : "replace_distribution"},
      {"repeats", c.repeats},
      {"seed", c.seed},
      {"delta", c.delta},
      {"baselines", baselines},
  };
  return doc.dump(2) + "\n";
}

ExperimentConfig config_from_json(std::string_view text) {
  try {
    const auto doc = json::parse(text);
    ExperimentConfig c;
    if (doc.contains("preset")) c = preset_config(doc.at("preset").get<std::string>());
    c.name = doc.value("name", c.name);
    c.n_train = doc.value("n_train", c.n_train);
    c.n_test = doc.value("n_test", c.n_test);
    c.fault_start = doc.value("fault_start", c.fault_start);
    const auto gaussians = [&](const char* key, std::vector<GaussianSpec>& out) {
      if (!doc.contains(key)) return;
      out.clear();
      for (const auto& g : doc.at(key)) out.push_back({g.at("mu").get<double>(), g.at("sigma").get<double>()});
    };
    const auto binaries = [&](const char* key, std::vector<BinarySpec>& out) {
      if (!doc.contains(key)) return;
      out.clear();
      for (const auto& b : doc.at(key)) {
        out.push_back({b.at("value").get<int>(), b.at("ratio_percent").get<double>()});
      }
    };
    gaussians("continuous_normal", c.continuous_normal);
    gaussians("continuous_fault", c.continuous_fault);
    binaries("binary_normal", c.binary_normal);
    binaries("binary_fault", c.binary_fault);
    if (doc.contains("fault_mode")) {
      const auto mode = doc.at("fault_mode").get<std::string>();
      if (mode == "additive_noise") {
        c.fault_mode = FaultMode::AdditiveNoise;
      } else if (mode == "replace_distribution") {
        c.fault_mode = FaultMode::ReplaceDistribution;
      } else {
        throw HvmError(ErrorKind::InvalidConfig, "unknown fault_mode '" + mode + "'");
      }
    }
    c.repeats = doc.value("repeats", c.repeats);
    c.seed = doc.value("seed", c.seed);
    c.delta = doc.value("delta", c.delta);
    if (doc.contains("baselines")) {
      c.baselines.clear();
      for (const auto& b : doc.at("baselines")) c.baselines.push_back(parse_baseline(b.get<std::string>()));
    }
    validate_config(c);
    return c;
  } catch (const json::exception& e) {
    throw HvmError(ErrorKind::InvalidConfig, std::string("bad experiment config: ") + e.what());
  }
}

std::string config_hash(const ExperimentConfig& config) {
  return content_hash(config_to_json(config));
}

std::vector<double> isolated_jumps(std::size_t n, int nominal, double ratio_percent, Rng& rng) {
  const double p = ratio_percent / 100.0;
  const double base = nominal;
  std::vector<double> out(n, base);
  if (n == 0 || p <= 0.0) return out;
  const double q = std::min(1.0, p / (1.0 - p));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  bool jumped = unif(rng) < p;
  if (jumped) out[0] = 1.0 - base;
  for (std::size_t i = 1; i < n; ++i) {
    if (jumped) {
      jumped = false;
      continue;
    }
    jumped = unif(rng) < q;
    if (jumped) out[i] = 1.0 - base;
  }
  return out;
}

HybridDataset generate_block(const ExperimentConfig& config, Phase phase, std::size_t n,
                             std::uint64_t seed) {
  validate_config(config);
  const std::size_t dc = config.continuous_normal.size();
  const std::size_t db = config.binary_normal.size();
  const std::size_t d = dc + db;

  std::vector<std::string> names;
  std::vector<VariableKind> kinds;
  for (std::size_t j = 0; j < d; ++j) {
    names.push_back("x" + std::to_string(j + 1));
    kinds.push_back(j < dc ? VariableKind::Continuous : VariableKind::Binary);
  }
  auto specs = make_specs(names, kinds);

  Rng rng(seed);
  const bool direct_fault = phase == Phase::Faulty && config.fault_mode == FaultMode::ReplaceDistribution;
  const auto& gauss = direct_fault ? config.continuous_fault : config.continuous_normal;
  const auto& bins = direct_fault ? config.binary_fault : config.binary_normal;

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < dc; ++j) {
    std::normal_distribution<double> dist(gauss[j].mu, gauss[j].sigma);
    for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dist(rng);
  }
  for (std::size_t b = 0; b < db; ++b) {
    const auto col = isolated_jumps(n, bins[b].nominal, bins[b].ratio_percent, rng);
    x.col(static_cast<Eigen::Index>(dc + b)) =
        Eigen::Map<const Eigen::VectorXd>(col.data(), static_cast<Eigen::Index>(n));
  }
  HybridDataset block(std::move(specs), std::move(x));
  if (phase == Phase::Normal || direct_fault) return block;

  // Additive fault: Gaussian noise on every continuous cell, flips on binary
  // cells wherever the fault jump process is active.
  FaultSpec fault = FaultSpec::none(n, d);
  for (std::size_t j = 0; j < dc; ++j) {
    std::normal_distribution<double> dist(config.continuous_fault[j].mu, config.continuous_fault[j].sigma);
    const auto col = static_cast<Eigen::Index>(j);
    fault.direction.col(col).setOnes();
    for (std::size_t i = 0; i < n; ++i) fault.magnitude(static_cast<Eigen::Index>(i), col) = dist(rng);
  }
  const auto flips = flip_magnitudes(block);
  for (std::size_t b = 0; b < db; ++b) {
    const auto col = static_cast<Eigen::Index>(dc + b);
    const auto active = isolated_jumps(n, config.binary_fault[b].nominal,
                                       config.binary_fault[b].ratio_percent, rng);
    fault.direction.col(col) =
        Eigen::Map<const Eigen::VectorXd>(active.data(), static_cast<Eigen::Index>(n));
    fault.magnitude.col(col) = flips.col(col);
  }
  return inject_faults(block, fault);
}

Metrics far_fdr(std::span<const Verdict> verdicts, std::size_t fault_start) {
  if (fault_start < 2 || fault_start > verdicts.size()) {
    throw HvmError(ErrorKind::EmptySegment, "fault_start " + std::to_string(fault_start) +
                                                " leaves an empty segment for " +
                                                std::to_string(verdicts.size()) + " verdicts");
  }
  const std::size_t split = fault_start - 1;
  std::size_t before = 0;
  std::size_t after = 0;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    if (verdicts[i].state != MonitorState::Faulty) continue;
    (i < split ? before : after) += 1;
  }
  return {static_cast<double>(before) / static_cast<double>(split),
          static_cast<double>(after) / static_cast<double>(verdicts.size() - split)};
}

const MethodSummary* ExperimentResult::find(std::string_view method, std::string_view statistic) const {
  for (const auto& s : summary) {
    if (s.method == method && (statistic.empty() || s.statistic == statistic)) return &s;
  }
  return nullptr;
}

RepeatData draw_repeat_data(const ExperimentConfig& config, std::size_t index) {
  const std::uint64_t seed = derive_seed(config.seed, index);
  const std::size_t n_normal = config.fault_start - 1;
  const std::size_t n_faulty = config.n_test - n_normal;
  auto train_block = generate_block(config, Phase::Normal, config.n_train, derive_seed(seed, 0));
  const auto normal_block = generate_block(config, Phase::Normal, n_normal, derive_seed(seed, 1));
  const auto faulty_block = generate_block(config, Phase::Faulty, n_faulty, derive_seed(seed, 2));
  Eigen::MatrixXd test(static_cast<Eigen::Index>(config.n_test), normal_block.values().cols());
  test << normal_block.values(), faulty_block.values();
  return {seed, std::move(train_block), HybridDataset(normal_block.specs(), std::move(test))};
}

RepeatResult run_repeat(const ExperimentConfig& config, std::size_t index) {
  auto data = draw_repeat_data(config, index);
  RepeatResult result;
  result.index = index;
  result.seed = data.seed;
  const auto& train_block = data.train;
  const Eigen::MatrixXd& test = data.test.values();

  const auto model = train(train_block, config.delta);
  const auto report = monitor(test, model);
  result.methods.push_back({"HVM", "s", far_fdr(report.verdicts, config.fault_start)});

  if (!config.baselines.empty() && train_block.continuous_count() > 0) {
    const Eigen::MatrixXd train_c = train_block.continuous_block();
    Eigen::MatrixXd test_c(test.rows(), train_c.cols());
    for (std::size_t k = 0; k < train_block.continuous_indices().size(); ++k) {
      test_c.col(static_cast<Eigen::Index>(k)) =
          test.col(static_cast<Eigen::Index>(train_block.continuous_indices()[k]));
    }
    for (const auto& spec : config.baselines) {
      for (const auto& series : run_baseline(spec, train_c, test_c, config.delta)) {
        std::vector<Verdict> verdicts;
        verdicts.reserve(series.values.size());
        for (const double v : series.values) verdicts.push_back(classify(v, series.limit));
        result.methods.push_back({series.method, series.statistic, far_fdr(verdicts, config.fault_start)});
      }
    }
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t jobs) {
  validate_config(config);
  ExperimentResult result;
  result.config = config;
  result.repeats.resize(config.repeats);

  jobs = std::clamp<std::size_t>(jobs, 1, config.repeats);
  if (jobs == 1) {
    for (std::size_t r = 0; r < config.repeats; ++r) result.repeats[r] = run_repeat(config, r);
  } else {
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t r = w; r < config.repeats; r += jobs) result.repeats[r] = run_repeat(config, r);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  const auto& first = result.repeats.front().methods;
  const double reps = static_cast<double>(config.repeats);
  for (std::size_t m = 0; m < first.size(); ++m) {
    MethodSummary s{first[m].method, first[m].statistic};
    for (const auto& rep : result.repeats) {
      s.mean_far += rep.methods[m].metrics.far;
      s.mean_fdr += rep.methods[m].metrics.fdr;
    }
    s.mean_far /= reps;
    s.mean_fdr /= reps;
    if (config.repeats > 1) {
      for (const auto& rep : result.repeats) {
        s.sd_far += std::pow(rep.methods[m].metrics.far - s.mean_far, 2);
        s.sd_fdr += std::pow(rep.methods[m].metrics.fdr - s.mean_fdr, 2);
      }
      s.sd_far = std::sqrt(s.sd_far / (reps - 1.0));
      s.sd_fdr = std::sqrt(s.sd_fdr / (reps - 1.0));
    }
    result.summary.push_back(s);
  }
  return result;
}

namespace {

std::string provenance(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "# hvm " << HVM_VERSION_STRING << " experiment=" << c.name << " seed=" << c.seed
     << " repeats=" << c.repeats << " config=" << config_hash(c) << '\n';
  return os.str();
}

}  // namespace

std::string summary_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << provenance(result.config);
  os << "method,statistic,mean_far,mean_fdr,sd_far,sd_fdr\n";
  for (const auto& s : result.summary) {
    os << s.method << ',' << s.statistic << ',' << format_double(s.mean_far) << ','
       << format_double(s.mean_fdr) << ',' << format_double(s.sd_far) << ',' << format_double(s.sd_fdr)
       << '\n';
  }
  return os.str();
}

std::string per_repeat_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << provenance(result.config);
  os << "repeat,seed";
  if (!result.repeats.empty()) {
    for (const auto& m : result.repeats.front().methods) {
      os << ',' << m.method << '_' << m.statistic << "_far," << m.method << '_' << m.statistic << "_fdr";
    }
  }
  os << '\n';
  for (const auto& rep : result.repeats) {
    os << rep.index << ',' << rep.seed;
    for (const auto& m : rep.methods) {
      os << ',' << format_double(m.metrics.far) << ',' << format_double(m.metrics.fdr);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace hvm
