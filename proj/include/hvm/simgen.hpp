#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hvm/baselines.hpp"
#include "hvm/dataset.hpp"
#include "hvm/model.hpp"
#include "hvm/random.hpp"

namespace hvm {

struct GaussianSpec {
  double mu = 0.0;
  double sigma = 1.0;
  bool operator==(const GaussianSpec&) const = default;
};

/// A binary variable that sits at `nominal` except for isolated one-step
/// jumps to the complement, occupying `ratio_percent` of the samples.
struct BinarySpec {
  int nominal = 0;
  double ratio_percent = 0.0;
  bool operator==(const BinarySpec&) const = default;
};

enum class FaultMode {
  AdditiveNoise,        // faulty block = normal block + Xi∘F (continuous noise, binary flips)
  ReplaceDistribution,  // faulty block drawn directly from the fault distributions
};

enum class Phase { Normal, Faulty };

struct ExperimentConfig {
  std::string name = "custom";
  std::size_t n_train = 4000;
  std::size_t n_test = 4000;
  std::size_t fault_start = 2001;  // 1-based index of the first faulty test sample
  std::vector<GaussianSpec> continuous_normal;
  std::vector<GaussianSpec> continuous_fault;
  std::vector<BinarySpec> binary_normal;
  std::vector<BinarySpec> binary_fault;
  FaultMode fault_mode = FaultMode::ReplaceDistribution;
  std::size_t repeats = 100;
  std::uint64_t seed = 0;
  double delta = kDefaultDelta;
  std::vector<BaselineSpec> baselines;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Built-in presets `exp1` and `exp2` (5 continuous + 5 binary variables).
ExperimentConfig preset_config(std::string_view id);
bool is_preset(std::string_view id);

/// Throws InvalidConfig on inconsistent sizes, sigma <= 0, ratios outside
/// [0, 50], nominal values outside {0,1}, or a fault start outside the test range.
void validate_config(const ExperimentConfig& config);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(std::string_view text);
/// FNV-1a over the canonical JSON form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Isolated-jump binary column. After a jump the next sample is forced back to
/// nominal; otherwise a jump starts with probability p/(1-p). The first sample
/// is drawn from the stationary law, so the expected jump fraction is exactly p.
std::vector<double> isolated_jumps(std::size_t n, int nominal, double ratio_percent, Rng& rng);

/// Draws n samples of one phase. Columns are named x1..xd, continuous first.
HybridDataset generate_block(const ExperimentConfig& config, Phase phase, std::size_t n,
                             std::uint64_t seed);

struct Metrics {
  double far = 0.0;
  double fdr = 0.0;
};

/// FAR over samples before `fault_start` (1-based), FDR over the rest. Throws
/// EmptySegment when either segment is empty.
Metrics far_fdr(std::span<const Verdict> verdicts, std::size_t fault_start);

struct MethodMetrics {
  std::string method;
  std::string statistic;
  Metrics metrics;
};

struct RepeatResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::vector<MethodMetrics> methods;
};

struct MethodSummary {
  std::string method;
  std::string statistic;
  double mean_far = 0.0;
  double mean_fdr = 0.0;
  double sd_far = 0.0;
  double sd_fdr = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RepeatResult> repeats;
  std::vector<MethodSummary> summary;

  const MethodSummary* find(std::string_view method, std::string_view statistic = {}) const;
};

/// Data for one repeat: a normal training block and a test block made of
/// fault_start-1 normal samples followed by faulty ones.
struct RepeatData {
  std::uint64_t seed = 0;
  HybridDataset train;
  HybridDataset test;
};

RepeatData draw_repeat_data(const ExperimentConfig& config, std::size_t index);

/// One repeat: train HVM and the enabled baselines on a normal block, then
/// score a normal block followed by a faulty block.
RepeatResult run_repeat(const ExperimentConfig& config, std::size_t index);

/// All repeats, optionally on `jobs` threads. The result depends only on the
/// config (including its seed), not on `jobs`.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t jobs = 1);

/// CSV renderings. Both start with a '# ...' provenance line.
std::string summary_csv(const ExperimentResult& result);
std::string per_repeat_csv(const ExperimentResult& result);

}  // namespace hvm
