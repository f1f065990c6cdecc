#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hvm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitWarning = 3;

struct CommandOutcome {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> artifacts_written;
  std::string human_summary;
};

struct TrainOptions {
  std::filesystem::path data;
  std::filesystem::path model_out = "model.json";
  double delta = 0.01;
  bool strict = false;
};

struct ScoreOptions {
  std::filesystem::path data;
  std::filesystem::path model;
  std::filesystem::path report_out = "report.csv";
  std::optional<std::size_t> fault_start;
};

struct InjectOptions {
  std::filesystem::path data;
  std::filesystem::path faults;
  std::filesystem::path out;
};

struct SimulateOptions {
  std::string experiment = "exp2";  // preset id or path to a JSON config
  std::optional<std::size_t> repeats;
  std::optional<std::uint64_t> seed;
  std::optional<double> delta;
  std::optional<std::string> baselines;
  std::filesystem::path out_dir = ".";
  std::size_t jobs = 1;
};

struct GenerateOptions {
  std::string experiment = "exp2";
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = ".";
};

CommandOutcome cmd_train(const TrainOptions& opts);
CommandOutcome cmd_score(const ScoreOptions& opts);
CommandOutcome cmd_inject(const InjectOptions& opts);
CommandOutcome cmd_simulate(const SimulateOptions& opts);
/// Writes train.csv and test.csv for repeat 0 of an experiment, matching the
/// data `simulate` would draw for that repeat.
CommandOutcome cmd_generate(const GenerateOptions& opts);

}  // namespace hvm::cli
