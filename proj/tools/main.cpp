#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace hvm::cli;

namespace {

int report(const CommandOutcome& outcome) {
  auto& stream = outcome.exit_code == kExitInputError ? std::cerr : std::cout;
  if (!outcome.human_summary.empty()) stream << outcome.human_summary << '\n';
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid-variable process monitor"};
  app.set_version_flag("--version", std::string(HVM_VERSION_STRING));
  app.require_subcommand(1);

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Fit a model on healthy-state data");
  train_cmd->add_option("data", train.data, "Training CSV")->required();
  train_cmd->add_option("-o,--model-out", train.model_out, "Model output path");
  train_cmd->add_option("--delta", train.delta, "Significance level");
  train_cmd->add_flag("--strict", train.strict, "Exit 3 when parameters had to be floored or clamped");

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Score samples against a trained model");
  score_cmd->add_option("data", score.data, "CSV to score")->required();
  score_cmd->add_option("-m,--model", score.model, "Model file")->required();
  score_cmd->add_option("-o,--report-out", score.report_out, "Per-sample report path");
  score_cmd->add_option("--fault-start", score.fault_start, "1-based index of the first faulty sample");

  InjectOptions inject;
  auto* inject_cmd = app.add_subcommand("inject", "Apply a fault listing to a dataset");
  inject_cmd->add_option("data", inject.data, "Input CSV")->required();
  inject_cmd->add_option("-f,--faults", inject.faults, "Fault listing (row,column,magnitude)")->required();
  inject_cmd->add_option("-o,--out", inject.out, "Output CSV")->required();

  SimulateOptions simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
  simulate_cmd->add_option("experiment", simulate.experiment, "exp1, exp2 or a JSON config path");
  simulate_cmd->add_option("--repeats", simulate.repeats, "Number of repeats");
  simulate_cmd->add_option("--seed", simulate.seed, "Master seed");
  simulate_cmd->add_option("--delta", simulate.delta, "Significance level");
  simulate_cmd->add_option("--baselines", simulate.baselines, "e.g. pca:0.80,dpca:0.80:lag2,md or none");
  simulate_cmd->add_option("-o,--out-dir", simulate.out_dir, "Output directory");
  simulate_cmd->add_option("-j,--jobs", simulate.jobs, "Worker threads")->check(CLI::PositiveNumber);

  GenerateOptions generate;
  auto* generate_cmd = app.add_subcommand("generate", "Write the train/test data of one repeat");
  generate_cmd->add_option("experiment", generate.experiment, "exp1, exp2 or a JSON config path");
  generate_cmd->add_option("--seed", generate.seed, "Master seed");
  generate_cmd->add_option("-o,--out-dir", generate.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  if (*train_cmd) return report(cmd_train(train));
  if (*score_cmd) return report(cmd_score(score));
  if (*inject_cmd) return report(cmd_inject(inject));
  if (*simulate_cmd) return report(cmd_simulate(simulate));
  return report(cmd_generate(generate));
}
