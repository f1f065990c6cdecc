#include "commands.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include "hvm/csv_io.hpp"
#include "hvm/error.hpp"
#include "hvm/fault.hpp"
#include "hvm/model.hpp"
#include "hvm/model_io.hpp"
#include "hvm/random.hpp"
#include "hvm/simgen.hpp"

namespace hvm::cli {

namespace {

CommandOutcome input_error(const HvmError& e) {
  CommandOutcome out;
  out.exit_code = kExitInputError;
  out.human_summary = "error (" + std::string(to_string(e.kind())) + "): " + e.what();
  return out;
}

std::string join_cells(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (j) line += ',';
    line += cells[j];
  }
  return line;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw HvmError(ErrorKind::Io, "cannot create directory '" + dir.string() + "'");
}

ExperimentConfig resolve_experiment(const std::string& id) {
  if (is_preset(id)) return preset_config(id);
  return config_from_json(read_file(id));
}

}  // namespace

CommandOutcome cmd_train(const TrainOptions& opts) {
  try {
    const auto data = validate_dataset(read_csv(opts.data));
    const auto model = train(data, opts.delta);
    const auto report = monitor(data, model);
    save_model(model, opts.model_out);

    CommandOutcome out;
    out.artifacts_written.push_back(opts.model_out);
    std::ostringstream os;
    os << "trained on " << data.rows() << " samples\n"
       << "d_c = " << data.continuous_count() << '\n'
       << "d_b = " << data.binary_count() << '\n'
       << "delta = " << format_double(model.delta) << '\n'
       << "s_lim = " << format_double(model.s_lim) << '\n'
       << "training exceedance = " << format_double(report.faulty_fraction()) << '\n'
       << "model written to " << opts.model_out.string();
    const auto warnings = model.warnings();
    for (const auto& w : warnings) os << "\nwarning: " << w;
    if (opts.strict && !warnings.empty()) out.exit_code = kExitWarning;
    out.human_summary = os.str();
    return out;
  } catch (const HvmError& e) {
    return input_error(e);
  }
}

CommandOutcome cmd_score(const ScoreOptions& opts) {
  try {
    const std::string model_text = read_file(opts.model);
    const auto model = model_from_json(model_text);
    const std::string data_text = read_file(opts.data);
    const auto raw = parse_csv(data_text);
    const auto specs = parse_raw_specs(raw);
    if (specs.size() != model.specs.size()) {
      throw HvmError(ErrorKind::SpecMismatch,
                     "data has " + std::to_string(specs.size()) + " columns, model expects " +
                         std::to_string(model.specs.size()));
    }
    for (std::size_t j = 0; j < specs.size(); ++j) {
      if (specs[j].name != model.specs[j].name || specs[j].kind != model.specs[j].kind) {
        throw HvmError(ErrorKind::SpecMismatch,
                       "column " + std::to_string(j) + ": data has '" + specs[j].name + "' (" +
                           kind_token(specs[j].kind) + "), model expects '" + model.specs[j].name +
                           "' (" + kind_token(model.specs[j].kind) + ")");
      }
    }
    const auto values = parse_raw_values(raw, specs);
    if (values.rows() == 0) throw HvmError(ErrorKind::EmptyInput, "no data rows to score");
    const auto report = monitor(values, model);

    std::optional<Metrics> metrics;
    if (opts.fault_start) metrics = far_fdr(report.verdicts, *opts.fault_start);

    std::ostringstream csv;
    csv << "# hvm " << HVM_VERSION_STRING << " seed=none model=" << content_hash(model_text)
        << " data=" << content_hash(data_text) << '\n'
        << "index,statistic,limit,verdict\n";
    for (std::size_t i = 0; i < report.size(); ++i) {
      const auto& v = report.verdicts[i];
      csv << (i + 1) << ',' << format_double(v.statistic) << ',' << format_double(v.limit) << ','
          << (v.state == MonitorState::Faulty ? "faulty" : "normal") << '\n';
    }
    write_file(opts.report_out, csv.str());

    CommandOutcome out;
    out.artifacts_written.push_back(opts.report_out);
    std::ostringstream os;
    os << "samples = " << report.size() << '\n'
       << "s_lim = " << format_double(model.s_lim) << '\n'
       << "faulty = " << report.faulty << '\n'
       << "faulty fraction = " << format_double(report.faulty_fraction()) << '\n';
    if (metrics) {
      os << "FAR = " << format_double(metrics->far) << '\n'
         << "FDR = " << format_double(metrics->fdr) << '\n';
    }
    os << "report written to " << opts.report_out.string();
    out.human_summary = os.str();
    return out;
  } catch (const HvmError& e) {
    return input_error(e);
  }
}

CommandOutcome cmd_inject(const InjectOptions& opts) {
  try {
    auto raw = read_csv(opts.data);
    const auto data = validate_dataset(raw);
    const auto spec = load_fault_triples(opts.faults, data);
    const auto faulty = inject_faults(data, spec);

    std::size_t changed = 0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      bool row_changed = false;
      for (std::size_t j = 0; j < data.cols(); ++j) {
        if (faulty(i, j) != data(i, j)) {
          raw.cells[i][j] = format_double(faulty(i, j));
          row_changed = true;
          ++changed;
        }
      }
      if (row_changed) raw.lines[raw.data_line[i]] = join_cells(raw.cells[i]);
    }
    write_file(opts.out, render_raw_table(raw));

    CommandOutcome out;
    out.artifacts_written.push_back(opts.out);
    out.human_summary = std::to_string(changed) + " cell(s) modified; written to " + opts.out.string();
    return out;
  } catch (const HvmError& e) {
    return input_error(e);
  }
}

CommandOutcome cmd_simulate(const SimulateOptions& opts) {
  try {
    auto config = resolve_experiment(opts.experiment);
    if (opts.repeats) config.repeats = *opts.repeats;
    if (opts.delta) config.delta = *opts.delta;
    if (opts.baselines) config.baselines = parse_baseline_list(*opts.baselines);
    const bool recorded = !opts.seed.has_value();
    config.seed = opts.seed ? *opts.seed : fresh_seed();
    validate_config(config);

    ensure_dir(opts.out_dir);
    const auto result = run_experiment(config, opts.jobs);
    const auto summary_path = opts.out_dir / "summary.csv";
    const auto repeats_path = opts.out_dir / "per_repeat.csv";
    write_file(summary_path, summary_csv(result));
    write_file(repeats_path, per_repeat_csv(result));

    CommandOutcome out;
    out.artifacts_written = {summary_path, repeats_path};
    std::ostringstream os;
    os << "experiment = " << config.name << '\n'
       << "seed = " << config.seed << (recorded ? " (random)" : "") << '\n'
       << "repeats = " << config.repeats << '\n'
       << "config = " << config_hash(config) << '\n';
    for (const auto& m : result.summary) {
      os << m.method << ' ' << m.statistic << ": FAR = " << format_double(m.mean_far)
         << ", FDR = " << format_double(m.mean_fdr) << '\n';
    }
    os << "written " << summary_path.string() << ", " << repeats_path.string();
    out.human_summary = os.str();
    return out;
  } catch (const HvmError& e) {
    return input_error(e);
  }
}

CommandOutcome cmd_generate(const GenerateOptions& opts) {
  try {
    auto config = resolve_experiment(opts.experiment);
    const bool recorded = !opts.seed.has_value();
    config.seed = opts.seed ? *opts.seed : fresh_seed();
    validate_config(config);

    ensure_dir(opts.out_dir);
    const auto data = draw_repeat_data(config, 0);
    std::ostringstream comment;
    comment << "hvm " << HVM_VERSION_STRING << " experiment=" << config.name
            << " seed=" << config.seed << " config=" << config_hash(config);
    const auto train_path = opts.out_dir / "train.csv";
    const auto test_path = opts.out_dir / "test.csv";
    std::ostringstream train_csv, test_csv;
    write_dataset_csv(train_csv, data.train, comment.str() + " block=train");
    write_dataset_csv(test_csv, data.test,
                      comment.str() + " block=test fault_start=" + std::to_string(config.fault_start));
    write_file(train_path, train_csv.str());
    write_file(test_path, test_csv.str());

    CommandOutcome out;
    out.artifacts_written = {train_path, test_path};
    std::ostringstream os;
    os << "seed = " << config.seed << (recorded ? " (random)" : "") << '\n'
       << "train: " << data.train.rows() << " samples -> " << train_path.string() << '\n'
       << "test: " << data.test.rows() << " samples (fault from " << config.fault_start << ") -> "
       << test_path.string();
    out.human_summary = os.str();
    return out;
  } catch (const HvmError& e) {
    return input_error(e);
  }
}

}  // namespace hvm::cli
