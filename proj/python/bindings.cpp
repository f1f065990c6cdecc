#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hvm/csv_io.hpp"
#include "hvm/error.hpp"
#include "hvm/estimation.hpp"
#include "hvm/fault.hpp"
#include "hvm/kde.hpp"
#include "hvm/model.hpp"
#include "hvm/model_io.hpp"
#include "hvm/simgen.hpp"

namespace py = pybind11;
using namespace hvm;

namespace {

std::vector<double> row_of(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return {v.data(), v.data() + v.size()};
}

HybridDataset make_dataset(const std::vector<std::string>& names, const std::string& kinds,
                           const Eigen::MatrixXd& values) {
  if (kinds.size() != names.size()) {
    throw HvmError(ErrorKind::ShapeMismatch, "one kind character per name is required");
  }
  std::vector<VariableKind> k;
  for (const char c : kinds) k.push_back(parse_kind(std::string_view(&c, 1)));
  return validate_dataset(make_specs(names, k), values);
}

ExperimentConfig resolve(const std::string& experiment) {
  return is_preset(experiment) ? preset_config(experiment) : config_from_json(experiment);
}

}  // namespace

PYBIND11_MODULE(_hvm, m) {
  m.doc() = "Hybrid-variable process monitoring";
  m.attr("__version__") = HVM_VERSION_STRING;

  static py::exception<HvmError> error(m, "HvmError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const HvmError& e) {
      const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
      py::set_error(error, msg.c_str());
    }
  });

  py::class_<HybridDataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("names"), py::arg("kinds"), py::arg("values"),
           "kinds is a string of 'c'/'b' characters, one per column")
      .def_property_readonly("names", [](const HybridDataset& d) {
        std::vector<std::string> out;
        for (const auto& s : d.specs()) out.push_back(s.name);
        return out;
      })
      .def_property_readonly("kinds", [](const HybridDataset& d) {
        std::string out;
        for (const auto& s : d.specs()) out += kind_token(s.kind);
        return out;
      })
      .def_property_readonly("values", &HybridDataset::values)
      .def_property_readonly("shape", [](const HybridDataset& d) { return py::make_tuple(d.rows(), d.cols()); })
      .def("to_csv", [](const HybridDataset& d) {
        std::ostringstream os;
        write_dataset_csv(os, d);
        return os.str();
      });

  m.def("read_csv", [](const std::string& path) { return validate_dataset(read_csv(path)); });
  m.def("parse_csv", [](const std::string& text) { return validate_dataset(parse_csv(text)); });

  py::class_<HvmModel>(m, "Model")
      .def_readonly("delta", &HvmModel::delta)
      .def_readonly("s_lim", &HvmModel::s_lim)
      .def_readonly("xi", &HvmModel::xi)
      .def_readonly("tau", &HvmModel::tau)
      .def_readonly("bandwidth", &HvmModel::bandwidth)
      .def_readonly("n_train", &HvmModel::n_train)
      .def_property_readonly("phi", [](const HvmModel& mod) { return mod.weights.phi; })
      .def_property_readonly("names", [](const HvmModel& mod) {
        std::vector<std::string> out;
        for (const auto& s : mod.specs) out.push_back(s.name);
        return out;
      })
      .def("warnings", &HvmModel::warnings)
      .def("to_json", &model_to_json)
      .def_static("from_json", [](const std::string& text) { return model_from_json(text); })
      .def("save", [](const HvmModel& mod, const std::string& path) { save_model(mod, path); })
      .def_static("load", [](const std::string& path) { return load_model(path); });

  m.def("train", &train, py::arg("data"), py::arg("delta") = kDefaultDelta);

  m.def(
      "score",
      [](const HvmModel& model, const Eigen::MatrixXd& samples) {
        const auto report = monitor(samples, model);
        py::array_t<double> stats(static_cast<py::ssize_t>(report.size()));
        py::array_t<bool> faulty(static_cast<py::ssize_t>(report.size()));
        auto s = stats.mutable_unchecked<1>();
        auto f = faulty.mutable_unchecked<1>();
        for (std::size_t i = 0; i < report.size(); ++i) {
          s(static_cast<py::ssize_t>(i)) = report.verdicts[i].statistic;
          f(static_cast<py::ssize_t>(i)) = report.verdicts[i].state == MonitorState::Faulty;
        }
        return py::make_tuple(stats, faulty);
      },
      py::arg("model"), py::arg("samples"), "Returns (statistics, faulty) arrays, one entry per row");

  m.def("log_score", [](const HvmModel& model, const Eigen::VectorXd& sample) {
    const auto b = log_score(row_of(sample), model);
    py::dict d;
    d["f"] = b.f;
    d["f_raw"] = b.f_raw;
    d["epsilon"] = b.epsilon;
    d["binary_dot"] = b.binary_dot;
    d["s"] = b.s;
    d["clamped"] = b.clamped;
    return d;
  });
  m.def("detectability_condition", [](const HvmModel& model, const Eigen::VectorXd& sample) {
    return detectability_condition(row_of(sample), model);
  });

  m.def(
      "inject",
      [](const HybridDataset& data, const Eigen::MatrixXd& direction, const Eigen::MatrixXd& magnitude) {
        return inject_faults(data, FaultSpec{direction, magnitude});
      },
      py::arg("data"), py::arg("direction"), py::arg("magnitude"));

  m.def("mutual_information", [](const std::vector<double>& a, const std::vector<double>& b) {
    return mutual_information(a, b);
  });
  m.def("closed_form_binarized_mi", &closed_form_binarized_mi, py::arg("rho"));
  m.def("mi_to_rho", &mi_to_rho, py::arg("mi"));
  m.def(
      "kde_control_limit",
      [](const std::vector<double>& stats, double delta) { return kde_control_limit(stats, delta).limit; },
      py::arg("stats"), py::arg("delta"));

  m.def(
      "generate",
      [](const std::string& experiment, std::uint64_t seed) {
        auto c = resolve(experiment);
        c.seed = seed;
        auto data = draw_repeat_data(c, 0);
        return py::make_tuple(std::move(data.train), std::move(data.test), c.fault_start);
      },
      py::arg("experiment") = "exp2", py::arg("seed") = 0,
      "Training and test data of repeat 0: (train, test, fault_start)");

  m.def(
      "simulate",
      [](const std::string& experiment, std::optional<std::size_t> repeats, std::uint64_t seed,
         std::optional<std::string> baselines, std::size_t jobs) {
        auto c = resolve(experiment);
        c.seed = seed;
        if (repeats) c.repeats = *repeats;
        if (baselines) c.baselines = parse_baseline_list(*baselines);
        ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(c, jobs);
        }
        py::list rows;
        for (const auto& s : result.summary) {
          py::dict d;
          d["method"] = s.method;
          d["statistic"] = s.statistic;
          d["mean_far"] = s.mean_far;
          d["mean_fdr"] = s.mean_fdr;
          d["sd_far"] = s.sd_far;
          d["sd_fdr"] = s.sd_fdr;
          rows.append(d);
        }
        py::dict out;
        out["summary"] = rows;
        out["summary_csv"] = summary_csv(result);
        out["per_repeat_csv"] = per_repeat_csv(result);
        return out;
      },
      py::arg("experiment") = "exp2", py::arg("repeats") = py::none(), py::arg("seed") = 0,
      py::arg("baselines") = py::none(), py::arg("jobs") = 1,
      "experiment is 'exp1', 'exp2' or a JSON config document");
}
