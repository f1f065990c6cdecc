#include "hvm/model_io.hpp"

#include <cmath>

#include <json.hpp>

#include "hvm/csv_io.hpp"
#include "hvm/error.hpp"

namespace hvm {

using nlohmann::json;

std::string model_to_json(const HvmModel& model) {
  json vars = json::array();
  for (std::size_t j = 0; j < model.specs.size(); ++j) {
    const auto& spec = model.specs[j];
    const auto& est = model.marginals[j];
    json v;
    v["name"] = spec.name;
    if (const auto* g = std::get_if<GaussianParams>(&est.params)) {
      v["kind"] = "continuous";
      v["mu"] = g->mu;
      v["sigma"] = g->sigma;
    } else {
      v["kind"] = "binary";
      v["eta"] = std::get<BernoulliParams>(est.params).eta;
    }
    v["adjusted"] = est.degenerate;
    v["phi"] = model.weights.phi[j];
    vars.push_back(std::move(v));
  }

  json doc;
  doc["format"] = kModelFormat;
  doc["tool_version"] = HVM_VERSION_STRING;
  doc["n_train"] = model.n_train;
  doc["variables"] = std::move(vars);
  doc["delta"] = model.delta;
  doc["tau"] = model.tau;
  doc["xi"] = model.xi;
  doc["s_lim"] = model.s_lim;
  doc["kde"] = {{"kernel", "gaussian"},
                {"bandwidth_rule", "silverman 1.06*sd*n^-0.2"},
                {"bandwidth", model.bandwidth}};
  doc["clamp_policy"] = {{"score", "f = min(f, 0)"},
                         {"eta", "clamp to [1/(n+1), 1-1/(n+1)]"},
                         {"sigma", "floor at 1e-9*(1+|mu|)"}};
  return doc.dump(2) + "\n";
}

HvmModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw HvmError(ErrorKind::MalformedInput, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) {
      throw HvmError(ErrorKind::MalformedInput, "unsupported model format tag");
    }
    HvmModel model;
    model.n_train = doc.at("n_train").get<std::size_t>();
    model.delta = doc.at("delta").get<double>();
    model.s_lim = doc.at("s_lim").get<double>();
    model.bandwidth = doc.at("kde").at("bandwidth").get<double>();
    const auto& vars = doc.at("variables");
    for (std::size_t j = 0; j < vars.size(); ++j) {
      const auto& v = vars[j];
      const auto kind_name = v.at("kind").get<std::string>();
      MarginalEstimate est;
      VariableKind kind;
      if (kind_name == "continuous") {
        kind = VariableKind::Continuous;
        est.params = GaussianParams{v.at("mu").get<double>(), v.at("sigma").get<double>()};
      } else if (kind_name == "binary") {
        kind = VariableKind::Binary;
        est.params = BernoulliParams{v.at("eta").get<double>()};
      } else {
        throw HvmError(ErrorKind::MalformedInput, "unknown variable kind '" + kind_name + "'");
      }
      est.degenerate = v.value("adjusted", false);
      model.specs.push_back({v.at("name").get<std::string>(), kind, j});
      model.marginals.push_back(est);
      model.weights.phi.push_back(v.at("phi").get<double>());
    }
    if (!(model.delta > 0.0 && model.delta < 1.0) || !(model.s_lim >= 0.0)) {
      throw HvmError(ErrorKind::MalformedInput, "model has delta outside (0,1) or negative s_lim");
    }

    const auto stored_tau = doc.at("tau").get<std::vector<double>>();
    const double stored_xi = doc.at("xi").get<double>();
    model.refresh_coefficients();
    bool consistent = stored_tau.size() == model.tau.size() &&
                      std::abs(stored_xi - model.xi) <= 1e-12 * std::max(1.0, std::abs(stored_xi));
    for (std::size_t k = 0; consistent && k < stored_tau.size(); ++k) {
      consistent = std::abs(stored_tau[k] - model.tau[k]) <= 1e-12 * std::max(1.0, std::abs(stored_tau[k]));
    }
    if (!consistent) {
      throw HvmError(ErrorKind::MalformedInput, "tau/xi do not match the stored parameters");
    }
    model.tau = stored_tau;
    model.xi = stored_xi;
    return model;
  } catch (const json::exception& e) {
    throw HvmError(ErrorKind::MalformedInput, std::string("model file is missing fields: ") + e.what());
  }
}

void save_model(const HvmModel& model, const std::filesystem::path& path) {
  write_file(path, model_to_json(model));
}

HvmModel load_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

}  // namespace hvm
