#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hvm/model.hpp"

namespace hvm {

inline constexpr std::string_view kModelFormat = "hvm-model/1";

/// JSON document with format tag, variables and their parameters, weights,
/// delta, tau, xi, s_lim, KDE settings and the clamp policy. Numbers are
/// written in shortest round-trip form, so load(save(m)) is bit-exact.
std::string model_to_json(const HvmModel& model);

/// Parses and checks a model document. tau and xi must agree with the stored
/// parameters to 1e-12, otherwise MalformedInput is thrown.
HvmModel model_from_json(std::string_view text);

void save_model(const HvmModel& model, const std::filesystem::path& path);
HvmModel load_model(const std::filesystem::path& path);

}  // namespace hvm
