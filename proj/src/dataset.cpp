#include "hvm/dataset.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "hvm/error.hpp"

namespace hvm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonBinaryValue: return "NonBinaryValue";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::SpecMismatch: return "SpecMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::BinaryAmplitudeViolation: return "BinaryAmplitudeViolation";
    case ErrorKind::InvalidDelta: return "InvalidDelta";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::EmptySegment: return "EmptySegment";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string cell_ref(std::size_t row, const VariableSpec& spec) {
  std::ostringstream os;
  os << "row " << row << ", column " << spec.index << " ('" << spec.name << "')";
  return os.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

HybridDataset::HybridDataset(std::vector<VariableSpec> specs, Eigen::MatrixXd values)
    : specs_(std::move(specs)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.cols()) != specs_.size()) {
    throw HvmError(ErrorKind::ShapeMismatch,
                   "dataset has " + std::to_string(values_.cols()) + " columns but " +
                       std::to_string(specs_.size()) + " variable specs");
  }
  if (values_.rows() < 2) {
    throw HvmError(ErrorKind::TooFewRows,
                   "dataset needs at least 2 rows, got " + std::to_string(values_.rows()));
  }
  std::unordered_set<std::string> seen;
  for (std::size_t j = 0; j < specs_.size(); ++j) {
    auto& spec = specs_[j];
    spec.index = j;
    if (!seen.insert(spec.name).second) {
      throw HvmError(ErrorKind::DuplicateName, "duplicate variable name '" + spec.name + "'");
    }
    const auto col = values_.col(static_cast<Eigen::Index>(j));
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      const double v = col(i);
      if (!std::isfinite(v)) {
        throw HvmError(ErrorKind::NonFiniteValue,
                       "non-finite value at " + cell_ref(static_cast<std::size_t>(i), spec));
      }
      if (spec.kind == VariableKind::Binary && v != 0.0 && v != 1.0) {
        std::ostringstream os;
        os << "binary value " << v << " not in {0,1} at "
           << cell_ref(static_cast<std::size_t>(i), spec);
        throw HvmError(ErrorKind::NonBinaryValue, os.str());
      }
    }
    (spec.kind == VariableKind::Continuous ? continuous_ : binary_).push_back(j);
  }
}

std::span<const double> HybridDataset::column(std::size_t j) const {
  if (j >= cols()) throw std::out_of_range("column index out of range");
  return {values_.col(static_cast<Eigen::Index>(j)).data(), rows()};
}

Eigen::MatrixXd HybridDataset::continuous_block() const {
  Eigen::MatrixXd out(values_.rows(), static_cast<Eigen::Index>(continuous_.size()));
  for (std::size_t k = 0; k < continuous_.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = values_.col(static_cast<Eigen::Index>(continuous_[k]));
  }
  return out;
}

std::vector<VariableSpec> make_specs(const std::vector<std::string>& names,
                                     const std::vector<VariableKind>& kinds) {
  if (names.size() != kinds.size()) {
    throw HvmError(ErrorKind::ShapeMismatch, "names and kinds differ in length");
  }
  std::vector<VariableSpec> specs;
  specs.reserve(names.size());
  for (std::size_t j = 0; j < names.size(); ++j) specs.push_back({names[j], kinds[j], j});
  return specs;
}

HybridDataset validate_dataset(std::vector<VariableSpec> specs, Eigen::MatrixXd values) {
  return HybridDataset(std::move(specs), std::move(values));
}

VariableKind parse_kind(std::string_view token) {
  token = trim(token);
  if (token == "c" || token == "C") return VariableKind::Continuous;
  if (token == "b" || token == "B") return VariableKind::Binary;
  throw HvmError(ErrorKind::MalformedInput,
                 "unknown variable kind '" + std::string(token) + "' (expected c or b)");
}

char kind_token(VariableKind kind) noexcept {
  return kind == VariableKind::Continuous ? 'c' : 'b';
}

std::vector<VariableSpec> parse_raw_specs(const RawTable& raw) {
  if (raw.names.size() != raw.kinds.size()) {
    throw HvmError(ErrorKind::MalformedInput,
                   "kind row has " + std::to_string(raw.kinds.size()) + " entries but header has " +
                       std::to_string(raw.names.size()));
  }
  std::vector<VariableSpec> specs;
  specs.reserve(raw.names.size());
  for (std::size_t j = 0; j < raw.names.size(); ++j) {
    try {
      specs.push_back({std::string(trim(raw.names[j])), parse_kind(raw.kinds[j]), j});
    } catch (const HvmError& e) {
      throw HvmError(e.kind(), std::string(e.what()) + " in kind row, column " + std::to_string(j));
    }
  }
  return specs;
}

Eigen::MatrixXd parse_raw_values(const RawTable& raw, const std::vector<VariableSpec>& specs) {
  const auto n = static_cast<Eigen::Index>(raw.cells.size());
  const auto d = static_cast<Eigen::Index>(specs.size());
  Eigen::MatrixXd values(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = raw.cells[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != d) {
      throw HvmError(ErrorKind::MalformedInput,
                     "data row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                         " cells, expected " + std::to_string(d));
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto text = trim(row[static_cast<std::size_t>(j)]);
      double v = 0.0;
      const auto* first = text.data();
      const auto* last = text.data() + text.size();
      if (!text.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (text.empty() || ec != std::errc() || ptr != last) {
        throw HvmError(ErrorKind::MalformedInput,
                       "cannot parse '" + std::string(text) + "' as a number at " +
                           cell_ref(static_cast<std::size_t>(i), specs[static_cast<std::size_t>(j)]));
      }
      values(i, j) = v;
    }
  }
  return values;
}

HybridDataset validate_dataset(const RawTable& raw) {
  auto specs = parse_raw_specs(raw);
  auto values = parse_raw_values(raw, specs);
  return HybridDataset(std::move(specs), std::move(values));
}

std::vector<double> binarize_continuous(std::span<const double> column, double mean) {
  std::vector<double> out(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) out[i] = column[i] > mean ? 1.0 : 0.0;
  return out;
}

BinarizedView make_binarized_view(const HybridDataset& data, std::span<const double> means) {
  if (means.size() != data.cols()) {
    throw HvmError(ErrorKind::ShapeMismatch, "means length does not match column count");
  }
  BinarizedView view{data.values()};
  for (const auto j : data.continuous_indices()) {
    const auto bits = binarize_continuous(data.column(j), means[j]);
    view.columns.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(bits.data(), static_cast<Eigen::Index>(bits.size()));
  }
  return view;
}

}  // namespace hvm
