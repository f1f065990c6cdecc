#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace hvm {

enum class VariableKind { Continuous, Binary };

struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::Continuous;
  std::size_t index = 0;

  bool operator==(const VariableSpec&) const = default;
};

/// Unvalidated table as read from an external source. Cell text is kept
/// verbatim so files can be rewritten byte-for-byte.
struct RawTable {
  std::vector<std::string> names;
  std::vector<std::string> kinds;
  std::vector<std::vector<std::string>> cells;

  // Layout of the original file, used by write_raw_table().
  std::vector<std::string> lines;
  std::vector<std::size_t> data_line;
  std::string eol = "\n";
  bool trailing_eol = true;
};

/// Validated n x d table of hybrid samples. Immutable after construction.
///
/// Binary columns hold exactly 0.0 or 1.0, continuous columns are finite,
/// names are unique and n >= 2. Storage is column-major so that each
/// variable is a contiguous span.
class HybridDataset {
 public:
  HybridDataset(std::vector<VariableSpec> specs, Eigen::MatrixXd values);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const noexcept { return specs_.size(); }
  std::size_t continuous_count() const noexcept { return continuous_.size(); }
  std::size_t binary_count() const noexcept { return binary_.size(); }

  const std::vector<VariableSpec>& specs() const noexcept { return specs_; }
  const VariableSpec& spec(std::size_t j) const { return specs_.at(j); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  std::span<const double> column(std::size_t j) const;

  /// Column positions of each kind, in ascending order.
  const std::vector<std::size_t>& continuous_indices() const noexcept { return continuous_; }
  const std::vector<std::size_t>& binary_indices() const noexcept { return binary_; }

  /// Continuous columns only, in column order (what distance-based monitors see).
  Eigen::MatrixXd continuous_block() const;

 private:
  std::vector<VariableSpec> specs_;
  Eigen::MatrixXd values_;
  std::vector<std::size_t> continuous_;
  std::vector<std::size_t> binary_;
};

std::vector<VariableSpec> make_specs(const std::vector<std::string>& names,
                                     const std::vector<VariableKind>& kinds);

HybridDataset validate_dataset(std::vector<VariableSpec> specs, Eigen::MatrixXd values);
HybridDataset validate_dataset(const RawTable& raw);

/// Header and cell parsing without the dataset invariants (used when scoring,
/// where a single row is legitimate). Throws MalformedInput with row/column.
std::vector<VariableSpec> parse_raw_specs(const RawTable& raw);
Eigen::MatrixXd parse_raw_values(const RawTable& raw, const std::vector<VariableSpec>& specs);

/// Parses a kind token: `c` or `b`, case-insensitive.
VariableKind parse_kind(std::string_view token);
char kind_token(VariableKind kind) noexcept;

/// out[i] = 1 iff column[i] > mean (strict).
std::vector<double> binarize_continuous(std::span<const double> column, double mean);

/// {0,1} view of a dataset: binary columns pass through, continuous columns
/// are thresholded at their training means.
struct BinarizedView {
  Eigen::MatrixXd columns;

  std::span<const double> column(std::size_t j) const {
    return {columns.col(static_cast<Eigen::Index>(j)).data(),
            static_cast<std::size_t>(columns.rows())};
  }
};

/// `means` is indexed by column; entries for binary columns are ignored.
BinarizedView make_binarized_view(const HybridDataset& data, std::span<const double> means);

}  // namespace hvm
