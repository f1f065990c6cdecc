#pragma once

#include <filesystem>
#include <string_view>

#include "hvm/dataset.hpp"

namespace hvm {

/// Elementwise fault description: X^f = X + direction ∘ magnitude.
///
/// `direction` is n x d with entries in {0,1}. Magnitudes where direction is 0
/// are ignored. On binary columns each active cell must flip the value, so the
/// magnitude is -1 where X is 1 and +1 where X is 0.
struct FaultSpec {
  Eigen::MatrixXd direction;
  Eigen::MatrixXd magnitude;

  static FaultSpec none(std::size_t rows, std::size_t cols);
};

/// Applies the fault and re-validates the result. Throws ShapeMismatch when
/// dimensions disagree and BinaryAmplitudeViolation (with the cell
/// coordinates) when a binary cell would leave {0,1}.
HybridDataset inject_faults(const HybridDataset& data, const FaultSpec& spec);

/// Sparse fault listing: one `row,column,magnitude` line per faulty cell,
/// row 0-based over data rows, column a 0-based index or a variable name. An
/// optional header line and '#' comments are allowed. Listed cells get
/// direction 1.
FaultSpec parse_fault_triples(std::string_view text, const HybridDataset& data);
FaultSpec load_fault_triples(const std::filesystem::path& path, const HybridDataset& data);

/// Flip mask for binary columns: magnitude 1 - 2X, so every active cell toggles.
Eigen::MatrixXd flip_magnitudes(const HybridDataset& data);

}  // namespace hvm
