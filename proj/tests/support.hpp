#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hvm/dataset.hpp"
#include "hvm/error.hpp"

#define EXPECT_HVM_ERROR(statement, expected_kind)                                   \
  do {                                                                               \
    try {                                                                            \
      statement;                                                                     \
      ADD_FAILURE() << "expected HvmError " << ::hvm::to_string(expected_kind);     \
    } catch (const ::hvm::HvmError& e__) {                                           \
      EXPECT_EQ(e__.kind(), expected_kind) << e__.what();                            \
    }                                                                                \
  } while (0)

namespace hvm::test {

inline std::vector<VariableSpec> specs_of(const std::string& kinds) {
  std::vector<std::string> names;
  std::vector<VariableKind> k;
  for (std::size_t j = 0; j < kinds.size(); ++j) {
    names.push_back("v" + std::to_string(j + 1));
    k.push_back(kinds[j] == 'b' ? VariableKind::Binary : VariableKind::Continuous);
  }
  return make_specs(names, k);
}

inline Eigen::MatrixXd column_matrix(const std::vector<std::vector<double>>& columns) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(columns.front().size()),
                    static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t i = 0; i < columns[j].size(); ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = columns[j][i];
  return m;
}

/// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("hvm_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace hvm::test
