#include "hvm/fault.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "hvm/csv_io.hpp"
#include "hvm/error.hpp"

namespace hvm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return !text.empty() && ec == std::errc() && ptr == last;
}

}  // namespace

FaultSpec FaultSpec::none(std::size_t rows, std::size_t cols) {
  const auto r = static_cast<Eigen::Index>(rows);
  const auto c = static_cast<Eigen::Index>(cols);
  return {Eigen::MatrixXd::Zero(r, c), Eigen::MatrixXd::Zero(r, c)};
}

Eigen::MatrixXd flip_magnitudes(const HybridDataset& data) {
  Eigen::MatrixXd mag = Eigen::MatrixXd::Zero(data.values().rows(), data.values().cols());
  for (const auto j : data.binary_indices()) {
    const auto col = static_cast<Eigen::Index>(j);
    mag.col(col) = (1.0 - 2.0 * data.values().col(col).array()).matrix();
  }
  return mag;
}

HybridDataset inject_faults(const HybridDataset& data, const FaultSpec& spec) {
  const auto& x = data.values();
  for (const auto* m : {&spec.direction, &spec.magnitude}) {
    if (m->rows() != x.rows() || m->cols() != x.cols()) {
      std::ostringstream os;
      os << "fault matrices are " << m->rows() << "x" << m->cols() << " but data is " << x.rows()
         << "x" << x.cols();
      throw HvmError(ErrorKind::ShapeMismatch, os.str());
    }
  }
  Eigen::MatrixXd out = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const bool binary = data.spec(static_cast<std::size_t>(j)).kind == VariableKind::Binary;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double dir = spec.direction(i, j);
      if (dir == 0.0) continue;
      if (dir != 1.0) {
        std::ostringstream os;
        os << "fault direction must be 0 or 1, got " << dir << " at row " << i << ", column " << j;
        throw HvmError(ErrorKind::MalformedInput, os.str());
      }
      const double mag = spec.magnitude(i, j);
      if (binary) {
        const double expected = x(i, j) == 1.0 ? -1.0 : 1.0;
        if (mag != expected) {
          std::ostringstream os;
          os << "binary fault amplitude " << mag << " at row " << i << ", column " << j << " ('"
             << data.spec(static_cast<std::size_t>(j)).name << "') would move " << x(i, j)
             << " outside {0,1}";
          throw HvmError(ErrorKind::BinaryAmplitudeViolation, os.str());
        }
      }
      out(i, j) += mag;
    }
  }
  return validate_dataset(data.specs(), std::move(out));
}

FaultSpec parse_fault_triples(std::string_view text, const HybridDataset& data) {
  auto spec = FaultSpec::none(data.rows(), data.cols());
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    std::array<std::string_view, 3> fields;
    std::size_t count = 0;
    std::size_t pos = 0;
    while (count < 3) {
      const auto comma = line.find(',', pos);
      fields[count++] = line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    const auto bad = [&](const std::string& why) {
      return HvmError(ErrorKind::MalformedInput,
                      "fault listing line " + std::to_string(line_no) + ": " + why);
    };
    if (count != 3 || line.find(',', pos) != std::string_view::npos) {
      throw bad("expected row,column,magnitude");
    }

    std::size_t row = 0;
    if (!parse_number(fields[0], row)) {
      if (line_no == 1 || trim(fields[0]) == "row") continue;  // header
      throw bad("cannot parse row index");
    }
    std::size_t col = 0;
    if (!parse_number(fields[1], col)) {
      const auto name = trim(fields[1]);
      bool found = false;
      for (const auto& s : data.specs()) {
        if (s.name == name) {
          col = s.index;
          found = true;
          break;
        }
      }
      if (!found) throw bad("unknown column '" + std::string(name) + "'");
    }
    double mag = 0.0;
    if (!parse_number(fields[2], mag)) throw bad("cannot parse magnitude");
    if (row >= data.rows() || col >= data.cols()) throw bad("cell outside the data");
    spec.direction(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
    spec.magnitude(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = mag;
  }
  return spec;
}

FaultSpec load_fault_triples(const std::filesystem::path& path, const HybridDataset& data) {
  return parse_fault_triples(read_file(path), data);
}

}  // namespace hvm
