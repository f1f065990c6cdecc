#include "hvm/csv_io.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hvm/error.hpp"

namespace hvm {

namespace {

std::vector<std::string> split_commas(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

bool is_skippable(std::string_view line) {
  const auto first = line.find_first_not_of(" \t");
  return first == std::string_view::npos || line[first] == '#';
}

}  // namespace

RawTable parse_csv(std::string_view text) {
  RawTable table;
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  if (text.empty()) throw HvmError(ErrorKind::EmptyInput, "input is empty");

  table.eol = text.find("\r\n") != std::string_view::npos ? "\r\n" : "\n";
  table.trailing_eol = text.back() == '\n';

  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    table.lines.emplace_back(line);
    start = end + 1;
  }

  int header_rows = 0;
  for (std::size_t k = 0; k < table.lines.size(); ++k) {
    const auto& line = table.lines[k];
    if (is_skippable(line)) continue;
    if (header_rows == 0) {
      table.names = split_commas(line);
      ++header_rows;
    } else if (header_rows == 1) {
      table.kinds = split_commas(line);
      ++header_rows;
    } else {
      table.cells.push_back(split_commas(line));
      table.data_line.push_back(k);
    }
  }
  if (header_rows < 2) {
    throw HvmError(ErrorKind::MalformedInput, "missing name or kind header row");
  }
  return table;
}

RawTable read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

std::string render_raw_table(const RawTable& table) {
  std::string out;
  for (std::size_t k = 0; k < table.lines.size(); ++k) {
    out += table.lines[k];
    if (k + 1 < table.lines.size() || table.trailing_eol) out += table.eol;
  }
  return out;
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw HvmError(ErrorKind::Io, "failed to format number");
  return {buf.data(), ptr};
}

void write_dataset_csv(std::ostream& out, const HybridDataset& data, std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  for (std::size_t j = 0; j < data.cols(); ++j) out << (j ? "," : "") << data.spec(j).name;
  out << '\n';
  for (std::size_t j = 0; j < data.cols(); ++j) out << (j ? "," : "") << kind_token(data.spec(j).kind);
  out << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      if (j) out << ',';
      out << format_double(data(i, j));
    }
    out << '\n';
  }
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw HvmError(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw HvmError(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw HvmError(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

}  // namespace hvm
