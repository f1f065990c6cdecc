#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "hvm/dataset.hpp"

namespace hvm {

/// Reads the hybrid CSV layout:
///
///   line 1: variable names
///   line 2: kinds, `c` or `b` per column
///   rest:   numeric rows
///
/// Lines starting with '#' and blank lines are skipped (but remembered so the
/// file can be written back unchanged). LF and CRLF are both accepted.
RawTable parse_csv(std::string_view text);
RawTable read_csv(const std::filesystem::path& path);

/// Rewrites a raw table with its original line layout and line endings.
std::string render_raw_table(const RawTable& table);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Writes a dataset in the hybrid CSV layout. `comment`, when non-empty, is
/// emitted as a leading '# ...' line.
void write_dataset_csv(std::ostream& out, const HybridDataset& data, std::string_view comment = {});

/// FNV-1a 64-bit digest as 16 hex digits (provenance tags, not security).
std::string content_hash(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace hvm
