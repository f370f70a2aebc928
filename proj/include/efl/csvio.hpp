#pragma once

/// @file csvio.hpp
/// Deterministic tabular output.  Every number is printed as its shortest
/// round-trip decimal form (17 significant digits at most), lines end in \n,
/// and rows are emitted in call order, so identical runs produce identical
/// bytes.  The same table can be written as CSV (header + comma rows) or as
/// JSON lines (one object per row; non-finite values become null).

#include <ostream>
#include <string>
#include <vector>

namespace efl {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

enum class TableFormat { csv, jsonl };

/// Accepts "csv" or "jsonl"; anything else is a ConfigError.
TableFormat parse_table_format(const std::string& text);

/// File extension (without dot) for a format.
std::string table_extension(TableFormat fmt);

class TableWriter {
 public:
  TableWriter(std::ostream& os, TableFormat fmt, std::vector<std::string> columns);

  /// Emit one row; the value count must match the column count.
  void row(const std::vector<double>& values);

 private:
  std::ostream& os_;
  TableFormat fmt_;
  std::vector<std::string> columns_;
};

}  // namespace efl
