#include "efl/csvio.hpp"

#include <charconv>
#include <cmath>

#include "efl/errors.hpp"

namespace efl {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

TableFormat parse_table_format(const std::string& text) {
  if (text == "csv") return TableFormat::csv;
  if (text == "jsonl") return TableFormat::jsonl;
  throw ConfigError("output format must be \"csv\" or \"jsonl\", got \"" + text + "\"");
}

std::string table_extension(TableFormat fmt) {
  return fmt == TableFormat::csv ? "csv" : "jsonl";
}

TableWriter::TableWriter(std::ostream& os, TableFormat fmt, std::vector<std::string> columns)
    : os_(os), fmt_(fmt), columns_(std::move(columns)) {
  if (columns_.empty()) throw ConfigError("table writer: no columns");
  if (fmt_ == TableFormat::csv) {
    for (size_t i = 0; i < columns_.size(); ++i) {
      if (i) os_ << ',';
      os_ << columns_[i];
    }
    os_ << '\n';
  }
}

void TableWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_.size())
    throw ConfigError("table writer: row width " + std::to_string(values.size()) +
                      " != column count " + std::to_string(columns_.size()));
  if (fmt_ == TableFormat::csv) {
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) os_ << ',';
      os_ << format_double(values[i]);
    }
    os_ << '\n';
    return;
  }
  os_ << '{';
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) os_ << ',';
    os_ << '"' << columns_[i] << "\":";
    if (std::isfinite(values[i]))
      os_ << format_double(values[i]);
    else
      os_ << "null";  // JSON has no nan/inf literals
  }
  os_ << "}\n";
}

}  // namespace efl
