// csv.hpp -- minimal CSV tables for experiment output
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace oobsense {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws std::invalid_argument when the arity differs from the header.
  void add_row(std::vector<std::string> cells);
  void add_numeric_row(std::span<const double> values);

  /// Index of a header column, throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
  /// Column parsed as doubles.
  std::vector<double> numeric_column(const std::string& name) const;
};

/// Shortest decimal text (12 significant digits) for a value.
std::string format_number(double v);

void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(std::istream& is);

}  // namespace oobsense
