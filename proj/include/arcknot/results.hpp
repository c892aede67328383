#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace arcknot {

using Cell = std::variant<std::int64_t, double, std::string>;

enum class Format { Csv, Json };

Format parse_format(const std::string& text);

// Rectangular result set. Doubles are written with 12 significant digits, so
// reading a written table and writing it again reproduces the same bytes.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  const Cell& at(std::size_t row, const std::string& column) const;
  double number(std::size_t row, const std::string& column) const;

  // Header row always present; strings containing commas or quotes are quoted.
  void write_csv(std::ostream& os) const;
  // Array of objects with keys in column order. Non-finite doubles become the
  // strings "inf", "-inf", "nan".
  void write_json(std::ostream& os) const;
  void write(std::ostream& os, Format format) const;

  static ResultTable read_csv(std::istream& is);
  static ResultTable read_json(std::istream& is);
  static ResultTable read(std::istream& is, Format format);
};

std::string format_cell(const Cell& cell);

}  // namespace arcknot
