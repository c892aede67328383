#include "arcknot/results.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "arcknot/error.hpp"
#include "json.hpp"

namespace arcknot {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, int lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw PreconditionError("csv line " + std::to_string(lineno) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

Cell parse_cell(const std::string& text) {
  if (text.empty()) return text;
  const char* begin = text.c_str();
  char* end = nullptr;
  const bool integral = text.find_first_not_of("+-0123456789") == std::string::npos;
  if (integral) {
    const long long v = std::strtoll(begin, &end, 10);
    if (*end == '\0') return static_cast<std::int64_t>(v);
  }
  const double d = std::strtod(begin, &end);
  if (*end == '\0') return d;
  return text;
}

ordered_json to_json(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  const double d = std::get<double>(cell);
  if (!std::isfinite(d)) return format_double(d);
  return std::strtod(format_double(d).c_str(), nullptr);
}

Cell from_json(const ordered_json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw PreconditionError("json result cell must be a number or a string");
}

}  // namespace

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw PreconditionError("unknown output format '" + text + "' (expected csv or json)");
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  return format_double(std::get<double>(cell));
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw PreconditionError("result row width does not match the header");
  rows.push_back(std::move(row));
}

const Cell& ResultTable::at(std::size_t row, const std::string& column) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == column) return rows.at(row).at(c);
  }
  throw PreconditionError("no result column named '" + column + "'");
}

double ResultTable::number(std::size_t row, const std::string& column) const {
  const Cell& c = at(row, column);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  return std::strtod(std::get<std::string>(c).c_str(), nullptr);
}

void ResultTable::write_csv(std::ostream& os) const {
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << csv_escape(columns[c]);
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_escape(format_cell(row[c]));
    os << '\n';
  }
}

void ResultTable::write_json(std::ostream& os) const {
  ordered_json out = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json record = ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) record[columns[c]] = to_json(row[c]);
    out.push_back(std::move(record));
  }
  os << out.dump(2) << '\n';
}

void ResultTable::write(std::ostream& os, Format format) const {
  if (format == Format::Csv) {
    write_csv(os);
  } else {
    write_json(os);
  }
}

ResultTable ResultTable::read_csv(std::istream& is) {
  ResultTable t;
  std::string line;
  int lineno = 0;
  if (!std::getline(is, line)) throw PreconditionError("csv result file is empty");
  ++lineno;
  t.columns = split_csv_line(line, lineno);
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<Cell> row;
    for (const auto& f : split_csv_line(line, lineno)) row.push_back(parse_cell(f));
    if (row.size() != t.columns.size()) {
      throw PreconditionError("csv line " + std::to_string(lineno) + ": wrong number of fields");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

ResultTable ResultTable::read_json(std::istream& is) {
  ordered_json in;
  try {
    in = ordered_json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("json result file: ") + e.what());
  }
  if (!in.is_array()) throw PreconditionError("json result file must hold an array of records");
  ResultTable t;
  for (const auto& record : in) {
    if (!record.is_object()) throw PreconditionError("json result record must be an object");
    if (t.columns.empty()) {
      for (const auto& [key, _] : record.items()) t.columns.push_back(key);
    }
    std::vector<Cell> row;
    for (const auto& col : t.columns) {
      if (!record.contains(col)) throw PreconditionError("json result record lacks '" + col + "'");
      row.push_back(from_json(record[col]));
    }
    t.add_row(std::move(row));
  }
  return t;
}

ResultTable ResultTable::read(std::istream& is, Format format) {
  return format == Format::Csv ? read_csv(is) : read_json(is);
}

}  // namespace arcknot
