#include "gapprobe/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gapprobe {
namespace {

std::string cell_text(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return {};
}

Cell parse_cell(const std::string& s) {
  if (s.empty()) return std::monostate{};
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() + s.size()) return v;
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("table row width does not match the header");
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column named '" + name + "'");
}

TableFormat parse_format(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw std::invalid_argument("unknown format '" + name + "'");
}

std::string extension(TableFormat f) { return f == TableFormat::csv ? ".csv" : ".json"; }

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string s = cell_text(row[i]);
      if (s.find_first_of(",\"\n") != std::string::npos) throw std::logic_error("CSV cell needs quoting: " + s);
      out << (i ? "," : "") << s;
    }
    out << '\n';
  }
}

// Rows as objects keyed by column. Numbers are written by hand so they keep
// 17 significant digits.
void write_json(std::ostream& out, const Table& t) {
  out << "[\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out << "  {";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      out << (i ? ", " : "") << nlohmann::json(t.columns[i]).dump() << ": ";
      const Cell& c = t.rows[r][i];
      if (std::holds_alternative<double>(c)) {
        const double v = std::get<double>(c);
        out << (std::isfinite(v) ? format_double(v) : "null");
      } else if (std::holds_alternative<std::string>(c)) {
        out << nlohmann::json(std::get<std::string>(c)).dump();
      } else {
        out << "null";
      }
    }
    out << (r + 1 < t.rows.size() ? "},\n" : "}\n");
  }
  out << "]\n";
}

void write_table(std::ostream& out, const Table& t, TableFormat f) {
  if (f == TableFormat::csv) {
    write_csv(out, t);
  } else {
    write_json(out, t);
  }
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_csv: missing header");
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line);
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_cell(f));
    t.add_row(std::move(row));
  }
  return t;
}

Table read_json(std::istream& in) {
  const auto doc = nlohmann::ordered_json::parse(in);
  Table t;
  if (!doc.is_array()) throw std::invalid_argument("read_json: expected an array of rows");
  for (const auto& obj : doc) {
    if (t.columns.empty()) {
      for (const auto& item : obj.items()) t.columns.push_back(item.key());
    }
    std::vector<Cell> row;
    for (const auto& name : t.columns) {
      const auto& v = obj.at(name);
      if (v.is_number()) {
        row.emplace_back(v.get<double>());
      } else if (v.is_string()) {
        row.emplace_back(v.get<std::string>());
      } else {
        row.emplace_back(std::monostate{});
      }
    }
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace gapprobe
