#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace gapprobe {

// %.17g: parses back to the identical double
std::string format_double(double v);

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  std::size_t column(const std::string& name) const;
};

enum class TableFormat { csv, json };

TableFormat parse_format(const std::string& name);
std::string extension(TableFormat f);

// Empty cells are blank in CSV and null in JSON; strings must not contain
// commas, quotes or newlines.
void write_csv(std::ostream& out, const Table& t);
void write_json(std::ostream& out, const Table& t);
void write_table(std::ostream& out, const Table& t, TableFormat f);

// Cells that parse completely as numbers come back as doubles.
Table read_csv(std::istream& in);
Table read_json(std::istream& in);

}  // namespace gapprobe
