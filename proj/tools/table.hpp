#pragma once

// Column tables written as CSV or JSON, and line plots written as SVG.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace freeconv::cli {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// Shortest round-trip representation; non-finite values print as nan / inf / -inf.
std::string format_number(double v);

void write_csv(const Table& t, std::ostream& out);
/// {"schema": "freeconv-b/1", "command": ..., "columns": [...], "data": {column: [values]}}
void write_json(const Table& t, std::ostream& out);

/// Plots the listed numeric columns against column 0. The caption goes under the axes.
void write_svg(const Table& t, const std::vector<std::string>& series, const std::string& caption,
               const std::string& path);

}  // namespace freeconv::cli
