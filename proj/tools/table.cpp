#include "table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "freeconv/errors.hpp"

namespace freeconv::cli {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error(ErrorKind::DomainError, "row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_number(*d);
  if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

int column_index(const Table& t, const std::string& name) {
  auto it = std::find(t.columns.begin(), t.columns.end(), name);
  if (it == t.columns.end()) throw Error(ErrorKind::DomainError, "no column '" + name + "'");
  return static_cast<int>(it - t.columns.begin());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

double cell_value(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return *d;
  if (const long long* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  return std::numeric_limits<double>::quiet_NaN();
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void write_csv(const Table& t, std::ostream& out) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(cell_text(row[c]));
    out << '\n';
  }
}

void write_json(const Table& t, std::ostream& out) {
  nlohmann::ordered_json j;
  j["schema"] = "freeconv-b/1";
  j["command"] = t.command;
  j["columns"] = t.columns;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    nlohmann::ordered_json col = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      const Cell& cell = row[c];
      if (const double* d = std::get_if<double>(&cell)) {
        // JSON has no nan/inf
        if (std::isfinite(*d)) col.push_back(*d);
        else col.push_back(format_number(*d));
      } else if (const long long* i = std::get_if<long long>(&cell)) {
        col.push_back(*i);
      } else {
        col.push_back(std::get<std::string>(cell));
      }
    }
    data[t.columns[c]] = col;
  }
  j["data"] = data;
  out << j.dump(2) << '\n';
}

void write_svg(const Table& t, const std::vector<std::string>& series, const std::string& caption,
               const std::string& path) {
  const double W = 640, H = 400, left = 60, right = 20, top = 20, bottom = 70;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  std::vector<int> cols;
  for (const auto& s : series) cols.push_back(column_index(t, s));
  for (const auto& row : t.rows) {
    double x = cell_value(row[0]);
    if (!std::isfinite(x)) continue;
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    for (int c : cols) {
      double y = cell_value(row[c]);
      if (!std::isfinite(y)) continue;
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (W - left - right); };
  auto py = [&](double y) { return H - bottom - (y - ymin) / (ymax - ymin) * (H - top - bottom); };

  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::DomainError, "cannot write plot '" + path + "'");
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\""
      << H - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = xmin + k * (xmax - xmin) / 4, yv = ymin + k * (ymax - ymin) / 4;
    out << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << H - bottom + 15
        << "\" font-size=\"10\" text-anchor=\"middle\">" << format_number(xv) << "</text>\n";
    out << "<text x=\"" << left - 4 << "\" y=\"" << fixed(py(yv)) << "\" font-size=\"10\" text-anchor=\"end\">"
        << format_number(yv) << "</text>\n";
  }
  for (std::size_t s = 0; s < cols.size(); ++s) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[s % 5] << "\" points=\"";
    bool first = true;
    for (const auto& row : t.rows) {
      double x = cell_value(row[0]), y = cell_value(row[cols[s]]);
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      out << (first ? "" : " ") << fixed(px(x)) << ',' << fixed(py(y));
      first = false;
    }
    out << "\"/>\n";
    out << "<text x=\"" << left + 10 + 120 * s << "\" y=\"" << H - bottom + 35 << "\" font-size=\"11\" fill=\""
        << colors[s % 5] << "\">" << series[s] << "</text>\n";
  }
  out << "<text x=\"" << left << "\" y=\"" << H - 12 << "\" font-size=\"11\">" << caption << "</text>\n";
  out << "</svg>\n";
}

}  // namespace freeconv::cli
