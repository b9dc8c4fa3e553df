#include "xirho/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "xirho/error.hpp"

namespace xirho {

std::string format_number(double value) {
  if (std::isnan(value)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_double(std::string_view field, double& value) {
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc() && ptr == field.data() + field.size() && !field.empty();
}

std::vector<double> parse_row(std::string_view line, std::size_t line_no) {
  std::vector<double> out;
  for (auto field : split_fields(line)) {
    double x;
    if (!parse_double(field, x)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": '" + std::string(field) +
                                             "' is not a number");
    }
    out.push_back(x);
  }
  return out;
}

void write_row(std::ostream& out, std::span<const double> values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out << ',';
    out << format_number(values[k]);
  }
  out << '\n';
}

}  // namespace

void write_boundary_csv(std::ostream& out, const std::vector<BoundaryRow>& rows) {
  out << "x,M_x,b_x\n";
  for (const auto& row : rows) {
    out << format_number(row.x) << ',' << format_number(row.m) << ',';
    if (row.b) out << format_number(*row.b);
    out << '\n';
  }
}

void write_grid_csv(std::ostream& out, const GridH& grid) {
  write_row(out, grid.v_levels);
  for (int j = 0; j < grid.n_v; ++j) write_row(out, grid.row(j));
}

GridH read_grid_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "grid CSV is empty");
  std::vector<double> levels = parse_row(line, line_no);
  std::vector<double> values;
  int n_t = -1;
  int rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto row = parse_row(line, line_no);
    if (n_t < 0) n_t = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != n_t) {
      throw Error(ErrorCode::DimensionMismatch, "line " + std::to_string(line_no) + " has " +
                                                    std::to_string(row.size()) + " values, expected " +
                                                    std::to_string(n_t));
    }
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows != static_cast<int>(levels.size())) {
    throw Error(ErrorCode::DimensionMismatch, "grid CSV has " + std::to_string(rows) + " rows for " +
                                                  std::to_string(levels.size()) + " levels");
  }
  return GridH(n_t, rows, std::move(values), std::move(levels));
}

void write_sample_csv(std::ostream& out, const Sample& sample) {
  out << "x,y\n";
  for (std::size_t k = 0; k < sample.size(); ++k) {
    out << format_number(sample.x[k]) << ',' << format_number(sample.y[k]) << '\n';
  }
}

Sample read_sample_csv(std::istream& in) {
  Sample s;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 2 columns, got " +
                                             std::to_string(fields.size()));
    }
    double x;
    double y;
    const bool ok = parse_double(fields[0], x) && parse_double(fields[1], y);
    if (!ok) {
      if (line_no == 1) continue;  // header
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": non-numeric value");
    }
    s.x.push_back(x);
    s.y.push_back(y);
  }
  return s;
}

void write_oracle_rows_csv(std::ostream& out, const std::vector<OracleRow>& rows) {
  out << "v,plateau_end,root,slope\n";
  for (const auto& row : rows) {
    out << format_number(row.v) << ',' << format_number(row.plateau_end) << ',' << format_number(row.root) << ','
        << format_number(row.slope) << '\n';
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  return in;
}

}  // namespace xirho
