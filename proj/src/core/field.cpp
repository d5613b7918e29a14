#include "core/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace fieldinfer {

Field grid_from_csv_text(const std::string& text) {
  std::vector<std::vector<double>> rows;
  size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos
                                                                 : eol - pos);
    pos = eol == std::string::npos ? text.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    line_no++;
    if (line.empty()) {
      if (pos >= text.size()) break;  // trailing newline
      throw FormatError("blank line " + std::to_string(line_no) + " inside grid");
    }
    std::vector<double> row;
    size_t cell = 0;
    int col = 0;
    while (cell <= line.size()) {
      size_t comma = line.find(',', cell);
      std::string tok = line.substr(
          cell, comma == std::string::npos ? std::string::npos : comma - cell);
      col++;
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw ParseError("cell (" + std::to_string(line_no) + "," +
                             std::to_string(col) + ") is not numeric: \"" + tok +
                             "\"",
                         line_no, col);
      }
      while (used < tok.size() &&
             (tok[used] == ' ' || tok[used] == '\t')) used++;
      if (used != tok.size())
        throw ParseError("cell (" + std::to_string(line_no) + "," +
                             std::to_string(col) + ") has trailing characters",
                         line_no, col);
      row.push_back(v);
      if (comma == std::string::npos) break;
      cell = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyError("grid has no rows");
  size_t m = rows[0].size();
  for (size_t r = 1; r < rows.size(); r++) {
    if (rows[r].size() != m)
      throw FormatError("row " + std::to_string(r + 1) + " has " +
                        std::to_string(rows[r].size()) + " cells, expected " +
                        std::to_string(m));
  }
  Field f(static_cast<int>(rows.size()), static_cast<int>(m));
  for (size_t r = 0; r < rows.size(); r++)
    for (size_t c = 0; c < m; c++) f.values[r * m + c] = rows[r][c];
  return f;
}

std::string grid_to_csv(const Field& f) {
  std::string out;
  out.reserve(static_cast<size_t>(f.n) * f.m * 20);
  char buf[40];
  for (int i = 0; i < f.n; i++) {
    for (int j = 0; j < f.m; j++) {
      // %.17g preserves every double bit pattern across a text round trip.
      std::snprintf(buf, sizeof(buf), "%.17g",
                    f.values[static_cast<size_t>(i) * f.m + j]);
      out += buf;
      out += (j + 1 < f.m) ? ',' : '\n';
    }
  }
  return out;
}

Field load_grid_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed on " + path);
  return grid_from_csv_text(ss.str());
}

void save_grid_csv(const Field& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << grid_to_csv(f);
  if (!out) throw IoError("write failed on " + path);
}

Position make_position(double x, double y, int n, int m) {
  Position v;
  v.x = x;
  v.y = y;
  v.p = static_cast<int>(std::floor(n * x));
  v.q = static_cast<int>(std::floor(m * y));
  return v;
}

PositionGrid make_position_grid(int n, int m, int k, int divisions) {
  if (divisions < 1) throw ConfigError("grid divisions must be >= 1");
  if (k < 1) throw ConfigError("bandwidth must be >= 1");
  if (n < 4 * k + 2 || m < 4 * k + 2)
    throw BandwidthTooLargeError(
        "no admissible positions on a " + std::to_string(n) + "x" +
        std::to_string(m) + " lattice at bandwidth " + std::to_string(k) +
        "; need at least " + std::to_string(4 * k + 2) + " points per axis");
  const double lo_x = (2.0 * k + 1.0) / n, span_x = (n - 4.0 * k - 1.0) / n;
  const double lo_y = (2.0 * k + 1.0) / m, span_y = (m - 4.0 * k - 1.0) / m;
  PositionGrid g;
  g.divisions = divisions;
  g.positions.reserve(static_cast<size_t>(divisions) * divisions);
  for (int a = 1; a <= divisions; a++) {
    for (int b = 1; b <= divisions; b++) {
      double x = lo_x + span_x * (2.0 * a - 1.0) / (2.0 * divisions);
      double y = lo_y + span_y * (2.0 * b - 1.0) / (2.0 * divisions);
      g.positions.push_back(make_position(x, y, n, m));
    }
  }
  validate_positions(g, n, m, k);
  return g;
}

void validate_positions(const PositionGrid& grid, int n, int m, int k) {
  if (grid.positions.empty()) throw EmptyError("position grid is empty");
  for (size_t v = 0; v < grid.positions.size(); v++) {
    const Position& pos = grid.positions[v];
    if (pos.p < 2 * k + 1 || pos.p > n - 2 * k || pos.q < 2 * k + 1 ||
        pos.q > m - 2 * k) {
      throw BoundaryError(
          "position " + std::to_string(v) + " at (" + std::to_string(pos.x) +
          "," + std::to_string(pos.y) + ") anchors to (" +
          std::to_string(pos.p) + "," + std::to_string(pos.q) +
          "), outside [" + std::to_string(2 * k + 1) + "," +
          std::to_string(n - 2 * k) + "]x[" + std::to_string(2 * k + 1) + "," +
          std::to_string(m - 2 * k) + "] for bandwidth " + std::to_string(k) +
          "; use a coarser grid or smaller bandwidth");
    }
  }
}

}  // namespace fieldinfer
