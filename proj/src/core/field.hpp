#ifndef FIELDINFER_CORE_FIELD_HPP_
#define FIELDINFER_CORE_FIELD_HPP_

#include <string>
#include <vector>

namespace fieldinfer {

// Observed lattice X_i^{(j)}, i = 1..n rows, j = 1..m columns. Storage is
// row-major and zero-based; the 1-based logical indexing used throughout the
// estimators is translated here and nowhere else.
struct Field {
  int n = 0, m = 0;
  std::vector<double> values;

  Field() = default;
  Field(int n, int m) : n(n), m(m), values(static_cast<size_t>(n) * m, 0.0) {}

  double at(int i, int j) const {
    return values[static_cast<size_t>(i - 1) * m + (j - 1)];
  }
  double& at(int i, int j) {
    return values[static_cast<size_t>(i - 1) * m + (j - 1)];
  }
};

// Comma-separated numeric grid, no header. Round-trips doubles exactly.
Field grid_from_csv_text(const std::string& text);
std::string grid_to_csv(const Field& f);
Field load_grid_csv(const std::string& path);
void save_grid_csv(const Field& f, const std::string& path);

// Position on the unit square with its lattice anchor p = ⌊n·x⌋, q = ⌊m·y⌋.
struct Position {
  double x = 0.0, y = 0.0;
  int p = 0, q = 0;
};

Position make_position(double x, double y, int n, int m);

struct PositionGrid {
  std::vector<Position> positions;
  int divisions = 0;  // 0 when the grid was not built by make_position_grid
};

// d×d positions at the division-cell midpoints of the admissible range
// [(2k+1)/n, (n−2k)/n] × [(2k+1)/m, (m−2k)/m], x-major. Needs n, m ≥ 4k+2.
PositionGrid make_position_grid(int n, int m, int k, int divisions);

// Every anchor must satisfy 2k+1 ≤ p ≤ n−2k (and likewise for q) so that the
// estimation window around it sees only residual-covered cells.
void validate_positions(const PositionGrid& grid, int n, int m, int k);

}  // namespace fieldinfer

#endif  // FIELDINFER_CORE_FIELD_HPP_
