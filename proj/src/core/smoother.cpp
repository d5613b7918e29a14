#include "core/smoother.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace fieldinfer {

SmoothingConstants smoothing_constants(const SmootherConfig& cfg) {
  std::vector<double> g = cfg.g.window(cfg.k);
  SmoothingConstants c;
  double b2 = 0.0;
  for (size_t i = 0; i < g.size(); i++) {
    for (size_t j = 0; j < g.size(); j++) {
      double w = g[i] * g[j];
      c.t_nm += w;
      b2 += w * w;
    }
  }
  c.b_nm = std::sqrt(b2);
  if (!(c.t_nm > 0.0))
    throw ConfigError("smoothing kernel window sums to zero");
  return c;
}

#if defined(__GNUC__)
__attribute__((noinline))
#endif
double kernel_dot(const double* x, long stride, const double* g, int len) {
  double acc = 0.0;
  for (int t = 0; t < len; t++) acc += g[t] * x[t * stride];
  return acc;
}

namespace {

void check_bandwidth(int k, int n, int m) {
  if (k < 1) throw ConfigError("smoothing bandwidth must be >= 1");
  if (2 * k + 1 > n || 2 * k + 1 > m)
    throw BandwidthTooLargeError("window width " + std::to_string(2 * k + 1) +
                                 " exceeds grid " + std::to_string(n) + "x" +
                                 std::to_string(m));
}

}  // namespace

double nw_estimate(const Field& f, const Position& pos,
                   const SmootherConfig& cfg) {
  const int k = cfg.k;
  check_bandwidth(k, f.n, f.m);
  if (pos.p < k + 1 || pos.p > f.n - k || pos.q < k + 1 || pos.q > f.m - k)
    throw BoundaryError("window at anchor (" + std::to_string(pos.p) + "," +
                        std::to_string(pos.q) + ") leaves the lattice");
  std::vector<double> g = cfg.g.window(k);
  const int len = 2 * k + 1;
  std::vector<double> h(len);
  for (int u = 0; u < len; u++) {
    const double* row = &f.values[static_cast<size_t>(pos.p - 1 - k + u) * f.m +
                                  (pos.q - 1 - k)];
    h[u] = kernel_dot(row, 1, g.data(), len);
  }
  double num = kernel_dot(h.data(), 1, g.data(), len);
  return num / smoothing_constants(cfg).t_nm;
}

Eigen::MatrixXd nw_surface(const Field& f, const SmootherConfig& cfg) {
  const int k = cfg.k;
  check_bandwidth(k, f.n, f.m);
  std::vector<double> g = cfg.g.window(k);
  const int len = 2 * k + 1;
  const int rows = f.n - 2 * k, cols = f.m - 2 * k;
  const double t_nm = smoothing_constants(cfg).t_nm;

  // Horizontal pass: h(i, c) = Σ_w g[w]·X(i, c+w), row-major like the field.
  std::vector<double> h(static_cast<size_t>(f.n) * cols);
  for (int i = 0; i < f.n; i++) {
    const double* row = &f.values[static_cast<size_t>(i) * f.m];
    double* out = &h[static_cast<size_t>(i) * cols];
    for (int c = 0; c < cols; c++) out[c] = kernel_dot(row + c, 1, g.data(), len);
  }
  // Vertical pass down each column of h, same dot routine, same order.
  Eigen::MatrixXd surf(rows, cols);
  for (int r = 0; r < rows; r++)
    for (int c = 0; c < cols; c++)
      surf(r, c) = kernel_dot(&h[static_cast<size_t>(r) * cols + c], cols,
                              g.data(), len) /
                   t_nm;
  return surf;
}

ResidualField residual_from_surface(const Field& f, const SmootherConfig& cfg,
                                    const Eigen::MatrixXd& surface) {
  ResidualField res;
  res.n = f.n;
  res.m = f.m;
  res.k = cfg.k;
  res.values = Eigen::MatrixXd::Zero(f.n, f.m);
  const int k = cfg.k;
  for (int r = 0; r < surface.rows(); r++)
    for (int c = 0; c < surface.cols(); c++)
      res.values(k + r, k + c) = f.values[static_cast<size_t>(k + r) * f.m +
                                          (k + c)] -
                                 surface(r, c);
  return res;
}

ResidualField residual_field(const Field& f, const SmootherConfig& cfg) {
  return residual_from_surface(f, cfg, nw_surface(f, cfg));
}

WindowWeights window_weights(const Position& pos, const SmootherConfig& cfg,
                             int n, int m) {
  const int k = cfg.k;
  check_bandwidth(k, n, m);
  if (pos.p < k + 1 || pos.p > n - k || pos.q < k + 1 || pos.q > m - k)
    throw BoundaryError("weight window at anchor (" + std::to_string(pos.p) +
                        "," + std::to_string(pos.q) + ") leaves the lattice");
  WindowWeights w;
  w.p = pos.p;
  w.q = pos.q;
  w.k = k;
  w.g = cfg.g.window(k);
  w.b_nm = smoothing_constants(cfg).b_nm;
  return w;
}

}  // namespace fieldinfer
