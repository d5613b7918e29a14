#ifndef FIELDINFER_CORE_SMOOTHER_HPP_
#define FIELDINFER_CORE_SMOOTHER_HPP_

#include <Eigen/Core>

#include "core/field.hpp"
#include "core/kernels.hpp"

namespace fieldinfer {

struct SmootherConfig {
  int k = 10;
  SmoothingKernel g = SmoothingKernel::quartic();
};

// Product-window constants: t_nm = ΣᵢΣⱼ G(i/k)G(j/k) over the (2k+1)² window,
// b_nm = √(ΣᵢΣⱼ G²G²). Every admissible window is fully interior, so both are
// global constants of (k, G).
struct SmoothingConstants {
  double t_nm = 0.0;
  double b_nm = 0.0;
};
SmoothingConstants smoothing_constants(const SmootherConfig& cfg);

// One fixed dot-product routine shared by the per-point estimator, the surface
// passes and the bootstrap contraction, so identical inputs give bit-identical
// sums regardless of which caller runs them.
double kernel_dot(const double* x, long stride, const double* g, int len);

// Kernel-weighted local average at one position; the anchor must satisfy
// k+1 ≤ p ≤ n−k (and likewise q).
double nw_estimate(const Field& f, const Position& pos,
                   const SmootherConfig& cfg);

// Estimates at every interior lattice point i ∈ [k+1, n−k], j ∈ [k+1, m−k];
// entry (0,0) corresponds to (k+1, k+1).
Eigen::MatrixXd nw_surface(const Field& f, const SmootherConfig& cfg);

// Residuals X − μ̂ on the interior, exact zero outside it.
struct ResidualField {
  Eigen::MatrixXd values;  // n×m, zero-based storage of the 1-based lattice
  int n = 0, m = 0, k = 0;
  bool in_interior(int i, int j) const {
    return i > k && i <= n - k && j > k && j <= m - k;
  }
  double at(int i, int j) const { return values(i - 1, j - 1); }
};
ResidualField residual_field(const Field& f, const SmootherConfig& cfg);
ResidualField residual_from_surface(const Field& f, const SmootherConfig& cfg,
                                    const Eigen::MatrixXd& surface);

// Normalized window weights c at one position: c(i,j) = G((i−p)/k)G((j−q)/k)/b_nm
// on the (2k+1)² window, so Σ c² = 1.
struct WindowWeights {
  int p = 0, q = 0, k = 0;
  double b_nm = 0.0;
  std::vector<double> g;  // {G(t/k)}, t = -k..k
  double at(int i, int j) const {
    return g[i - p + k] * g[j - q + k] / b_nm;
  }
};
WindowWeights window_weights(const Position& pos, const SmootherConfig& cfg,
                             int n, int m);

}  // namespace fieldinfer

#endif  // FIELDINFER_CORE_SMOOTHER_HPP_
