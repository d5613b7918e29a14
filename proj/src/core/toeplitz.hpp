#ifndef FIELDINFER_CORE_TOEPLITZ_HPP_
#define FIELDINFER_CORE_TOEPLITZ_HPP_

#include <Eigen/Core>
#include <vector>

#include "core/kernels.hpp"

namespace fieldinfer {

// First row of the Toeplitz kernel matrix: entry t = K(t/ℬ).
struct ToeplitzKernelRow {
  int size = 0;
  double bandwidth = 0.0;
  std::vector<double> first_row;
  // Retained so the circulant embedding can evaluate K past lag size-1.
  VarianceKernel kernel = VarianceKernel::gaussian();
};

ToeplitzKernelRow build_row(const VarianceKernel& k, int size, double bandwidth);

// Symmetric square root Q of the Toeplitz matrix T built from a kernel row.
//
// Dense mode: eigendecomposition with negative eigenvalues clipped at zero;
// Q = U·√Λ·Uᵀ, stored symmetric.
//
// FFT mode: circulant embedding of length L = next power of two ≥ 2n, spectral
// root with clipping, apply = FFT·multiply·inverse-FFT·truncate — plus dense
// corner corrections. A bare restricted circulant is translation invariant and
// misses the boundary rows of the true square root by O(1), so the corner
// difference (dense − circulant) is precomputed on ℬ-scaled patches from a
// bounded-size dense subproblem and added back after the spectral apply; when
// the patches would overlap the payload falls back to the exact dense matrix.
class SqrtOperator {
 public:
  enum class Mode { kDense, kFft };
  static constexpr int kDenseCap = 2048;

  static SqrtOperator dense(const ToeplitzKernelRow& row);
  static SqrtOperator fft(const ToeplitzKernelRow& row);
  // Dense when size ≤ dense_limit, FFT beyond.
  static SqrtOperator automatic(const ToeplitzKernelRow& row,
                                int dense_limit = 256);

  int size() const { return n_; }
  Mode mode() const { return mode_; }

  void apply(const double* in, double* out) const;  // out = Q·in
  void apply_left(Eigen::MatrixXd& mat) const;      // mat ← Q·mat
  void apply_right(Eigen::MatrixXd& mat) const;     // mat ← mat·Q

  // Dense payload; available in dense mode and in the FFT fallback regime.
  bool has_matrix() const { return q_.size() > 0; }
  const Eigen::MatrixXd& matrix() const;

 private:
  SqrtOperator() = default;
  Mode mode_ = Mode::kDense;
  int n_ = 0;
  Eigen::MatrixXd q_;           // dense payload
  std::vector<double> root_;    // circulant spectral root, length big_
  Eigen::MatrixXd corner_;      // top-left correction patch (w_ × w2_)
  int w_ = 0, w2_ = 0;
  size_t big_ = 0;
};

}  // namespace fieldinfer

#endif  // FIELDINFER_CORE_TOEPLITZ_HPP_
