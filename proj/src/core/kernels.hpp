#ifndef FIELDINFER_CORE_KERNELS_HPP_
#define FIELDINFER_CORE_KERNELS_HPP_

#include <functional>
#include <string>
#include <vector>

namespace fieldinfer {

// Smoothing kernel G: symmetric, supported on [-1,1], G(0) = 1.
class SmoothingKernel {
 public:
  static SmoothingKernel quartic();     // (1-x²)²
  static SmoothingKernel triangular();  // 1-|x|
  static SmoothingKernel uniform();     // 1 on [-1,1]
  // Samples of G on an equispaced grid over [0,1], linearly interpolated;
  // samples.front() must be 1.
  static SmoothingKernel tabulated(std::vector<double> samples);
  static SmoothingKernel by_name(const std::string& name);

  double operator()(double x) const;
  const std::string& name() const { return name_; }
  // {G(t/k)}_{t=-k..k}; the shared window vector used by every estimator loop.
  std::vector<double> window(int k) const;

 private:
  enum class Id { kQuartic, kTriangular, kUniform, kTabulated };
  SmoothingKernel(Id id, std::string name) : id_(id), name_(std::move(name)) {}
  Id id_;
  std::string name_;
  std::vector<double> samples_;
};

// Variance kernel K: symmetric, K(0)=1, values in [0,1], non-increasing on
// [0,∞), nonnegative Fourier transform.
class VarianceKernel {
 public:
  static VarianceKernel gaussian();  // exp(-x²/2)
  static VarianceKernel custom(std::string name,
                               std::function<double(double)> fn);
  static VarianceKernel by_name(const std::string& name);

  double operator()(double x) const { return fn_(x); }
  const std::string& name() const { return name_; }

 private:
  VarianceKernel(std::string name, std::function<double(double)> fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}
  std::string name_;
  std::function<double(double)> fn_;
};

struct KernelValidity {
  bool symmetric = true;
  bool unit_at_zero = true;
  bool in_range = true;
  bool nonincreasing = true;
  bool fourier_nonneg = true;
  double min_fourier = 0.0;  // most negative sampled DFT coefficient
  bool pass() const {
    return symmetric && unit_at_zero && in_range && nonincreasing &&
           fourier_nonneg;
  }
  std::string summary() const;
};

// Samples K on [-extent, extent) at grid_points points (power of two) and
// checks the definition's requirements; FK ≥ 0 via the sampled DFT with a
// -1e-8 tolerance.
KernelValidity validate_variance_kernel(const VarianceKernel& k,
                                        int grid_points = 512,
                                        double extent = 16.0);

}  // namespace fieldinfer

#endif  // FIELDINFER_CORE_KERNELS_HPP_
