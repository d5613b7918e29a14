#include "core/kernels.hpp"

#include <cmath>
#include <cstdio>

#include "core/errors.hpp"
#include "core/fft.hpp"

namespace fieldinfer {

SmoothingKernel SmoothingKernel::quartic() {
  return SmoothingKernel(Id::kQuartic, "quartic");
}
SmoothingKernel SmoothingKernel::triangular() {
  return SmoothingKernel(Id::kTriangular, "triangular");
}
SmoothingKernel SmoothingKernel::uniform() {
  return SmoothingKernel(Id::kUniform, "uniform");
}

SmoothingKernel SmoothingKernel::tabulated(std::vector<double> samples) {
  if (samples.size() < 2)
    throw ConfigError("tabulated kernel needs at least 2 samples");
  if (samples.front() != 1.0)
    throw ConfigError("tabulated kernel must have G(0) = 1");
  for (double s : samples)
    if (!(s >= 0.0) || !std::isfinite(s))
      throw ConfigError("tabulated kernel samples must be finite and >= 0");
  SmoothingKernel k(Id::kTabulated, "tabulated");
  k.samples_ = std::move(samples);
  return k;
}

SmoothingKernel SmoothingKernel::by_name(const std::string& name) {
  if (name == "quartic") return quartic();
  if (name == "triangular") return triangular();
  if (name == "uniform") return uniform();
  throw ConfigError("unknown smoothing kernel \"" + name +
                    "\" (choose quartic, triangular or uniform)");
}

double SmoothingKernel::operator()(double x) const {
  double a = std::fabs(x);
  if (a > 1.0) return 0.0;
  switch (id_) {
    case Id::kQuartic: {
      double u = 1.0 - a * a;
      return u * u;
    }
    case Id::kTriangular:
      return 1.0 - a;
    case Id::kUniform:
      return 1.0;
    case Id::kTabulated: {
      double t = a * static_cast<double>(samples_.size() - 1);
      size_t lo = static_cast<size_t>(t);
      if (lo >= samples_.size() - 1) return samples_.back();
      double frac = t - static_cast<double>(lo);
      return samples_[lo] * (1.0 - frac) + samples_[lo + 1] * frac;
    }
  }
  return 0.0;
}

std::vector<double> SmoothingKernel::window(int k) const {
  if (k < 1) throw ConfigError("smoothing bandwidth must be >= 1");
  std::vector<double> g(2 * k + 1);
  for (int t = -k; t <= k; t++)
    g[t + k] = (*this)(static_cast<double>(t) / static_cast<double>(k));
  return g;
}

VarianceKernel VarianceKernel::gaussian() {
  return VarianceKernel("gaussian",
                        [](double x) { return std::exp(-0.5 * x * x); });
}

VarianceKernel VarianceKernel::custom(std::string name,
                                      std::function<double(double)> fn) {
  if (!fn) throw ConfigError("custom variance kernel has no function");
  return VarianceKernel(std::move(name), std::move(fn));
}

VarianceKernel VarianceKernel::by_name(const std::string& name) {
  if (name == "gaussian") return gaussian();
  throw ConfigError("unknown variance kernel \"" + name +
                    "\" (built-in: gaussian)");
}

std::string KernelValidity::summary() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "symmetric=%d unit_at_zero=%d in_range=%d nonincreasing=%d "
                "fourier_nonneg=%d (min_fourier=%.3e)",
                symmetric, unit_at_zero, in_range, nonincreasing,
                fourier_nonneg, min_fourier);
  return buf;
}

KernelValidity validate_variance_kernel(const VarianceKernel& k,
                                        int grid_points, double extent) {
  if (grid_points < 16 || !is_pow2(static_cast<size_t>(grid_points)))
    throw ConfigError("grid_points must be a power of two >= 16");
  if (!(extent > 0.0)) throw ConfigError("extent must be positive");

  KernelValidity out;
  const int n = grid_points;
  const double delta = 2.0 * extent / n;

  if (std::fabs(k(0.0) - 1.0) > 1e-12) out.unit_at_zero = false;

  double prev = k(0.0);
  for (int t = 0; t <= n / 2; t++) {
    double x = delta * t;
    double v = k(x);
    if (!std::isfinite(v) || v < -1e-12 || v > 1.0 + 1e-12) out.in_range = false;
    if (std::fabs(v - k(-x)) > 1e-12) out.symmetric = false;
    if (v > prev + 1e-12) out.nonincreasing = false;
    prev = v;
  }

  // Wrap-around sample order makes the DFT of an even kernel real; negative
  // coefficients expose an invalid (non-PSD) kernel.
  std::vector<std::complex<double>> s(n);
  for (int j = 0; j < n; j++) {
    int d = j <= n / 2 ? j : j - n;
    s[j] = k(delta * d);
  }
  fft(s, false);
  double min_re = s[0].real();
  for (int j = 1; j < n; j++) min_re = std::min(min_re, s[j].real());
  out.min_fourier = min_re;
  out.fourier_nonneg = min_re >= -1e-8;
  return out;
}

}  // namespace fieldinfer
