#ifndef FIELDINFER_CORE_HAC_HPP_
#define FIELDINFER_CORE_HAC_HPP_

#include "core/kernels.hpp"
#include "core/smoother.hpp"

namespace fieldinfer {

struct HacConfig {
  double bandwidth = 5.0;
  VarianceKernel kernel = VarianceKernel::gaussian();
  // Lag pairs with |K(s/ℬ)K(t/ℬ)| at or below this are skipped.
  double cutoff = 1e-12;
};

// Kernel-weighted covariance between two window-weight sets over the residual
// field: Σ over all cell pairs of c₁·c₂·ε̂·ε̂·K(Δi/ℬ)K(Δj/ℬ), evaluated by
// summing over lags and the window overlap at each lag.
double hac_cov(const ResidualField& res, const WindowWeights& w1,
               const WindowWeights& w2, const HacConfig& cfg);

// √max(hac_cov(w,w), 0); *clipped reports whether the estimate was negative.
double sigma_hat(const ResidualField& res, const WindowWeights& w,
                 const HacConfig& cfg, bool* clipped = nullptr);

enum class TauMode { kHomogeneous, kHeterogeneous };
const char* tau_mode_name(TauMode mode);
TauMode tau_mode_by_name(const std::string& name);

// Normalizer τ̂: 1 in homogeneous mode, max(σ̂, 1e-8)^(1/3) in heterogeneous.
double tau_hat(double sigma, TauMode mode);

}  // namespace fieldinfer

#endif  // FIELDINFER_CORE_HAC_HPP_
