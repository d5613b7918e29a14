#include "core/hac.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace fieldinfer {

namespace {

void check_support(const ResidualField& res, const WindowWeights& w,
                   const char* which) {
  // The weight window must sit inside the residual interior, otherwise the
  // products would touch cells where ε̂ was never estimated.
  if (w.p - w.k < res.k + 1 || w.p + w.k > res.n - res.k ||
      w.q - w.k < res.k + 1 || w.q + w.k > res.m - res.k)
    throw BoundaryError(std::string(which) +
                        " weight window extends outside the residual interior");
}

}  // namespace

double hac_cov(const ResidualField& res, const WindowWeights& w1,
               const WindowWeights& w2, const HacConfig& cfg) {
  if (w1.k != w2.k)
    throw ConfigError("hac_cov needs both windows at the same bandwidth");
  if (!(cfg.bandwidth > 0.0))
    throw ConfigError("variance bandwidth must be positive");
  check_support(res, w1, "first");
  check_support(res, w2, "second");

  const int k = w1.k;
  const double b = cfg.bandwidth;
  double total = 0.0;
  for (int s = (w2.p - w1.p) - 2 * k; s <= (w2.p - w1.p) + 2 * k; s++) {
    double ks = cfg.kernel(static_cast<double>(s) / b);
    if (std::fabs(ks) <= cfg.cutoff) continue;
    const int i_lo = std::max(w1.p - k, w2.p - k - s);
    const int i_hi = std::min(w1.p + k, w2.p + k - s);
    if (i_lo > i_hi) continue;
    for (int t = (w2.q - w1.q) - 2 * k; t <= (w2.q - w1.q) + 2 * k; t++) {
      double kst = ks * cfg.kernel(static_cast<double>(t) / b);
      if (std::fabs(kst) <= cfg.cutoff) continue;
      const int j_lo = std::max(w1.q - k, w2.q - k - t);
      const int j_hi = std::min(w1.q + k, w2.q + k - t);
      if (j_lo > j_hi) continue;
      double acc = 0.0;
      for (int i = i_lo; i <= i_hi; i++)
        for (int j = j_lo; j <= j_hi; j++)
          acc += w1.at(i, j) * w2.at(i + s, j + t) * res.at(i, j) *
                 res.at(i + s, j + t);
      total += kst * acc;
    }
  }
  return total;
}

double sigma_hat(const ResidualField& res, const WindowWeights& w,
                 const HacConfig& cfg, bool* clipped) {
  double v = hac_cov(res, w, w, cfg);
  if (clipped) *clipped = v < 0.0;
  return std::sqrt(std::max(v, 0.0));
}

const char* tau_mode_name(TauMode mode) {
  return mode == TauMode::kHomogeneous ? "homogeneous" : "heterogeneous";
}

TauMode tau_mode_by_name(const std::string& name) {
  if (name == "homogeneous") return TauMode::kHomogeneous;
  if (name == "heterogeneous") return TauMode::kHeterogeneous;
  throw ConfigError("unknown mode \"" + name +
                    "\" (homogeneous or heterogeneous)");
}

double tau_hat(double sigma, TauMode mode) {
  if (mode == TauMode::kHomogeneous) return 1.0;
  return std::cbrt(std::max(sigma, 1e-8));
}

}  // namespace fieldinfer
