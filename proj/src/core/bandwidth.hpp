#ifndef FIELDINFER_CORE_BANDWIDTH_HPP_
#define FIELDINFER_CORE_BANDWIDTH_HPP_

#include <cstdint>
#include <vector>

#include "core/bootstrap.hpp"
#include "core/field.hpp"
#include "core/kernels.hpp"

namespace fieldinfer {

struct CvConfig {
  int k_max = 20;
  SmoothingKernel g = SmoothingKernel::quartic();
};

struct CvResult {
  int k_best = 0;
  // Leave-one-out score per candidate k = 1..k_max; NaN where the grid is too
  // small for the candidate.
  std::vector<double> scores;
};

// Leave-one-out cross-validation for the smoothing bandwidth: for each k the
// estimate at (i,j) omits the center observation but keeps the full-window
// normalizer; the score sums squared deviations over the double-margin
// interior i,j ∈ [2k+1, n−2k]. Ties pick the smallest k.
CvResult cv_select_k(const Field& f, const CvConfig& cfg);

struct VbConfig {
  double pilot_b = 5.0;
  std::vector<double> gammas = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double q = 0.1;
  int blocks = 15;
  int replicates = 200;
  uint64_t seed = 0;
  SmoothingKernel g = SmoothingKernel::quartic();
  VarianceKernel kernel = VarianceKernel::gaussian();
  int dense_limit = 256;
};

struct VbResult {
  double b_best = 0.0;
  std::vector<double> losses;  // per candidate, same order as gammas
  double sigma2_star = 0.0;    // full-field bootstrap variance at the pilot
};

// Interior-mean weight matrix W = Q·A·Q with A = ε̂/N on the interior; the
// bootstrap residual mean for a multiplier field E is then γ* = ⟨W, E⟩, i.e.
// the interior mean of ε̂ ∘ (Q·E·Q). This is the single place that fixes what
// "bootstrap residuals" means for the block method.
Eigen::MatrixXd vb_weight_matrix(const ResidualField& res,
                                 const SqrtOperator& qn,
                                 const SqrtOperator& qm);

// Block-matching selection of the variance bandwidth: match block-level
// bootstrap variances against the full-field pilot variance over random
// blocks of side ⌊qn⌋+1; smallest loss wins, ties pick the smallest ℬ.
VbResult select_variance_bandwidth(const Field& f, int k, const VbConfig& cfg);

}  // namespace fieldinfer

#endif  // FIELDINFER_CORE_BANDWIDTH_HPP_
