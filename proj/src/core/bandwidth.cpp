#include "core/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace fieldinfer {

CvResult cv_select_k(const Field& f, const CvConfig& cfg) {
  if (cfg.k_max < 1) throw ConfigError("k_max must be >= 1");
  CvResult out;
  out.scores.assign(cfg.k_max, std::numeric_limits<double>::quiet_NaN());
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= cfg.k_max; k++) {
    if (f.n < 4 * k + 1 || f.m < 4 * k + 1) continue;
    SmootherConfig sc{k, cfg.g};
    const double t_nm = smoothing_constants(sc).t_nm;
    Eigen::MatrixXd surf = nw_surface(f, sc);
    double score = 0.0;
    for (int i = 2 * k + 1; i <= f.n - 2 * k; i++) {
      for (int j = 2 * k + 1; j <= f.m - 2 * k; j++) {
        double x = f.at(i, j);
        // Center term removed from the numerator only; the normalizer keeps
        // the full window.
        double loo = (surf(i - k - 1, j - k - 1) * t_nm - x) / t_nm;
        double d = x - loo;
        score += d * d;
      }
    }
    out.scores[k - 1] = score;
    if (score < best) {
      best = score;
      out.k_best = k;
    }
  }
  if (out.k_best == 0)
    throw BandwidthTooLargeError(
        "no candidate bandwidth leaves a non-empty evaluation interior on a " +
        std::to_string(f.n) + "x" + std::to_string(f.m) + " grid");
  return out;
}

Eigen::MatrixXd vb_weight_matrix(const ResidualField& res,
                                 const SqrtOperator& qn,
                                 const SqrtOperator& qm) {
  const long long interior = static_cast<long long>(res.n - 2 * res.k) *
                             (res.m - 2 * res.k);
  Eigen::MatrixXd a = res.values / static_cast<double>(interior);
  qn.apply_left(a);
  qm.apply_right(a);
  return a;
}

namespace {

Eigen::MatrixXd stream_field(uint64_t seed, StreamPurpose purpose,
                             uint32_t stream, int n, int m) {
  NormalStream z(seed, purpose, stream);
  Eigen::MatrixXd e(n, m);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < m; j++) e(i, j) = z.next();
  return e;
}

double bootstrap_variance(const Eigen::MatrixXd& w, uint64_t seed,
                          StreamPurpose purpose, uint32_t stream_base,
                          int replicates) {
  std::vector<double> gamma(replicates);
  double mean = 0.0;
  for (int b = 0; b < replicates; b++) {
    Eigen::MatrixXd e = stream_field(seed, purpose, stream_base + b,
                                     static_cast<int>(w.rows()),
                                     static_cast<int>(w.cols()));
    gamma[b] = (w.array() * e.array()).sum();
    mean += gamma[b];
  }
  mean /= replicates;
  double var = 0.0;
  for (double g : gamma) var += (g - mean) * (g - mean);
  return var / replicates;
}

}  // namespace

VbResult select_variance_bandwidth(const Field& f, int k, const VbConfig& cfg) {
  if (k < 1) throw ConfigError("smoothing bandwidth must be >= 1");
  if (!(cfg.q > 0.0 && cfg.q < 1.0)) throw ConfigError("q must lie in (0,1)");
  if (cfg.gammas.empty()) throw ConfigError("candidate set is empty");
  for (double g : cfg.gammas)
    if (!(g > 0.0)) throw ConfigError("candidate bandwidths must be positive");
  if (cfg.blocks < 1) throw ConfigError("need at least one block");
  if (cfg.replicates < 2) throw ConfigError("need at least two replicates");
  if (!(cfg.pilot_b > 0.0)) throw ConfigError("pilot bandwidth must be positive");

  std::vector<double> gammas = cfg.gammas;
  std::sort(gammas.begin(), gammas.end());

  SmootherConfig sc{k, cfg.g};
  ResidualField res = residual_field(f, sc);

  SqrtOperator qn = SqrtOperator::automatic(
      build_row(cfg.kernel, f.n, cfg.pilot_b), cfg.dense_limit);
  SqrtOperator qm = SqrtOperator::automatic(
      build_row(cfg.kernel, f.m, cfg.pilot_b), cfg.dense_limit);
  Eigen::MatrixXd w_full = vb_weight_matrix(res, qn, qm);
  const double sigma2 = bootstrap_variance(
      w_full, cfg.seed, StreamPurpose::kVbFullField, 0, cfg.replicates);

  const int side_n = static_cast<int>(std::floor(cfg.q * f.n)) + 1;
  const int side_m = static_cast<int>(std::floor(cfg.q * f.m)) + 1;
  if (side_n < 2 * k + 1 || side_m < 2 * k + 1)
    throw BlockTooSmallError("block side " + std::to_string(side_n) + "x" +
                             std::to_string(side_m) +
                             " cannot hold a window of width " +
                             std::to_string(2 * k + 1) +
                             "; increase q or reduce the smoothing bandwidth");

  VbResult out;
  out.sigma2_star = sigma2;
  out.losses.assign(gammas.size(), 0.0);
  if (cfg.replicates > 0xFFFF || cfg.blocks > 0xFFFF)
    throw ConfigError("replicates and blocks are limited to 65535 here");

  for (int l = 0; l < cfg.blocks; l++) {
    const int range_n = f.n - (side_n - 1);
    const int range_m = f.m - (side_m - 1);
    double u1 = keyed_uniform(cfg.seed, StreamPurpose::kVbBlockCorner,
                              static_cast<uint32_t>(l), 0);
    double u2 = keyed_uniform(cfg.seed, StreamPurpose::kVbBlockCorner,
                              static_cast<uint32_t>(l), 1);
    int row0 = 1 + std::min(range_n - 1, static_cast<int>(u1 * range_n));
    int col0 = 1 + std::min(range_m - 1, static_cast<int>(u2 * range_m));

    Field blk(side_n, side_m);
    for (int i = 1; i <= side_n; i++)
      for (int j = 1; j <= side_m; j++)
        blk.at(i, j) = f.at(row0 + i - 1, col0 + j - 1);
    ResidualField res_blk = residual_field(blk, sc);

    for (size_t c = 0; c < gammas.size(); c++) {
      SqrtOperator qn0 = SqrtOperator::automatic(
          build_row(cfg.kernel, side_n, gammas[c]), cfg.dense_limit);
      SqrtOperator qm0 = SqrtOperator::automatic(
          build_row(cfg.kernel, side_m, gammas[c]), cfg.dense_limit);
      Eigen::MatrixXd w_blk = vb_weight_matrix(res_blk, qn0, qm0);
      // Streams keyed (l, b): candidates share multiplier draws.
      double tau2 = bootstrap_variance(
          w_blk, cfg.seed, StreamPurpose::kVbBlockField,
          static_cast<uint32_t>(l) << 16, cfg.replicates);
      out.losses[c] += (tau2 - sigma2) * (tau2 - sigma2);
    }
  }

  size_t best = 0;
  for (size_t c = 1; c < gammas.size(); c++)
    if (out.losses[c] < out.losses[best]) best = c;
  out.b_best = gammas[best];
  return out;
}

}  // namespace fieldinfer
