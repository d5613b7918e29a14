#include "core/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/threading.hpp"

namespace fieldinfer {

LocalSumPanel::LocalSumPanel(const ResidualField& res, const PositionGrid& grid,
                             const SmootherConfig& cfg, SqrtOperator qn,
                             SqrtOperator qm, long long cache_limit,
                             int replicates)
    : n_(res.n),
      m_(res.m),
      k_(cfg.k),
      eps_(res.values),
      g_(cfg.g.window(cfg.k)),
      qn_(std::move(qn)),
      qm_(std::move(qm)) {
  if (qn_.size() != n_ || qm_.size() != m_)
    throw ShapeError("square-root operators do not match the field shape");
  validate_positions(grid, n_, m_, k_);
  anchors_.reserve(grid.positions.size());
  for (const Position& pos : grid.positions)
    anchors_.emplace_back(pos.p - 1 - k_, pos.q - 1 - k_);

  const long long v = static_cast<long long>(anchors_.size());
  if (v * n_ * m_ <= cache_limit && v < replicates) {
    cache_.reserve(anchors_.size());
    for (int i = 0; i < size(); i++) cache_.push_back(materialize(i));
  }
}

Eigen::MatrixXd LocalSumPanel::materialize(int v) const {
  const auto [r0, c0] = anchors_[v];
  const int len = 2 * k_ + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, m_);
  for (int u = 0; u < len; u++)
    for (int w = 0; w < len; w++)
      a(r0 + u, c0 + w) = g_[u] * g_[w] * eps_(r0 + u, c0 + w);
  qn_.apply_left(a);
  qm_.apply_right(a);
  return a;
}

void LocalSumPanel::contract(const Eigen::MatrixXd& e, double* out) const {
  if (e.rows() != n_ || e.cols() != m_)
    throw ShapeError("multiplier field has the wrong shape");
  if (cached()) {
    for (int v = 0; v < size(); v++)
      out[v] = (cache_[v].array() * e.array()).sum();
    return;
  }
  Eigen::MatrixXd f = e;
  qn_.apply_left(f);
  qm_.apply_right(f);
  const int len = 2 * k_ + 1;
  std::vector<double> prod(len), h(len);
  for (int v = 0; v < size(); v++) {
    const auto [r0, c0] = anchors_[v];
    for (int u = 0; u < len; u++) {
      for (int w = 0; w < len; w++)
        prod[w] = eps_(r0 + u, c0 + w) * f(r0 + u, c0 + w);
      h[u] = kernel_dot(prod.data(), 1, g_.data(), len);
    }
    out[v] = kernel_dot(h.data(), 1, g_.data(), len);
  }
}

Eigen::MatrixXd replicate_field(int n, int m, uint64_t seed, int rep) {
  NormalStream z(seed, StreamPurpose::kBootstrapReplicate,
                 static_cast<uint32_t>(rep));
  Eigen::MatrixXd e(n, m);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < m; j++) e(i, j) = z.next();
  return e;
}

int quantile_index(int b, double alpha) {
  if (b < 1) throw ConfigError("need at least one replicate");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("alpha must lie in (0,1)");
  int t = static_cast<int>(std::ceil((1.0 - alpha) * b));
  t = std::clamp(t, 1, b);
  // Guard the ceil against floating-point edge cases in either direction.
  while (t > 1 && static_cast<double>(t - 1) / b >= 1.0 - alpha) t--;
  while (t < b && static_cast<double>(t) / b < 1.0 - alpha) t++;
  return t;
}

Pipeline build_pipeline(const Field& f, const PositionGrid& grid,
                        const BootstrapConfig& cfg, bool need_sigma) {
  if (cfg.replicates < 1) throw ConfigError("need at least one replicate");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw ConfigError("alpha must lie in (0,1)");
  validate_positions(grid, f.n, f.m, cfg.smoother.k);

  Pipeline pl;
  pl.consts = smoothing_constants(cfg.smoother);
  pl.surface = nw_surface(f, cfg.smoother);
  pl.res = residual_from_surface(f, cfg.smoother, pl.surface);

  const int k = cfg.smoother.k;
  const int count = static_cast<int>(grid.positions.size());
  pl.estimates.resize(count);
  for (int v = 0; v < count; v++) {
    const Position& pos = grid.positions[v];
    pl.estimates[v] = pl.surface(pos.p - 1 - k, pos.q - 1 - k);
  }

  if (need_sigma) {
    pl.sigma.resize(count);
    std::vector<uint8_t> clipped(count, 0);
    const int threads = std::max(1, cfg.threads);
    parallel_for(0, count, threads, [&](int v) {
      WindowWeights w = window_weights(grid.positions[v], cfg.smoother, f.n, f.m);
      bool clip = false;
      pl.sigma[v] = sigma_hat(pl.res, w, cfg.hac, &clip);
      clipped[v] = clip;
    });
    for (uint8_t c : clipped) pl.variance_clipped |= (c != 0);
  }

  ToeplitzKernelRow row_n = build_row(cfg.hac.kernel, f.n, cfg.hac.bandwidth);
  ToeplitzKernelRow row_m = build_row(cfg.hac.kernel, f.m, cfg.hac.bandwidth);
  SqrtOperator qn = SqrtOperator::automatic(row_n, cfg.dense_limit);
  SqrtOperator qm = SqrtOperator::automatic(row_m, cfg.dense_limit);
  pl.panel.emplace(pl.res, grid, cfg.smoother, std::move(qn), std::move(qm),
                   cfg.cache_limit, cfg.replicates);
  return pl;
}

BootstrapResult run_lwmb(const Field& f, const PositionGrid& grid,
                         const BootstrapConfig& cfg) {
  const bool hetero = cfg.mode == TauMode::kHeterogeneous;
  Pipeline pl = build_pipeline(f, grid, cfg, hetero);
  const int count = static_cast<int>(grid.positions.size());

  BootstrapResult out;
  out.grid = grid;
  out.estimates = pl.estimates;
  out.alpha = cfg.alpha;
  out.mode = cfg.mode;
  out.k = cfg.smoother.k;
  out.b = cfg.hac.bandwidth;
  out.seed = cfg.seed;
  out.replicates = cfg.replicates;
  out.t_nm = pl.consts.t_nm;
  out.b_nm = pl.consts.b_nm;
  out.variance_clipped = pl.variance_clipped;
  if (hetero) out.sigma = pl.sigma;
  out.tau.resize(count);
  for (int v = 0; v < count; v++)
    out.tau[v] = tau_hat(hetero ? pl.sigma[v] : 0.0, cfg.mode);

  const int threads = std::max(1, cfg.threads);
  out.t_samples.resize(cfg.replicates);
  parallel_for(0, cfg.replicates, threads, [&](int r) {
    Eigen::MatrixXd e = replicate_field(f.n, f.m, cfg.seed, r);
    std::vector<double> inc(count);
    pl.panel->contract(e, inc.data());
    double t = 0.0;
    for (int v = 0; v < count; v++)
      t = std::max(t, std::fabs(inc[v]) / pl.consts.b_nm / out.tau[v]);
    out.t_samples[r] = t;
  });
  std::sort(out.t_samples.begin(), out.t_samples.end());
  out.c_quantile = out.t_samples[quantile_index(cfg.replicates, cfg.alpha) - 1];

  out.half_widths.resize(count);
  for (int v = 0; v < count; v++)
    out.half_widths[v] =
        pl.consts.b_nm * out.tau[v] / pl.consts.t_nm * out.c_quantile;
  return out;
}

void test_mean(BootstrapResult& result, const std::vector<double>& mu0) {
  if (mu0.size() != result.estimates.size())
    throw ShapeError("null values do not match the position count");
  BootstrapResult::Verdict verdict;
  verdict.flags.resize(mu0.size());
  for (size_t v = 0; v < mu0.size(); v++) {
    double dev = result.t_nm * std::fabs(result.estimates[v] - mu0[v]) /
                 (result.b_nm * result.tau[v]);
    verdict.flags[v] = dev > result.c_quantile;
    verdict.statistic = std::max(verdict.statistic, dev);
  }
  verdict.reject = verdict.statistic > result.c_quantile;
  result.verdict = verdict;
}

}  // namespace fieldinfer
