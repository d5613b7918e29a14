#ifndef FIELDINFER_CORE_BOOTSTRAP_HPP_
#define FIELDINFER_CORE_BOOTSTRAP_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "core/field.hpp"
#include "core/hac.hpp"
#include "core/smoother.hpp"
#include "core/toeplitz.hpp"

namespace fieldinfer {

struct BootstrapConfig {
  int replicates = 1000;
  double alpha = 0.05;
  TauMode mode = TauMode::kHomogeneous;
  uint64_t seed = 0;
  SmootherConfig smoother;
  HacConfig hac;
  int threads = 1;
  // Per-dimension switch between dense and FFT square roots.
  int dense_limit = 256;
  // Dense per-position panel cache, used when positions·n·m stays below this
  // and the replicate count exceeds the position count.
  long long cache_limit = 10'000'000;
};

// Per-position local-sum panels W_v = Q⁽ⁿ⁾·A_v·Q⁽ᵐ⁾ with A_v the kernel- and
// residual-weighted window at position v. Replicates only ever need the
// contraction ⟨W_v, E⟩, which equals ⟨A_v, Q⁽ⁿ⁾·E·Q⁽ᵐ⁾⟩ — so the default path
// transforms E once per replicate and sums windows of ε̂ ∘ (QEQ); the dense
// cache materializes every W_v up front instead when that is cheaper.
class LocalSumPanel {
 public:
  LocalSumPanel(const ResidualField& res, const PositionGrid& grid,
                const SmootherConfig& cfg, SqrtOperator qn, SqrtOperator qm,
                long long cache_limit, int replicates);

  int size() const { return static_cast<int>(anchors_.size()); }
  int rows() const { return n_; }
  int cols() const { return m_; }
  bool cached() const { return !cache_.empty(); }

  // out[v] = ⟨W_v, e⟩ for every position.
  void contract(const Eigen::MatrixXd& e, double* out) const;
  // Explicit W_v; also the cache builder.
  Eigen::MatrixXd materialize(int v) const;

 private:
  int n_ = 0, m_ = 0, k_ = 0;
  Eigen::MatrixXd eps_;
  std::vector<double> g_;
  std::vector<std::pair<int, int>> anchors_;  // zero-based window corners
  SqrtOperator qn_, qm_;
  std::vector<Eigen::MatrixXd> cache_;
};

// n×m standard-normal multiplier field for one replicate, keyed (seed, rep).
Eigen::MatrixXd replicate_field(int n, int m, uint64_t seed, int rep);

// Smallest 1-based t with t/b ≥ 1−α.
int quantile_index(int b, double alpha);

struct BootstrapResult {
  PositionGrid grid;
  std::vector<double> estimates;
  std::vector<double> sigma;  // heterogeneous mode only
  std::vector<double> tau;
  std::vector<double> t_samples;  // sorted ascending
  std::vector<double> half_widths;
  double c_quantile = 0.0;
  double alpha = 0.0;
  TauMode mode = TauMode::kHomogeneous;
  int k = 0;
  double b = 0.0;
  uint64_t seed = 0;
  int replicates = 0;
  double t_nm = 0.0, b_nm = 0.0;
  bool variance_clipped = false;

  struct Verdict {
    double statistic = 0.0;
    bool reject = false;
    std::vector<uint8_t> flags;  // per-position exceedance
  };
  std::optional<Verdict> verdict;
};

// Everything that is computed once per dataset; shared by run_lwmb and the
// study drivers (which reuse one panel across normalization modes).
struct Pipeline {
  SmoothingConstants consts;
  Eigen::MatrixXd surface;
  ResidualField res;
  std::vector<double> estimates;
  std::vector<double> sigma;  // filled when need_sigma
  bool variance_clipped = false;
  std::optional<LocalSumPanel> panel;
};
Pipeline build_pipeline(const Field& f, const PositionGrid& grid,
                        const BootstrapConfig& cfg, bool need_sigma);

// Simultaneous confidence bands via the locally weighted multiplier bootstrap.
BootstrapResult run_lwmb(const Field& f, const PositionGrid& grid,
                         const BootstrapConfig& cfg);

// Tests H0: μ = μ0 (values given at the result's positions) with the result's
// bootstrap quantile; fills result.verdict.
void test_mean(BootstrapResult& result, const std::vector<double>& mu0);

}  // namespace fieldinfer

#endif  // FIELDINFER_CORE_BOOTSTRAP_HPP_
