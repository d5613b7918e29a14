#include "core/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "core/bandwidth.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/threading.hpp"

namespace fieldinfer {

namespace {
// Keeps lattice-keyed counters positive down to the deepest burn-in margin.
constexpr uint32_t kLatticeOffset = 1u << 20;
constexpr int kArMargin = 150;
}  // namespace

double MeanField::operator()(double x, double y) const {
  switch (kind) {
    case Kind::kZero:
      return 0.0;
    case Kind::kElliptical:
      return 1.0 - (1.5 * (x - 0.5) * (x - 0.5) + 6.0 * (y - 0.5) * (y - 0.5));
    case Kind::kSinusoidal: {
      double s = std::sin(2.0 * (x - 0.6));
      double c = std::cos(3.0 * (y - 0.3));
      return s * s + c * c + s * c;
    }
    case Kind::kDisc: {
      double dx = x - disc.cx, dy = y - disc.cy;
      return dx * dx + dy * dy <= disc.radius * disc.radius ? disc.height : 0.0;
    }
  }
  return 0.0;
}

MeanField MeanField::by_name(const std::string& name, const DiscSpec& disc) {
  MeanField m;
  m.disc = disc;
  if (name == "zero") m.kind = Kind::kZero;
  else if (name == "elliptical") m.kind = Kind::kElliptical;
  else if (name == "sinusoidal") m.kind = Kind::kSinusoidal;
  else if (name == "disc") m.kind = Kind::kDisc;
  else
    throw ConfigError("unknown mean field \"" + name +
                      "\" (zero, elliptical, sinusoidal, disc)");
  return m;
}

const char* MeanField::name() const {
  switch (kind) {
    case Kind::kZero: return "zero";
    case Kind::kElliptical: return "elliptical";
    case Kind::kSinusoidal: return "sinusoidal";
    case Kind::kDisc: return "disc";
  }
  return "?";
}

NoiseKind noise_by_name(const std::string& name) {
  if (name == "iid") return NoiseKind::kIid;
  if (name == "ar") return NoiseKind::kAr;
  if (name == "ma") return NoiseKind::kMa;
  throw ConfigError("unknown noise \"" + name + "\" (iid, ar, ma)");
}

const char* noise_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kIid: return "iid";
    case NoiseKind::kAr: return "ar";
    case NoiseKind::kMa: return "ma";
  }
  return "?";
}

namespace {

inline std::pair<double, double> lattice_normals(uint64_t seed, int i, int j) {
  return normal_pair(seed, StreamPurpose::kNoiseField,
                     static_cast<uint32_t>(j) + kLatticeOffset,
                     static_cast<uint32_t>(i) + kLatticeOffset);
}

Eigen::MatrixXd iid_noise(int n, int m, uint64_t seed) {
  Eigen::MatrixXd e(n, m);
  for (int i = 1; i <= n; i++)
    for (int j = 1; j <= m; j++)
      e(i - 1, j - 1) = lattice_normals(seed, i, j).first;
  return e;
}

// Product innovations with |i/n − j/m|-dependent scales.
inline double product_innovation(uint64_t seed, int i, int j, int n, int m,
                                 double a1, double b1, double a2, double b2) {
  double r = std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m);
  auto [z1, z2] = lattice_normals(seed, i, j);
  return (a1 + b1 * r) * z1 * (a2 + b2 * r) * z2;
}

Eigen::MatrixXd ma_noise(int n, int m, uint64_t seed) {
  // f ≡ 0 outside [1,n]×[1,m]; one previous row suffices.
  Eigen::MatrixXd eps(n, m);
  std::vector<double> prev(m + 1, 0.0), cur(m + 1, 0.0);
  for (int i = 1; i <= n; i++) {
    for (int j = 1; j <= m; j++)
      cur[j] = product_innovation(seed, i, j, n, m, 1.2, -0.5, 1.2, -0.7);
    for (int j = 1; j <= m; j++)
      eps(i - 1, j - 1) = cur[j] + 0.3 * prev[j] - 0.4 * cur[j - 1] -
                          0.2 * prev[j - 1];
    std::swap(prev, cur);
  }
  return eps;
}

}  // namespace

Eigen::MatrixXd simulate_ar_noise(int n, int m, uint64_t seed, int margin) {
  if (margin < 0 || margin >= static_cast<int>(kLatticeOffset) - 1)
    throw ConfigError("ar burn-in margin out of range");
  Eigen::MatrixXd eps(n, m);
  const int width = m + margin;  // columns 1-margin .. m
  std::vector<double> prev(width + 1, 0.0), cur(width + 1, 0.0);
  for (int i = 1 - margin; i <= n; i++) {
    for (int j = 1 - margin; j <= m; j++) {
      const int jj = j - (1 - margin) + 1;  // 1-based row offset
      double e = product_innovation(seed, i, j, n, m, 0.7, 0.5, 0.5, 0.7);
      cur[jj] = e + 0.3 * prev[jj] - 0.4 * cur[jj - 1] - 0.2 * prev[jj - 1];
    }
    if (i >= 1)
      for (int j = 1; j <= m; j++)
        eps(i - 1, j - 1) = cur[j - (1 - margin) + 1];
    std::swap(prev, cur);
  }
  return eps;
}

Eigen::MatrixXd simulate_noise(NoiseKind kind, int n, int m, uint64_t seed) {
  if (n < 1 || m < 1) throw ConfigError("lattice must be at least 1x1");
  switch (kind) {
    case NoiseKind::kIid: return iid_noise(n, m, seed);
    case NoiseKind::kAr: return simulate_ar_noise(n, m, seed, kArMargin);
    case NoiseKind::kMa: return ma_noise(n, m, seed);
  }
  throw ConfigError("bad noise kind");
}

Field simulate_dataset(const MeanField& mean, NoiseKind noise, int n, int m,
                       uint64_t seed) {
  Eigen::MatrixXd eps = simulate_noise(noise, n, m, seed);
  Field f(n, m);
  for (int i = 1; i <= n; i++)
    for (int j = 1; j <= m; j++)
      f.at(i, j) = mean(static_cast<double>(i) / n,
                        static_cast<double>(j) / m) +
                   eps(i - 1, j - 1);
  return f;
}

namespace {

struct SimOutcome {
  std::vector<uint8_t> event;   // covered (coverage) or rejected (test)
  std::vector<double> width;
};

void check_study(const StudyConfig& cfg) {
  if (cfg.sims < 1) throw ConfigError("need at least one simulation");
  if (cfg.modes.empty()) throw ConfigError("no normalization modes requested");
}

// One dataset through the shared pipeline; per-mode quantiles from one set of
// replicate draws. on_mode(mode_index, result) consumes the per-mode result.
template <typename Fn>
void run_modes(const Field& x, const StudyConfig& cfg, int k, double b,
               uint64_t bseed, Fn&& on_mode) {
  PositionGrid grid = make_position_grid(x.n, x.m, k, cfg.divisions);
  BootstrapConfig bc;
  bc.replicates = cfg.replicates;
  bc.alpha = cfg.alpha;
  bc.seed = bseed;
  bc.smoother = {k, cfg.g};
  bc.hac = {b, cfg.kernel};
  bc.threads = 1;
  bool need_sigma = false;
  for (TauMode mode : cfg.modes)
    need_sigma |= (mode == TauMode::kHeterogeneous);
  Pipeline pl = build_pipeline(x, grid, bc, need_sigma);
  const int count = static_cast<int>(grid.positions.size());

  std::vector<std::vector<double>> tau(cfg.modes.size());
  for (size_t mi = 0; mi < cfg.modes.size(); mi++) {
    tau[mi].resize(count);
    for (int v = 0; v < count; v++)
      tau[mi][v] = tau_hat(
          cfg.modes[mi] == TauMode::kHeterogeneous ? pl.sigma[v] : 0.0,
          cfg.modes[mi]);
  }

  std::vector<std::vector<double>> tstat(cfg.modes.size());
  for (auto& t : tstat) t.resize(cfg.replicates);
  std::vector<double> inc(count);
  for (int r = 0; r < cfg.replicates; r++) {
    Eigen::MatrixXd e = replicate_field(x.n, x.m, bseed, r);
    pl.panel->contract(e, inc.data());
    for (size_t mi = 0; mi < cfg.modes.size(); mi++) {
      double t = 0.0;
      for (int v = 0; v < count; v++)
        t = std::max(t, std::fabs(inc[v]) / pl.consts.b_nm / tau[mi][v]);
      tstat[mi][r] = t;
    }
  }

  const int qi = quantile_index(cfg.replicates, cfg.alpha);
  for (size_t mi = 0; mi < cfg.modes.size(); mi++) {
    std::sort(tstat[mi].begin(), tstat[mi].end());
    double c = tstat[mi][qi - 1];
    on_mode(mi, grid, pl, tau[mi], c);
  }
}

std::pair<int, double> study_bandwidths(const Field& x, const StudyConfig& cfg,
                                        uint64_t vb_seed) {
  int k = cfg.k;
  if (cfg.auto_k) k = cv_select_k(x, {cfg.k_max, cfg.g}).k_best;
  double b = cfg.b;
  if (cfg.auto_b) {
    VbConfig vb;
    vb.seed = vb_seed;
    vb.g = cfg.g;
    vb.kernel = cfg.kernel;
    b = select_variance_bandwidth(x, k, vb).b_best;
  }
  return {k, b};
}

}  // namespace

std::vector<CoverageRow> coverage_study(const StudyConfig& cfg) {
  check_study(cfg);
  std::vector<SimOutcome> outcomes(cfg.sims);
  parallel_for(0, cfg.sims, std::max(1, cfg.threads), [&](int s) {
    uint64_t dseed = derive_seed(cfg.seed, static_cast<uint32_t>(s), 0);
    uint64_t bseed = derive_seed(cfg.seed, static_cast<uint32_t>(s), 1);
    uint64_t vseed = derive_seed(cfg.seed, static_cast<uint32_t>(s), 2);
    Field x = simulate_dataset(cfg.mean, cfg.noise, cfg.n, cfg.m, dseed);
    auto [k, b] = study_bandwidths(x, cfg, vseed);
    SimOutcome& oc = outcomes[s];
    oc.event.resize(cfg.modes.size());
    oc.width.resize(cfg.modes.size());
    run_modes(x, cfg, k, b, bseed,
              [&](size_t mi, const PositionGrid& grid, const Pipeline& pl,
                  const std::vector<double>& tau, double c) {
                bool covered = true;
                double wsum = 0.0;
                for (size_t v = 0; v < grid.positions.size(); v++) {
                  const Position& pos = grid.positions[v];
                  double hw = pl.consts.b_nm * tau[v] / pl.consts.t_nm * c;
                  if (std::fabs(cfg.mean(pos.x, pos.y) - pl.estimates[v]) > hw)
                    covered = false;
                  wsum += 2.0 * hw;
                }
                oc.event[mi] = covered;
                oc.width[mi] = wsum / static_cast<double>(grid.positions.size());
              });
  });

  std::vector<CoverageRow> rows(cfg.modes.size());
  for (size_t mi = 0; mi < cfg.modes.size(); mi++) {
    rows[mi].mode = cfg.modes[mi];
    for (int s = 0; s < cfg.sims; s++) {
      rows[mi].coverage += outcomes[s].event[mi];
      rows[mi].avg_width += outcomes[s].width[mi];
    }
    rows[mi].coverage /= cfg.sims;
    rows[mi].avg_width /= cfg.sims;
  }
  return rows;
}

std::vector<SizePowerRow> size_power_study(const StudyConfig& cfg) {
  check_study(cfg);
  MeanField zero;  // H0 reference and null-world mean
  struct PairOutcome {
    std::vector<uint8_t> null_reject, alt_reject;
  };
  std::vector<PairOutcome> outcomes(cfg.sims);
  parallel_for(0, cfg.sims, std::max(1, cfg.threads), [&](int s) {
    PairOutcome& oc = outcomes[s];
    oc.null_reject.resize(cfg.modes.size());
    oc.alt_reject.resize(cfg.modes.size());
    for (int world = 0; world < 2; world++) {
      uint64_t dseed =
          derive_seed(cfg.seed, static_cast<uint32_t>(s), world ? 4 : 0);
      uint64_t bseed =
          derive_seed(cfg.seed, static_cast<uint32_t>(s), world ? 5 : 1);
      uint64_t vseed =
          derive_seed(cfg.seed, static_cast<uint32_t>(s), world ? 6 : 2);
      Field x = simulate_dataset(world ? cfg.alt_mean : zero, cfg.noise, cfg.n,
                                 cfg.m, dseed);
      auto [k, b] = study_bandwidths(x, cfg, vseed);
      run_modes(x, cfg, k, b, bseed,
                [&](size_t mi, const PositionGrid& grid, const Pipeline& pl,
                    const std::vector<double>& tau, double c) {
                  double stat = 0.0;
                  for (size_t v = 0; v < grid.positions.size(); v++)
                    stat = std::max(stat,
                                    pl.consts.t_nm * std::fabs(pl.estimates[v]) /
                                        (pl.consts.b_nm * tau[v]));
                  uint8_t reject = stat > c;
                  (world ? oc.alt_reject : oc.null_reject)[mi] = reject;
                });
    }
  });

  std::vector<SizePowerRow> rows(cfg.modes.size());
  for (size_t mi = 0; mi < cfg.modes.size(); mi++) {
    rows[mi].mode = cfg.modes[mi];
    for (int s = 0; s < cfg.sims; s++) {
      rows[mi].size += outcomes[s].null_reject[mi];
      rows[mi].power += outcomes[s].alt_reject[mi];
    }
    rows[mi].size /= cfg.sims;
    rows[mi].power /= cfg.sims;
  }
  return rows;
}

namespace {

std::string bandwidth_cell(bool is_auto, double value) {
  if (is_auto) return "auto";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

}  // namespace

std::string coverage_csv(const StudyConfig& cfg,
                         const std::vector<CoverageRow>& rows) {
  std::string out = "Mean,Error,K,B,Grid,Mode,Coverage,Average width\n";
  char buf[256];
  for (const CoverageRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%s,%dx%d,%s,%.10g,%.10g\n",
                  cfg.mean.name(), noise_name(cfg.noise),
                  bandwidth_cell(cfg.auto_k, cfg.k).c_str(),
                  bandwidth_cell(cfg.auto_b, cfg.b).c_str(), cfg.divisions,
                  cfg.divisions, tau_mode_name(r.mode), r.coverage,
                  r.avg_width);
    out += buf;
  }
  return out;
}

std::string size_power_csv(const StudyConfig& cfg,
                           const std::vector<SizePowerRow>& rows) {
  std::string out = "Noise,K,B,Grid,Mode,Size,Power\n";
  char buf[256];
  for (const SizePowerRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%dx%d,%s,%.10g,%.10g\n",
                  noise_name(cfg.noise),
                  bandwidth_cell(cfg.auto_k, cfg.k).c_str(),
                  bandwidth_cell(cfg.auto_b, cfg.b).c_str(), cfg.divisions,
                  cfg.divisions, tau_mode_name(r.mode), r.size, r.power);
    out += buf;
  }
  return out;
}

}  // namespace fieldinfer
