#include "fieldinfer.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "core/bandwidth.hpp"
#include "core/bootstrap.hpp"
#include "core/errors.hpp"
#include "core/result_io.hpp"
#include "core/simulate.hpp"
#include "core/smoother.hpp"
#include "json.hpp"

struct fi_field {
  fieldinfer::Field impl;
};

struct fi_result {
  fieldinfer::BootstrapResult impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* msg) { g_last_error = msg ? msg : "unknown error"; }

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return FI_OK;
  } catch (const fieldinfer::Error& e) {
    set_error(e.what());
    return static_cast<int>(e.error_class());
  } catch (const std::exception& e) {
    set_error(e.what());
    return FI_ERR_NUMERIC;
  }
}

char* alloc_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(bool ok, const char* what) {
  if (!ok) throw fieldinfer::ConfigError(what);
}

fieldinfer::SmoothingKernel kernel_g_or_default(const char* name) {
  return fieldinfer::SmoothingKernel::by_name(name ? name : "quartic");
}

fieldinfer::VarianceKernel kernel_k_or_default(const char* name) {
  return fieldinfer::VarianceKernel::by_name(name ? name : "gaussian");
}

fieldinfer::MeanField mean_by_kind(int kind, const fi_disc_spec* disc) {
  fieldinfer::MeanField mean;
  switch (kind) {
    case FI_MEAN_ZERO: mean.kind = fieldinfer::MeanField::Kind::kZero; break;
    case FI_MEAN_ELLIPTICAL:
      mean.kind = fieldinfer::MeanField::Kind::kElliptical;
      break;
    case FI_MEAN_SINUSOIDAL:
      mean.kind = fieldinfer::MeanField::Kind::kSinusoidal;
      break;
    case FI_MEAN_DISC: mean.kind = fieldinfer::MeanField::Kind::kDisc; break;
    default: throw fieldinfer::ConfigError("unknown mean kind");
  }
  if (disc) mean.disc = {disc->height, disc->radius, disc->cx, disc->cy};
  return mean;
}

fieldinfer::NoiseKind noise_by_kind(int kind) {
  switch (kind) {
    case FI_NOISE_IID: return fieldinfer::NoiseKind::kIid;
    case FI_NOISE_AR: return fieldinfer::NoiseKind::kAr;
    case FI_NOISE_MA: return fieldinfer::NoiseKind::kMa;
  }
  throw fieldinfer::ConfigError("unknown noise kind");
}

// Resolves the 0-means-automatic bandwidths and builds the core config.
std::pair<fieldinfer::BootstrapConfig, fieldinfer::PositionGrid> resolve_ci(
    const fieldinfer::Field& f, const fi_ci_config& cfg) {
  require(cfg.k >= 0, "smoothing bandwidth must be positive (0 = automatic)");
  require(cfg.b >= 0.0, "variance bandwidth must be positive (0 = automatic)");
  fieldinfer::BootstrapConfig bc;
  bc.replicates = cfg.replicates;
  bc.alpha = cfg.alpha;
  bc.mode = cfg.mode == FI_TAU_HETEROGENEOUS
                ? fieldinfer::TauMode::kHeterogeneous
                : fieldinfer::TauMode::kHomogeneous;
  require(cfg.mode == FI_TAU_HOMOGENEOUS || cfg.mode == FI_TAU_HETEROGENEOUS,
          "mode must be FI_TAU_HOMOGENEOUS or FI_TAU_HETEROGENEOUS");
  bc.seed = cfg.seed;
  bc.threads = cfg.threads;
  bc.smoother.g = kernel_g_or_default(cfg.kernel_g);
  bc.hac.kernel = kernel_k_or_default(cfg.kernel_k);
  bc.smoother.k = cfg.k > 0
                      ? cfg.k
                      : fieldinfer::cv_select_k(f, {cfg.k_max, bc.smoother.g})
                            .k_best;
  if (cfg.b > 0.0) {
    bc.hac.bandwidth = cfg.b;
  } else {
    fieldinfer::VbConfig vb;
    vb.seed = cfg.seed;
    vb.g = bc.smoother.g;
    vb.kernel = bc.hac.kernel;
    bc.hac.bandwidth =
        fieldinfer::select_variance_bandwidth(f, bc.smoother.k, vb).b_best;
  }
  return {std::move(bc),
          fieldinfer::make_position_grid(f.n, f.m, bc.smoother.k, cfg.grid)};
}

}  // namespace

extern "C" {

const char* fi_version(void) { return "1.0.0"; }

const char* fi_last_error(void) { return g_last_error.c_str(); }

void fi_string_free(char* s) { std::free(s); }

int fi_field_create(int rows, int cols, const double* row_major,
                    fi_field** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(rows >= 1 && cols >= 1, "field must be at least 1x1");
    auto f = new fi_field{fieldinfer::Field(rows, cols)};
    if (row_major)
      std::memcpy(f->impl.values.data(), row_major,
                  sizeof(double) * f->impl.values.size());
    *out = f;
  });
}

int fi_field_load_csv(const char* path, fi_field** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(path != nullptr, "null path");
    *out = new fi_field{fieldinfer::load_grid_csv(path)};
  });
}

int fi_field_save_csv(const fi_field* field, const char* path) {
  return guarded([&] {
    require(field != nullptr, "null field handle");
    require(path != nullptr, "null path");
    fieldinfer::save_grid_csv(field->impl, path);
  });
}

int fi_field_rows(const fi_field* field) { return field ? field->impl.n : 0; }

int fi_field_cols(const fi_field* field) { return field ? field->impl.m : 0; }

const double* fi_field_data(const fi_field* field) {
  return field ? field->impl.values.data() : nullptr;
}

void fi_field_free(fi_field* field) { delete field; }

int fi_simulate(int mean_kind, const fi_disc_spec* disc, int noise_kind,
                int rows, int cols, uint64_t seed, fi_field** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    fieldinfer::Field f = fieldinfer::simulate_dataset(
        mean_by_kind(mean_kind, disc), noise_by_kind(noise_kind), rows, cols,
        seed);
    *out = new fi_field{std::move(f)};
  });
}

int fi_nw_surface(const fi_field* field, int k, const char* kernel_g,
                  fi_field** out) {
  return guarded([&] {
    require(field != nullptr, "null field handle");
    require(out != nullptr, "null output handle");
    fieldinfer::SmootherConfig cfg{k, kernel_g_or_default(kernel_g)};
    Eigen::MatrixXd surface = fieldinfer::nw_surface(field->impl, cfg);
    fieldinfer::Field f(static_cast<int>(surface.rows()),
                        static_cast<int>(surface.cols()));
    for (int i = 0; i < surface.rows(); i++)
      for (int j = 0; j < surface.cols(); j++)
        f.values[static_cast<size_t>(i) * surface.cols() + j] = surface(i, j);
    *out = new fi_field{std::move(f)};
  });
}

void fi_ci_config_init(fi_ci_config* cfg) {
  if (!cfg) return;
  cfg->k = 10;
  cfg->b = 2.0;
  cfg->grid = 20;
  cfg->alpha = 0.05;
  cfg->replicates = 1000;
  cfg->mode = FI_TAU_HOMOGENEOUS;
  cfg->seed = 0;
  cfg->threads = 1;
  cfg->kernel_g = nullptr;
  cfg->kernel_k = nullptr;
  cfg->k_max = 20;
}

int fi_ci_run(const fi_field* field, const fi_ci_config* cfg, fi_result** out) {
  return guarded([&] {
    require(field != nullptr, "null field handle");
    require(cfg != nullptr, "null config");
    require(out != nullptr, "null output handle");
    auto [bc, grid] = resolve_ci(field->impl, *cfg);
    *out = new fi_result{fieldinfer::run_lwmb(field->impl, grid, bc)};
  });
}

int fi_test_run(const fi_field* field, const fi_ci_config* cfg,
                const double* mu0, fi_result** out) {
  return guarded([&] {
    require(field != nullptr, "null field handle");
    require(cfg != nullptr, "null config");
    require(out != nullptr, "null output handle");
    auto [bc, grid] = resolve_ci(field->impl, *cfg);
    fieldinfer::BootstrapResult result =
        fieldinfer::run_lwmb(field->impl, grid, bc);
    std::vector<double> hyp(result.grid.positions.size(), 0.0);
    if (mu0) hyp.assign(mu0, mu0 + result.grid.positions.size());
    fieldinfer::test_mean(result, hyp);
    *out = new fi_result{std::move(result)};
  });
}

int fi_result_size(const fi_result* result) {
  return result ? static_cast<int>(result->impl.grid.positions.size()) : 0;
}

const double* fi_result_estimates(const fi_result* result) {
  return result ? result->impl.estimates.data() : nullptr;
}

const double* fi_result_half_widths(const fi_result* result) {
  return result ? result->impl.half_widths.data() : nullptr;
}

double fi_result_c_quantile(const fi_result* result) {
  return result ? result->impl.c_quantile : 0.0;
}

int fi_result_k(const fi_result* result) { return result ? result->impl.k : 0; }

double fi_result_b(const fi_result* result) {
  return result ? result->impl.b : 0.0;
}

int fi_result_reject(const fi_result* result) {
  if (!result || !result->impl.verdict) return -1;
  return result->impl.verdict->reject ? 1 : 0;
}

double fi_result_statistic(const fi_result* result) {
  return result && result->impl.verdict ? result->impl.verdict->statistic : 0.0;
}

int fi_result_to_json(const fi_result* result, char** out) {
  return guarded([&] {
    require(result != nullptr, "null result handle");
    require(out != nullptr, "null output handle");
    *out = alloc_string(fieldinfer::result_to_json(result->impl));
    if (!*out) throw fieldinfer::NumericError("out of memory");
  });
}

void fi_result_free(fi_result* result) { delete result; }

void fi_bandwidth_config_init(fi_bandwidth_config* cfg) {
  if (!cfg) return;
  cfg->k_max = 20;
  cfg->pilot_b = 5.0;
  cfg->blocks = 15;
  cfg->replicates = 200;
  cfg->q = 0.1;
  cfg->seed = 0;
  cfg->kernel_g = nullptr;
  cfg->kernel_k = nullptr;
}

int fi_select_bandwidth(const fi_field* field, const fi_bandwidth_config* cfg,
                        int* k_out, double* b_out, char** report_json) {
  return guarded([&] {
    require(field != nullptr, "null field handle");
    require(cfg != nullptr, "null config");
    fieldinfer::SmoothingKernel g = kernel_g_or_default(cfg->kernel_g);
    fieldinfer::CvResult cv =
        fieldinfer::cv_select_k(field->impl, {cfg->k_max, g});
    fieldinfer::VbConfig vb;
    vb.pilot_b = cfg->pilot_b;
    vb.q = cfg->q;
    vb.blocks = cfg->blocks;
    vb.replicates = cfg->replicates;
    vb.seed = cfg->seed;
    vb.g = g;
    vb.kernel = kernel_k_or_default(cfg->kernel_k);
    fieldinfer::VbResult sel =
        fieldinfer::select_variance_bandwidth(field->impl, cv.k_best, vb);
    if (k_out) *k_out = cv.k_best;
    if (b_out) *b_out = sel.b_best;
    if (report_json) {
      nlohmann::ordered_json j;
      j["schema"] = "bandwidth-report/1";
      j["k"] = cv.k_best;
      j["b"] = sel.b_best;
      j["cv_scores"] = cv.scores;
      j["candidates"] = vb.gammas;
      j["losses"] = sel.losses;
      j["sigma2_star"] = sel.sigma2_star;
      *report_json = alloc_string(j.dump(2) + "\n");
      if (!*report_json) throw fieldinfer::NumericError("out of memory");
    }
  });
}

int fi_study_run(const char* config_json, char** csv_out) {
  return guarded([&] {
    require(config_json != nullptr, "null study config");
    require(csv_out != nullptr, "null output handle");
    fieldinfer::StudySpec spec = fieldinfer::parse_study_spec(config_json);
    *csv_out = alloc_string(fieldinfer::run_study(spec));
    if (!*csv_out) throw fieldinfer::NumericError("out of memory");
  });
}

}  // extern "C"
