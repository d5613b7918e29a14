#ifndef FIELDINFER_H_
#define FIELDINFER_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every fallible call; nonzero values double as CLI
 * exit codes. */
enum {
  FI_OK = 0,
  FI_ERR_CONFIG = 2, /* invalid parameters, bandwidths, positions */
  FI_ERR_DATA = 3,   /* unreadable or malformed input */
  FI_ERR_NUMERIC = 4 /* numerical failure */
};

const char* fi_version(void);

/* Message for the most recent failing call on this thread. */
const char* fi_last_error(void);

/* Frees strings returned through char** out-parameters. */
void fi_string_free(char* s);

/* ---- lattice fields ---------------------------------------------------- */

typedef struct fi_field fi_field;

/* row_major may be NULL for a zero field. */
int fi_field_create(int rows, int cols, const double* row_major,
                    fi_field** out);
int fi_field_load_csv(const char* path, fi_field** out);
int fi_field_save_csv(const fi_field* field, const char* path);
int fi_field_rows(const fi_field* field);
int fi_field_cols(const fi_field* field);
/* Row-major rows×cols block owned by the field. */
const double* fi_field_data(const fi_field* field);
void fi_field_free(fi_field* field);

/* ---- simulation -------------------------------------------------------- */

enum {
  FI_MEAN_ZERO = 0,
  FI_MEAN_ELLIPTICAL = 1,
  FI_MEAN_SINUSOIDAL = 2,
  FI_MEAN_DISC = 3
};

enum { FI_NOISE_IID = 0, FI_NOISE_AR = 1, FI_NOISE_MA = 2 };

typedef struct {
  double height;
  double radius;
  double cx;
  double cy;
} fi_disc_spec;

/* disc may be NULL for the default bump of height 0.3 and radius 0.1 centred
 * at (0.5, 0.5). */
int fi_simulate(int mean_kind, const fi_disc_spec* disc, int noise_kind,
                int rows, int cols, uint64_t seed, fi_field** out);

/* ---- estimation and inference ------------------------------------------ */

/* Kernel-weighted local mean over the interior; out is
 * (rows−2k)×(cols−2k), entry (0,0) at lattice point (k+1, k+1).
 * kernel_g may be NULL for the quartic kernel. */
int fi_nw_surface(const fi_field* field, int k, const char* kernel_g,
                  fi_field** out);

enum { FI_TAU_HOMOGENEOUS = 0, FI_TAU_HETEROGENEOUS = 1 };

typedef struct {
  int k;                /* smoothing bandwidth; 0 selects by cross-validation */
  double b;             /* variance bandwidth; 0 selects by block matching */
  int grid;             /* confidence positions per axis, spaced over the
                         * bandwidth-admissible interior */
  double alpha;         /* simultaneous level is 1−alpha */
  int replicates;       /* bootstrap replicates */
  int mode;             /* FI_TAU_* */
  uint64_t seed;
  int threads;
  const char* kernel_g; /* smoothing kernel name, NULL = "quartic" */
  const char* kernel_k; /* variance kernel name, NULL = "gaussian" */
  int k_max;            /* cross-validation search bound */
} fi_ci_config;

void fi_ci_config_init(fi_ci_config* cfg);

typedef struct fi_result fi_result;

/* Simultaneous confidence bands over the grid² interior positions. */
int fi_ci_run(const fi_field* field, const fi_ci_config* cfg, fi_result** out);

/* Tests the hypothesized mean surface against the band quantile. mu0 holds
 * grid² values in position order (x-major), or NULL for the zero surface. */
int fi_test_run(const fi_field* field, const fi_ci_config* cfg,
                const double* mu0, fi_result** out);

int fi_result_size(const fi_result* result);
const double* fi_result_estimates(const fi_result* result);
const double* fi_result_half_widths(const fi_result* result);
double fi_result_c_quantile(const fi_result* result);
int fi_result_k(const fi_result* result);
double fi_result_b(const fi_result* result);
/* 1 = reject, 0 = retain, −1 when the result carries no test verdict. */
int fi_result_reject(const fi_result* result);
double fi_result_statistic(const fi_result* result);
int fi_result_to_json(const fi_result* result, char** out);
void fi_result_free(fi_result* result);

/* ---- bandwidth selection ----------------------------------------------- */

typedef struct {
  int k_max;            /* cross-validation search bound */
  double pilot_b;       /* pilot variance bandwidth for block matching */
  int blocks;           /* random blocks matched per candidate */
  int replicates;       /* bootstrap replicates per variance estimate */
  double q;             /* block side fraction */
  uint64_t seed;
  const char* kernel_g; /* NULL = "quartic" */
  const char* kernel_k; /* NULL = "gaussian" */
} fi_bandwidth_config;

void fi_bandwidth_config_init(fi_bandwidth_config* cfg);

/* Selects both bandwidths; k_out, b_out and report_json may each be NULL. */
int fi_select_bandwidth(const fi_field* field, const fi_bandwidth_config* cfg,
                        int* k_out, double* b_out, char** report_json);

/* ---- simulation studies ------------------------------------------------ */

/* config_json describes the study (see the study schema in the README);
 * csv_out receives the result table. */
int fi_study_run(const char* config_json, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* FIELDINFER_H_ */
