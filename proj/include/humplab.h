/* C interface to the double-humped-state toolkit. All functions return
 * a status code (HL_OK or an HL_ERR_* value); results come back through
 * out-parameters and opaque handles. hl_last_error() describes the most
 * recent failure on the calling thread. */
#ifndef HUMPLAB_H
#define HUMPLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define HL_OK 0
#define HL_ERR_IO 1
#define HL_ERR_ARGUMENT 2
#define HL_ERR_HUNT 3
#define HL_ERR_NUMERIC 4

typedef struct hl_pool hl_pool;
typedef struct hl_pair hl_pair;
typedef struct hl_trace hl_trace;

const char* hl_version(void);
const char* hl_last_error(void);

/* Worker count resolution: flag value if > 0, else the HUMPLAB_THREADS
 * environment variable, else the hardware concurrency. */
int hl_resolve_threads(int requested);

typedef struct hl_hunt_options {
    int size;
    int separation;
    int window;
    double mass_threshold;
    double gap_tolerance;
    int max_bisection_steps;
    double epsilon_low;
    double epsilon_high;
    double energy_low;
    double energy_high;
    double min_gap;
} hl_hunt_options;

void hl_hunt_options_defaults(hl_hunt_options* opt);

typedef void (*hl_hunt_log_fn)(uint64_t seed, int accepted,
                               const char* detail, void* user);

/* Collect `count` double-humped realizations starting at first_seed.
 * seed_budget caps the attempted seeds (0 means the default budget). */
int hl_hunt_pool(uint64_t first_seed, int count, const hl_hunt_options* opt,
                 int threads, uint64_t seed_budget, hl_hunt_log_fn log,
                 void* log_user, hl_pool** out);

int hl_pool_save(const hl_pool* pool, const char* path);
int hl_pool_load(const char* path, hl_pool** out);
int hl_pool_count(const hl_pool* pool);
int hl_pool_entry_info(const hl_pool* pool, int index, uint64_t* seed,
                       int* size, int* site_O, int* site_P, double* gap);
void hl_pool_free(hl_pool* pool);

/* Rebuild the pair (eigenstates, packets) stored in a pool entry. */
int hl_pair_build(const hl_pool* pool, int index, hl_pair** out);
void hl_pair_free(hl_pair* pair);

int hl_pair_size(const hl_pair* pair);
double hl_pair_gap(const hl_pair* pair);
double hl_pair_rabi_period(const hl_pair* pair);

#define HL_VEC_Y_O 0
#define HL_VEC_Y_P 1
#define HL_VEC_PLUS 2
#define HL_VEC_MINUS 3
#define HL_VEC_EPSILON 4

/* Copy one of the pair's site vectors into out[0..capacity); fails
 * unless capacity >= hl_pair_size(). */
int hl_pair_vector(const hl_pair* pair, int which, double* out, int capacity);

typedef struct hl_evolve_options {
    double beta;
    double dt;
    double t_max;   /* <= 0: ten Rabi periods */
    long stride;    /* <= 0: about 200 samples per Rabi period */
    int broken;     /* nonzero: reset epsilon_P to 0 first */
} hl_evolve_options;

void hl_evolve_options_defaults(hl_evolve_options* opt);

/* Evolve the O packet of the pair and record the observable trace. */
int hl_evolve(const hl_pair* pair, const hl_evolve_options* opt,
              hl_trace** out);

int hl_trace_rows(const hl_trace* trace);
int hl_trace_columns(const hl_trace* trace);
const char* hl_trace_column_name(const hl_trace* trace, int column);
int hl_trace_values(const hl_trace* trace, int column, double* out,
                    int capacity);
int hl_trace_save_csv(const hl_trace* trace, const char* path);
void hl_trace_free(hl_trace* trace);

/* Scalar diagnostics of a pair. */
double hl_rabi_transfer(double delta_e, double t);
int hl_pair_r_parameter(const hl_pair* pair, double* value, double* inverse,
                        int* divergent);
int hl_pair_beta_quarter(const hl_pair* pair, double beta_hi, double tol,
                         double* out, int* flagged_nonmonotone);

#define HL_BETA_C_OK 0
#define HL_BETA_C_BELOW_GRID 1
#define HL_BETA_C_AT_GRID_MAX 2

int hl_pair_beta_c(const hl_pair* pair, double* out, int* status);

typedef struct hl_analyze_options {
    double beta_quarter_tol;
    int threads;
} hl_analyze_options;

void hl_analyze_options_defaults(hl_analyze_options* opt);

/* Per-entry diagnostics plus the beta_c vs R correlations, written to
 * <out_base>.csv and <out_base>.json. */
int hl_analyze_pool(const hl_pool* pool, const hl_analyze_options* opt,
                    const char* out_base);

/* Overlay line plot of named columns (comma separated) from one or
 * more trace CSV files, written as a deterministic SVG. */
int hl_plot_traces(const char* const* trace_paths, int n_traces,
                   const char* columns, const char* out_svg);

#ifdef __cplusplus
}
#endif

#endif /* HUMPLAB_H */
