#ifndef SUBDIFF_SUBDIFF_H
#define SUBDIFF_SUBDIFF_H

/* C interface of libsubdiff. Objects are opaque handles; every fallible call
 * returns a status and leaves a message in subdiff_last_error() (per thread). */

#include <stddef.h>

#if defined(SUBDIFF_BUILDING_LIBRARY)
#define SUBDIFF_API __attribute__((visibility("default")))
#else
#define SUBDIFF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum subdiff_status {
    SUBDIFF_OK = 0,
    SUBDIFF_ERR_DOMAIN = 1,
    SUBDIFF_ERR_ACCURACY = 2,
    SUBDIFF_ERR_UNSUPPORTED = 3,
    SUBDIFF_ERR_DIVERGENCE = 4,
    SUBDIFF_ERR_PARSE = 5,
    SUBDIFF_ERR_SHAPE = 6,
    SUBDIFF_ERR_IO = 7,
    SUBDIFF_ERR_CHECK_FAILED = 8, /* verify ran but a tolerance was not met */
    SUBDIFF_ERR_INVALID_ARGUMENT = 9,
    SUBDIFF_ERR_INTERNAL = 10
} subdiff_status;

typedef struct subdiff_config subdiff_config;
typedef struct subdiff_kernel subdiff_kernel;
typedef struct subdiff_density subdiff_density;

SUBDIFF_API const char* subdiff_version(void);
SUBDIFF_API const char* subdiff_status_name(subdiff_status status);
SUBDIFF_API const char* subdiff_last_error(void);

/* 0 ok; 1 internal, accuracy or failed check; 2 invalid, unsupported or divergent input. */
SUBDIFF_API int subdiff_exit_code(subdiff_status status);

/* Special functions. */
SUBDIFF_API subdiff_status subdiff_gamma(double x, double* out);
SUBDIFF_API subdiff_status subdiff_upper_incomplete_gamma(double nu, double x, double* out);
SUBDIFF_API subdiff_status subdiff_mittag_leffler(double alpha, double z, double* out);

/* Configuration. */
SUBDIFF_API subdiff_status subdiff_config_load(const char* path, subdiff_config** out);
SUBDIFF_API subdiff_status subdiff_config_parse(const char* text, const char* base_dir, subdiff_config** out);
SUBDIFF_API void subdiff_config_free(subdiff_config* cfg);
/* Copies the resolved configuration (NUL-terminated) into buf; *needed gets the full size.
 * buf = NULL is a size query; a non-null buffer that is too small gives SUBDIFF_ERR_SHAPE. */
SUBDIFF_API subdiff_status subdiff_config_echo(const subdiff_config* cfg, char* buf, size_t capacity, size_t* needed);

/* Kernels. `type` is a config type name; params in config order (theta; C, kappa; a, b;
 * beta, theta). For "distributed_mu" pass n = 2m values: m sigma nodes then m mu values.
 * Unknown types give SUBDIFF_ERR_INVALID_ARGUMENT, a wrong count SUBDIFF_ERR_SHAPE. */
SUBDIFF_API subdiff_status subdiff_kernel_create(const char* type, const double* params, size_t n, subdiff_kernel** out);
SUBDIFF_API subdiff_status subdiff_kernel_from_config(const subdiff_config* cfg, subdiff_kernel** out);
SUBDIFF_API void subdiff_kernel_free(subdiff_kernel* k);
SUBDIFF_API subdiff_status subdiff_kernel_laplace(const subdiff_kernel* k, double lambda, double* K, double* Phi);
SUBDIFF_API subdiff_status subdiff_kernel_time_domain(const subdiff_kernel* k, double t, double* out);
SUBDIFF_API subdiff_status subdiff_kernel_regular_variation(const subdiff_kernel* k, double x, double* rho, double* L);
SUBDIFF_API subdiff_status subdiff_predicted_asymptote(const subdiff_kernel* k, double norm, double t, double* out);

/* Density of the inverse subordinator. */
SUBDIFF_API subdiff_status subdiff_density_create(const subdiff_kernel* k, subdiff_density** out);
SUBDIFF_API void subdiff_density_free(subdiff_density* d);
SUBDIFF_API subdiff_status subdiff_density_eval(const subdiff_density* d, double t, double tau, double* value,
                                                double* err);
SUBDIFF_API subdiff_status subdiff_density_cesaro(const subdiff_density* d, double t, double tau, double* value);
SUBDIFF_API subdiff_status subdiff_density_mass(const subdiff_density* d, double t, double* mass, double* tail_bound,
                                                double* tau_max);

/* Solution of the problem in a configuration. */
SUBDIFF_API subdiff_status subdiff_solution_v(const subdiff_config* cfg, double x, double t, double* out);
SUBDIFF_API subdiff_status subdiff_time_l1_norm(const subdiff_config* cfg, double x, double* out);

/* Runs a CLI subcommand. The text summary of the last run is kept per thread. Failures after
 * the command name is accepted leave a run.manifest.txt with the error in out_dir. */
SUBDIFF_API subdiff_status subdiff_cmd_run(const char* command, const char* config_path, const char* out_dir);
SUBDIFF_API const char* subdiff_last_summary(void);

#ifdef __cplusplus
}
#endif

#endif
