#ifndef BERGER_C_H
#define BERGER_C_H

/* C interface to the Berger-sphere Hessian engine. All handles are opaque;
 * every fallible call returns a berger_status and leaves a message for
 * berger_last_error() on the calling thread. */

#include <stddef.h>

#if defined(BERGER_BUILDING_LIBRARY)
#define BERGER_API __attribute__((visibility("default")))
#else
#define BERGER_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum berger_status {
  BERGER_OK = 0,
  BERGER_INVALID_ARGUMENT = 1,
  BERGER_DIMENSION_MISMATCH = 2,
  BERGER_NOT_ON_SPHERE = 3,
  BERGER_NOT_TANGENT = 4,
  BERGER_DOMAIN_VIOLATION = 5,
  BERGER_NOT_IN_CLASS = 6,
  BERGER_INCOMPATIBLE = 7,
  BERGER_INTERNAL = 8
} berger_status;

typedef enum berger_functional {
  BERGER_ENERGY = 0,
  BERGER_VOLUME = 1,
  BERGER_GENERALIZED_ENERGY = 2
} berger_functional;

typedef enum berger_region { BERGER_STABLE = 0, BERGER_UNSTABLE = 1, BERGER_UNKNOWN = 2 } berger_region;

typedef struct berger_context berger_context;
typedef struct berger_result berger_result;

typedef struct berger_c2s_coefficients {
  double energy;
  double f_vol;
  double volume;
  int has_lambda;
  double e_lambda;    /* valid when has_lambda */
  double generalized; /* sqrt|lambda/mu| e_lambda, valid when has_lambda */
} berger_c2s_coefficients;

typedef struct berger_classification {
  berger_region region;
  char predicate[32];
  int has_witness;
  char witness_family[8]; /* "C2s" or "s3" */
  int witness_s;          /* half degree for C2s, level for s3 */
  double witness_coefficient;
  int doubly_classified;
} berger_classification;

BERGER_API const char* berger_version(void);
BERGER_API const char* berger_last_error(void);
BERGER_API const char* berger_status_name(berger_status status);

BERGER_API berger_status berger_context_create(int m, double mu, berger_context** out);
BERGER_API void berger_context_destroy(berger_context* ctx);
BERGER_API berger_status berger_context_info(const berger_context* ctx, int* m, double* mu, int* eps);

BERGER_API berger_status berger_mixed_eigenvalue(int k, int l, double mu, int m, double* out);

/* lambda may be NULL; then the generalized-energy fields are left unset. */
BERGER_API berger_status berger_c2s_coefficients_get(const berger_context* ctx, double s, const double* lambda,
                                                     berger_c2s_coefficients* out);

/* Exact-moment Hessian of C_{2s} (axis 1) and its closed-form value. */
BERGER_API berger_status berger_hessian_c2s(const berger_context* ctx, berger_functional functional, double lambda,
                                            int s, double* closed_form, double* exact);

BERGER_API berger_status berger_classify(const berger_context* ctx, berger_functional functional, double lambda,
                                         int s_max, berger_classification* out);

/* Runs "verify", "hessian" or "region" with a JSON configuration (NULL or
 * "" for defaults). */
BERGER_API berger_status berger_run(const char* command, const char* config_json, berger_result** out);
BERGER_API berger_status berger_run_verify(const char* config_json, berger_result** out);
BERGER_API berger_status berger_run_hessian(const char* config_json, berger_result** out);
BERGER_API berger_status berger_run_region(const char* config_json, berger_result** out);

BERGER_API int berger_result_exit_code(const berger_result* result);
/* Formatted output in the configured format. */
BERGER_API const char* berger_result_output(const berger_result* result, size_t* size);
/* Structured JSON report. */
BERGER_API const char* berger_result_report(const berger_result* result, size_t* size);
/* SVG phase diagram (region only; empty otherwise). */
BERGER_API const char* berger_result_svg(const berger_result* result, size_t* size);
BERGER_API void berger_result_destroy(berger_result* result);

#ifdef __cplusplus
}
#endif

#endif
