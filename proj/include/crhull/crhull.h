/* C interface to the crhull library. All strings are UTF-8 and owned by the
 * library; pointers returned from a handle stay valid until it is destroyed. */
#ifndef CRHULL_H
#define CRHULL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef CRHULL_BUILDING_LIBRARY
#    define CRHULL_API __declspec(dllexport)
#  else
#    define CRHULL_API __declspec(dllimport)
#  endif
#else
#  define CRHULL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum crhull_status {
  CRHULL_OK = 0,
  CRHULL_ERR_INVALID_ARGUMENT,
  CRHULL_ERR_DOMAIN,
  CRHULL_ERR_ARITY,
  CRHULL_ERR_OUT_OF_DOMAIN,
  CRHULL_ERR_NON_HYPERBOLIC,
  CRHULL_ERR_SINGULAR_JACOBIAN,
  CRHULL_ERR_DEGENERATE_JET,
  CRHULL_ERR_OFF_LOCUS,
  CRHULL_ERR_BRANCH_DOMAIN,
  CRHULL_ERR_ORDER_TWO_VIOLATION,
  CRHULL_ERR_NOT_FLAT,
  CRHULL_ERR_ILL_CONDITIONED,
  CRHULL_ERR_SCHEMA,
  CRHULL_ERR_IO,
  CRHULL_ERR_INTERNAL
} crhull_status;

typedef struct crhull_manifest crhull_manifest;
typedef struct crhull_report crhull_report;

/* Overrides for manifest "run" values. Zero/negative fields mean "unset";
 * initialise with crhull_run_options_init. */
typedef struct crhull_run_options {
  int grid_radial;
  int grid_angular;
  int t_grid;
  int degree;
  double tol;
  int has_seed;
  uint64_t seed;
  int timing;
} crhull_run_options;

/* One term c * w^b * wbar^c of a t-free polynomial. */
typedef struct crhull_term {
  int b;
  int c;
  double re;
  double im;
} crhull_term;

typedef struct crhull_radius {
  double r;
  double threshold;
  double c2_at_r;
  int bisection_steps;
  int certified;
} crhull_radius;

CRHULL_API const char* crhull_version(void);
CRHULL_API const char* crhull_status_string(crhull_status status);
/* Message for the most recent failure on this thread ("" if none). */
CRHULL_API const char* crhull_last_error(void);

CRHULL_API crhull_status crhull_manifest_parse(const char* text, size_t length, crhull_manifest** out);
CRHULL_API crhull_status crhull_manifest_load(const char* path, crhull_manifest** out);
CRHULL_API void crhull_manifest_destroy(crhull_manifest* manifest);
CRHULL_API size_t crhull_manifest_diagnostic_count(const crhull_manifest* manifest);
CRHULL_API const char* crhull_manifest_diagnostic(const crhull_manifest* manifest, size_t index);
CRHULL_API const char* crhull_manifest_canonical(const crhull_manifest* manifest);
CRHULL_API const char* crhull_manifest_fingerprint(const crhull_manifest* manifest);

CRHULL_API void crhull_run_options_init(crhull_run_options* options);
/* Runs a command on a parsed manifest. `options` may be NULL. */
CRHULL_API crhull_status crhull_run(const crhull_manifest* manifest, const char* command,
                                    const crhull_run_options* options, crhull_report** out);
/* Parses and runs; manifest errors produce an invalid-input report, not a failure status. */
CRHULL_API crhull_status crhull_run_text(const char* text, size_t length, const char* command,
                                         const crhull_run_options* options, crhull_report** out);
CRHULL_API void crhull_report_destroy(crhull_report* report);
CRHULL_API const char* crhull_report_json(const crhull_report* report);
CRHULL_API const char* crhull_report_csv(const crhull_report* report);
CRHULL_API const char* crhull_report_verdict(const crhull_report* report);
CRHULL_API int crhull_report_exit_code(const crhull_report* report);

CRHULL_API size_t crhull_command_count(void);
CRHULL_API const char* crhull_command_name(size_t index);

/* Direct numeric kernels. */
CRHULL_API crhull_status crhull_sqrt1p_deviation(double re, double im, double* out_re, double* out_im);
CRHULL_API crhull_status crhull_normal_form_threshold(double gamma, double* out);
CRHULL_API crhull_status crhull_certify_radius(double gamma, const crhull_term* terms, size_t count,
                                               double R, crhull_radius* out);

#ifdef __cplusplus
}
#endif

#endif
