#ifndef LITHOINV_H
#define LITHOINV_H

#include <stddef.h>
#include <stdint.h>

#if defined(LITHOINV_BUILDING)
#define LITHO_API __attribute__((visibility("default")))
#else
#define LITHO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns one of these; the same values are the CLI exit codes. */
typedef enum {
  LITHO_OK = 0,
  LITHO_ERR_INTERNAL = 1,
  LITHO_ERR_VALIDATION = 2, /* bad config, argument, grid mismatch, domain */
  LITHO_ERR_IO = 3,
  LITHO_ERR_STALLED = 4     /* optimizer stall or PSF construction failure */
} litho_status;

typedef struct litho_config litho_config;
typedef struct litho_field litho_field;
typedef struct litho_imager litho_imager;

/* Message for the last failure on this thread; never NULL. */
LITHO_API const char* litho_last_error(void);
LITHO_API const char* litho_version(void);
/* Frees strings returned through char** outputs. */
LITHO_API void litho_string_free(char* s);

/* Configuration. Defaults describe the desk-scale setup (128^2 on [-1,1]^2). */
LITHO_API int litho_config_default(litho_config** out);
LITHO_API int litho_config_from_json(const char* json, litho_config** out);
LITHO_API int litho_config_from_file(const char* path, litho_config** out);
LITHO_API int litho_config_to_json(const litho_config* cfg, char** out);
/* 40 hex digits plus NUL. */
LITHO_API int litho_config_hash(const litho_config* cfg, char out[41]);
LITHO_API int litho_config_set_paths(litho_config* cfg, const char* input, const char* reference, const char* output);
LITHO_API int litho_config_set_seed(litho_config* cfg, uint64_t seed);
LITHO_API int litho_config_set_threads(litho_config* cfg, int threads);
LITHO_API int litho_config_set_delta_tilde(litho_config* cfg, double delta_tilde);
LITHO_API void litho_config_free(litho_config* cfg);

/* Row-major samples, x fastest; sample (i, j) sits at origin + (i, j) * spacing. */
LITHO_API int litho_field_new(int nx, int ny, double spacing, double origin_x, double origin_y, litho_field** out);
/* Mask in [0, 1] on the configured grid from .pgm, .png or polygon .json. */
LITHO_API int litho_field_load_mask(const litho_config* cfg, const char* path, litho_field** out);
LITHO_API int litho_field_shape(const litho_field* f, int* nx, int* ny, double* spacing);
LITHO_API double* litho_field_data(litho_field* f);
LITHO_API void litho_field_free(litho_field* f);

LITHO_API int litho_imager_new(const litho_config* cfg, litho_imager** out);
LITHO_API int litho_imager_intensity(const litho_imager* im, const litho_field* mask, litho_field** out);
LITHO_API double litho_imager_kernel_scale(const litho_imager* im);
LITHO_API void litho_imager_free(litho_imager* im);

/* Distances between the sets {a > 1/2} and {b > 1/2}. Hausdorff values are
   infinite (flag set, value 0) when exactly one set is empty. */
typedef struct {
  double d1;
  int d1_infinite;
  double d1_tilde;
  int d1_tilde_infinite;
  double d2;
  double d3;
  double perimeter_a;
  double perimeter_b;
} litho_report;

LITHO_API int litho_distance(const litho_field* a, const litho_field* b, litho_report* out);

/* Whole runs, writing into the configured output directory. `summary`, when
   not NULL, receives a one-line description. */
LITHO_API int litho_run_forward(const litho_config* cfg, char** summary);
LITHO_API int litho_run_invert(const litho_config* cfg, char** summary);
/* `csv` receives the report header and row. */
LITHO_API int litho_run_metrics(const litho_config* cfg, char** csv);
LITHO_API int litho_run_kernel_build(const litho_config* cfg, char** summary);

#ifdef __cplusplus
}
#endif

#endif
