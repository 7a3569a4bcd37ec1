/*
 * regstab C interface.
 *
 * Opaque handles wrap the C++ core; every fallible call returns a
 * regstab_status and leaves a message retrievable with regstab_last_error()
 * on the calling thread. Strings handed out by the library are released with
 * regstab_string_free().
 */
#ifndef REGSTAB_H
#define REGSTAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(REGSTAB_BUILDING)
#    define REGSTAB_API __declspec(dllexport)
#  else
#    define REGSTAB_API __declspec(dllimport)
#  endif
#else
#  define REGSTAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes. */
typedef enum regstab_status {
  REGSTAB_OK = 0,
  REGSTAB_ERR_VALIDATION = 1,
  REGSTAB_ERR_NUMERIC = 2,
  REGSTAB_ERR_IO = 3
} regstab_status;

typedef enum regstab_category {
  REGSTAB_FRAGILE = 0,
  REGSTAB_VULNERABLE = 1,
  REGSTAB_STABLE = 2
} regstab_category;

typedef struct regstab_config regstab_config;
typedef struct regstab_dataset regstab_dataset;
typedef struct regstab_model regstab_model;

typedef struct regstab_line_fit {
  double slope;
  double intercept;
  double r;
  double mean_year;
  double mean_value;
} regstab_line_fit;

REGSTAB_API const char* regstab_version(void);
/* Message for the last failed call on this thread ("" if none). */
REGSTAB_API const char* regstab_last_error(void);
/* Symbolic kind of the last failure, e.g. "ZeroVariance" ("" if none). */
REGSTAB_API const char* regstab_last_error_kind(void);
REGSTAB_API void regstab_string_free(char* s);

/* ---- configuration ---- */
REGSTAB_API regstab_status regstab_config_create(regstab_config** out);
REGSTAB_API void regstab_config_destroy(regstab_config* cfg);
REGSTAB_API regstab_status regstab_config_load(regstab_config* cfg, const char* path);
REGSTAB_API regstab_status regstab_config_set(regstab_config* cfg, const char* key, const char* value);

/* ---- datasets ---- */
REGSTAB_API regstab_status regstab_dataset_create(regstab_dataset** out);
REGSTAB_API void regstab_dataset_destroy(regstab_dataset* ds);
/* Appends the records of a CSV file; (country, year) must stay unique. */
REGSTAB_API regstab_status regstab_dataset_load_csv(regstab_dataset* ds, const char* path);
REGSTAB_API size_t regstab_dataset_size(const regstab_dataset* ds);
REGSTAB_API regstab_status regstab_dataset_write_csv(const regstab_dataset* ds, const char* path);

/* ---- models ---- */
REGSTAB_API regstab_status regstab_model_load(const char* path, regstab_model** out);
REGSTAB_API void regstab_model_destroy(regstab_model* model);
REGSTAB_API size_t regstab_model_input_count(const regstab_model* model);
/* Raw network output scaled to 0-100 for an already standardized input. */
REGSTAB_API regstab_status regstab_model_bpnn(const regstab_model* model, const double* x, size_t n,
                                              double* bpnn_out);

/* ---- numerics ---- */
REGSTAB_API regstab_status regstab_pearson(const double* x, const double* y, size_t n, double* r_out);
REGSTAB_API regstab_status regstab_contribution_rates(const double* eigenvalues, size_t p, double* rates_out,
                                                      double* accumulated_out);
REGSTAB_API regstab_status regstab_select_components(const double* accumulated, size_t p, double threshold,
                                                     size_t* k_out);
REGSTAB_API regstab_status regstab_rs_transform(double bpnn_output, double* rs_out,
                                                regstab_category* category_out);
REGSTAB_API regstab_category regstab_classify(double rs_value);
REGSTAB_API regstab_status regstab_fit_line(const int* years, const double* values, size_t n,
                                            regstab_line_fit* out);

/* ---- commands ----
 * Each writes its artifacts into out_dir (NULL or "" for none) and returns
 * the printable report through *report (free with regstab_string_free).
 * Non-fatal warnings, one per line, go to *warnings when it is non-NULL. */
REGSTAB_API regstab_status regstab_cmd_pca(const regstab_config* cfg, const regstab_dataset* ds,
                                           const char* eigenvalues_path, const char* out_dir, char** report,
                                           char** warnings);
REGSTAB_API regstab_status regstab_cmd_train(const regstab_config* cfg, const regstab_dataset* ds,
                                             const char* model_path, const char* out_dir, char** report,
                                             char** warnings);
REGSTAB_API regstab_status regstab_cmd_score(const regstab_config* cfg, const regstab_dataset* ds,
                                             const char* model_path, const char* out_dir, char** report,
                                             char** warnings);
REGSTAB_API regstab_status regstab_cmd_forecast(const regstab_config* cfg, const regstab_dataset* ds,
                                                const char* model_path, const char* out_dir, char** report,
                                                char** warnings);
REGSTAB_API regstab_status regstab_cmd_report(const regstab_config* cfg, const regstab_dataset* ds,
                                              const char* model_path, const char* eigenvalues_path,
                                              const char* out_dir, char** report, char** warnings);

#ifdef __cplusplus
}
#endif

#endif /* REGSTAB_H */
