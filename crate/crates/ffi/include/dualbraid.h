/* C API for the dualbraid verification engine.
 *
 * Handles are opaque: create and destroy them only through this API.
 * Strings returned by the library are NUL-terminated UTF-8 and must be
 * released with dualbraid_string_free().
 *
 * Kept in sync with crates/ffi/src/lib.rs by hand; cbindgen.toml in the
 * crate root regenerates it where cbindgen is available.
 */

#ifndef DUALBRAID_H
#define DUALBRAID_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque configuration handle. */
typedef struct DualbraidConfig DualbraidConfig;

/* Opaque report handle. */
typedef struct DualbraidReport DualbraidReport;

/* Status codes returned by the C API. */
typedef enum DualbraidStatus {
  DUALBRAID_OK = 0,
  DUALBRAID_NULL_ARGUMENT = 1,
  DUALBRAID_INVALID_ARGUMENT = 2,
  DUALBRAID_INVALID_UTF8 = 3,
  DUALBRAID_CHECKS_FAILED = 4,
  DUALBRAID_PANIC = 5,
} DualbraidStatus;

/* Create a configuration with the default parameters. */
DualbraidConfig *dualbraid_config_new(void);

/* Release a configuration handle. A null pointer is a no-op. */
void dualbraid_config_free(DualbraidConfig *cfg);

/* Series truncation order (total degree, inclusive). */
DualbraidStatus dualbraid_config_set_order(DualbraidConfig *cfg, size_t value);

/* Parameter truncation order of the quantum-algebra suite. */
DualbraidStatus dualbraid_config_set_h_order(DualbraidConfig *cfg, size_t value);

/* Degree at which the quantum side is compared to the braidings. */
DualbraidStatus dualbraid_config_set_compare_degree(DualbraidConfig *cfg, size_t value);

/* Number of numeric sample points. */
DualbraidStatus dualbraid_config_set_samples(DualbraidConfig *cfg, size_t value);

/* Order of the symbolic Yang-Baxter check on the 9-variable ring. */
DualbraidStatus dualbraid_config_set_qybe_order(DualbraidConfig *cfg, size_t value);

/* Seed of all pseudo-random choices. */
DualbraidStatus dualbraid_config_set_seed(DualbraidConfig *cfg, uint64_t seed);

/* Numeric tolerances (algebraic residuals, finite differences). */
DualbraidStatus dualbraid_config_set_tolerances(DualbraidConfig *cfg,
                                                double tol_qybe,
                                                double tol_fd);

/* Select suites from a comma-separated list, e.g. "series,compare" or
 * "all". */
DualbraidStatus dualbraid_config_set_suites(DualbraidConfig *cfg,
                                            const char *suites);

/* Execute the selected suites. On success a report handle is stored in
 * *out; DUALBRAID_OK means every check passed, DUALBRAID_CHECKS_FAILED
 * means the run completed with failures (the report says which). */
DualbraidStatus dualbraid_run(const DualbraidConfig *cfg,
                              DualbraidReport **out);

/* 1 when every check passed, 0 otherwise (or on a null handle). */
int dualbraid_report_passed(const DualbraidReport *report);

/* Copy out the pass/fail/skip counts; null count pointers are skipped. */
DualbraidStatus dualbraid_report_counts(const DualbraidReport *report,
                                        size_t *passed,
                                        size_t *failed,
                                        size_t *skipped);

/* Serialize the report as JSON. Release with dualbraid_string_free(). */
char *dualbraid_report_to_json(const DualbraidReport *report);

/* Release a report handle. A null pointer is a no-op. */
void dualbraid_report_free(DualbraidReport *report);

/* Release a string returned by this library. */
void dualbraid_string_free(char *s);

/* Library version as a static string; do not free. */
const char *dualbraid_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DUALBRAID_H */
