#ifndef ARGZETA_H
#define ARGZETA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define AZ_PARITY_EVEN 0

#define AZ_PARITY_ODD 1

#define AZ_SIDE_MINORANT 0

#define AZ_SIDE_MAJORANT 1

typedef enum AzStatus {
  AZ_STATUS_OK = 0,
  AZ_STATUS_NULL_POINTER = 1,
  AZ_STATUS_INVALID_ARGUMENT = 2,
  AZ_STATUS_DOMAIN = 3,
  AZ_STATUS_COVERAGE = 4,
  AZ_STATUS_DATA = 5,
  AZ_STATUS_NUMERICAL = 6,
  AZ_STATUS_INFEASIBLE = 7,
  AZ_STATUS_IO = 8,
  AZ_STATUS_PANIC = 9,
} AzStatus;

/**
 * A truncated extremal series for one kernel, side and width.
 */
typedef struct AzExtremal AzExtremal;

/**
 * Sieved values of the von Mangoldt function.
 */
typedef struct AzVonMangoldt AzVonMangoldt;

/**
 * A validated table of zeta zero ordinates.
 */
typedef struct AzZeroTable AzZeroTable;

/**
 * Both sides of the explicit formula for one test function.
 */
typedef struct AzBalance {
  double zero_side;
  double pole_terms;
  double log_pi_term;
  double archimedean;
  double prime_side;
  double residual;
  double truncation_budget;
  size_t zeros_used;
  uint64_t prime_cutoff;
  bool within_budget;
} AzBalance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *az_version(void);

/**
 * Message for the last failed call on this thread, or NULL if it succeeded.
 *
 * The pointer stays valid until the next `az_*` call on the same thread.
 */
const char *az_last_error_message(void);

/**
 * `1 - x arctan(1/x)`.
 */
double az_f1(double x);

/**
 * `arctan(1/x) - x/(1+x^2)`, with value 0 at `x = 0`.
 */
double az_f_odd(double x);

/**
 * Closed-form `L^1` distance between an extremal function and its kernel.
 *
 * # Safety
 * `gap` must be null or point to writable memory for one `double`.
 */
enum AzStatus az_l1_gap(uint32_t parity_code, uint32_t side_code, double delta, double *gap);

/**
 * Loads a zero table from a text file or binary cache.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `table` a writable pointer slot.
 * On success `*table` owns a handle to release with [`az_zero_table_free`].
 */
enum AzStatus az_zero_table_load(const char *path, struct AzZeroTable **table);

/**
 * Builds a table from `len` increasing ordinates.
 *
 * # Safety
 * `ordinates` must point to `len` readable doubles; `table` as for
 * [`az_zero_table_load`].
 */
enum AzStatus az_zero_table_from_ordinates(const double *ordinates,
                                           size_t len,
                                           double height_max,
                                           struct AzZeroTable **table);

/**
 * # Safety
 * `table` must be null or a handle from this library not yet freed.
 */
void az_zero_table_free(struct AzZeroTable *table);

/**
 * Number of ordinates; 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t az_zero_table_len(const struct AzZeroTable *table);

/**
 * Height up to which the table is complete; NaN for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
double az_zero_table_height_max(const struct AzZeroTable *table);

/**
 * `S(t)` from zero counting.
 *
 * # Safety
 * `table` must be a live handle and `s` writable.
 */
enum AzStatus az_oracle_s(const struct AzZeroTable *table, double t, double *s);

/**
 * `S_1(t) = int_0^t S`.
 *
 * # Safety
 * `table` must be a live handle and `s1` writable.
 */
enum AzStatus az_oracle_s1(const struct AzZeroTable *table, double t, double *s1);

/**
 * Envelope `(1/4) log t / log log t` for `|S(t)|`.
 *
 * # Safety
 * `envelope` must be writable.
 */
enum AzStatus az_s_envelope(double t, double *envelope);

/**
 * Lower and upper envelopes for `S_1(t)`.
 *
 * # Safety
 * `lower` and `upper` must be writable.
 */
enum AzStatus az_s1_envelope(double t, double *lower, double *upper);

/**
 * Builds an extremal series accurate to `tolerance` on `|x| <= x_max`.
 *
 * # Safety
 * `series` must be a writable pointer slot. On success `*series` owns a
 * handle to release with [`az_extremal_free`].
 */
enum AzStatus az_extremal_new(uint32_t parity_code,
                              uint32_t side_code,
                              double delta,
                              double x_max,
                              double tolerance,
                              struct AzExtremal **series);

/**
 * # Safety
 * `series` must be null or a handle from this library not yet freed.
 */
void az_extremal_free(struct AzExtremal *series);

/**
 * Value of the series at real `x`.
 *
 * # Safety
 * `series` must be a live handle and `value` writable.
 */
enum AzStatus az_extremal_eval(const struct AzExtremal *series, double x, double *value);

/**
 * Fourier transform of the series at `xi`.
 *
 * # Safety
 * `series` must be a live handle; `re` and `im` writable.
 */
enum AzStatus az_extremal_fourier(const struct AzExtremal *series,
                                  double xi,
                                  double *re,
                                  double *im);

/**
 * Sieves `Lambda(n)` for `n <= cutoff`.
 *
 * # Safety
 * `table` must be a writable pointer slot; release the result with
 * [`az_von_mangoldt_free`].
 */
enum AzStatus az_von_mangoldt_new(uint64_t cutoff, struct AzVonMangoldt **table);

/**
 * # Safety
 * `table` must be null or a handle from this library not yet freed.
 */
void az_von_mangoldt_free(struct AzVonMangoldt *table);

/**
 * `Lambda(n)`, zero beyond the cutoff or for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
double az_von_mangoldt(const struct AzVonMangoldt *table, uint64_t n);

/**
 * Explicit-formula balance for the Gaussian of the given width at `center`.
 *
 * # Safety
 * `zeros` and `primes` must be live handles and `report` writable.
 */
enum AzStatus az_balance_gaussian(const struct AzZeroTable *zeros,
                                  const struct AzVonMangoldt *primes,
                                  double center,
                                  double width,
                                  double tolerance,
                                  struct AzBalance *report);

/**
 * Explicit-formula balance for `x -> g(t - x)` with `g` the given series.
 *
 * # Safety
 * `zeros`, `primes` and `series` must be live handles and `report` writable.
 */
enum AzStatus az_balance_extremal(const struct AzZeroTable *zeros,
                                  const struct AzVonMangoldt *primes,
                                  const struct AzExtremal *series,
                                  double t,
                                  double tolerance,
                                  struct AzBalance *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARGZETA_H */
