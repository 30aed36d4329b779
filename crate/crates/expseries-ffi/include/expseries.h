/*
 * C interface to an exact power series kernel.
 *
 * Handles are opaque, owned by the caller, and released with the matching
 * *_free; freeing null is a no-op. Rationals cross the boundary as
 * NUL-terminated UTF-8 strings of the form "p/q" or "p"; strings returned
 * through char ** out-parameters must be released with
 * expseries_string_free. Fallible calls return an ExpseriesStatus and
 * write their result through the final out-pointer only on
 * EXPSERIES_STATUS_OK. A handle may be used by one thread at a time.
 */

#ifndef EXPSERIES_H
#define EXPSERIES_H

/* Generated by cbindgen from expseries-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>
/* Largest accepted series order, table window, or coefficient count;
 * the bound the comments below call MAX_EXTENT. */
#define EXPSERIES_MAX_EXTENT (1 << 20)

// Result of every fallible call in this interface.
typedef enum {
  // The call succeeded and the out-parameter holds the result.
  EXPSERIES_STATUS_OK = 0,
  // A required pointer argument was null.
  EXPSERIES_STATUS_NULL_ARGUMENT = 1,
  // An index, size, or range was outside what the target supports.
  EXPSERIES_STATUS_INVALID_ARGUMENT = 2,
  // A string argument was not valid UTF-8 or not a rational in `p/q`
  // form.
  EXPSERIES_STATUS_PARSE_ERROR = 3,
  // The input violated a mathematical precondition, such as decomposing
  // a series that is not `x + O(x^2)`.
  EXPSERIES_STATUS_PRECONDITION = 4,
} ExpseriesStatus;

// Opaque list of factor coefficients `b_1, b_2, ...` of a decomposition
// into exponentials of single derivations.
typedef struct ExpseriesDecomposition ExpseriesDecomposition;

// Opaque table of Laurent coefficients of `e^{mx}/(e^x - 1)^n`.
typedef struct ExpseriesQTable ExpseriesQTable;

// Opaque truncated power series with exact rational coefficients.
typedef struct ExpseriesSeries ExpseriesSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a series from its coefficients in degree order, constant first.
// `coeffs` must point at `len` rational strings, `1 <= len <= MAX_EXTENT`;
// the resulting order is `len - 1`.
ExpseriesStatus expseries_series_new(const char *const *coeffs, size_t len, ExpseriesSeries **out);

// `(e^{ax} - 1)/a` truncated at `order` (the identity `x` when `a` is 0).
ExpseriesStatus expseries_series_exponential(const char *a, size_t order, ExpseriesSeries **out);

// The identity series `x` truncated at `order >= 1`.
ExpseriesStatus expseries_series_identity(size_t order, ExpseriesSeries **out);

// Truncation order of the series.
ExpseriesStatus expseries_series_order(const ExpseriesSeries *series, size_t *out);

// Coefficient of `x^k` as a rational string; `k` beyond the order is an
// `InvalidArgument`.
ExpseriesStatus expseries_series_coeff(const ExpseriesSeries *series, size_t k, char **out);

// Compositional inverse through the stored order; the input must have the
// shape `x + O(x^2)`.
ExpseriesStatus expseries_series_reversion(const ExpseriesSeries *series, ExpseriesSeries **out);

void expseries_series_free(ExpseriesSeries *series);

// Factors a normalized series into `exp(b_j x^{j+1} d/dx)` coefficients.
ExpseriesStatus expseries_decompose(const ExpseriesSeries *series, ExpseriesDecomposition **out);

// Number of stored factor coefficients `b_1 .. b_len`.
ExpseriesStatus expseries_decomposition_len(const ExpseriesDecomposition *decomposition,
                                            size_t *out);

// Factor coefficient `b_j` as a rational string, 1-indexed.
ExpseriesStatus expseries_decomposition_coefficient(const ExpseriesDecomposition *decomposition,
                                                    size_t j,
                                                    char **out);

// Applies the factors to `g` in ascending order, or descending when
// `reversed`; `negated` flips every coefficient's sign. Reversed and
// negated together build the compositional inverse factor by factor.
ExpseriesStatus expseries_decomposition_apply(const ExpseriesDecomposition *decomposition,
                                              const ExpseriesSeries *g,
                                              bool reversed,
                                              bool negated,
                                              ExpseriesSeries **out);

void expseries_decomposition_free(ExpseriesDecomposition *decomposition);

// Expands `e^{mx}/(e^x - 1)^n` through exponent `top`; requires
// `top >= -n` and a window of at most `MAX_EXTENT` entries.
ExpseriesStatus expseries_qtable_expand(int64_t m, int64_t n, int64_t top, ExpseriesQTable **out);

// The `m = 1` table computed by the index recursion instead of expansion,
// covering offsets `0 ..= jmax` past the leading exponent `-n`.
ExpseriesStatus expseries_qtable_recursive(int64_t n, uint32_t jmax, ExpseriesQTable **out);

// Lowest exponent of the stored window (always `-n`).
ExpseriesStatus expseries_qtable_lowest(const ExpseriesQTable *table, int64_t *out);

// Highest exponent of the stored window.
ExpseriesStatus expseries_qtable_top(const ExpseriesQTable *table, int64_t *out);

// Coefficient of `x^k` as a rational string. Below the window the value
// is zero by construction; above the stored top it is unknown, and the
// call returns `InvalidArgument`.
ExpseriesStatus expseries_qtable_value(const ExpseriesQTable *table, int64_t k, char **out);

void expseries_qtable_free(ExpseriesQTable *table);

// Bernoulli number `B_j` in the convention with `B_1 = 1/2`.
ExpseriesStatus expseries_bernoulli_number(size_t j, char **out);

// Bernoulli polynomial value `B_j(t)` for a rational `t`.
ExpseriesStatus expseries_bernoulli_polynomial(size_t j, const char *t, char **out);

// Residue of `e^{my}/(e^y - 1)^n` by the closed binomial form; `n >= 1`
// and at most `MAX_EXTENT`.
ExpseriesStatus expseries_residue_formula(int64_t m, int64_t n, char **out);

// The same residue extracted from the series expansion; `n >= 1` and the
// expansion must fit in `MAX_EXTENT` entries.
ExpseriesStatus expseries_residue_oracle(int64_t m, int64_t n, char **out);

// Commutator coefficient `C(w - j - 1, k - n)` of weighted derivations,
// zero whenever `k < n`. For `k >= n` the offset `k - n` is capped at
// `MAX_EXTENT`, and `w - j - 1` must not overflow.
ExpseriesStatus expseries_commutator_coefficient(int64_t w,
                                                 int64_t j,
                                                 int64_t k,
                                                 int64_t n,
                                                 char **out);

// Releases a string returned through any `char **` out-parameter.
void expseries_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXPSERIES_H */
