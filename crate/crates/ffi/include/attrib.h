#ifndef ATTRIB_H
#define ATTRIB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call.
typedef enum AttribStatus {
  ATTRIB_STATUS_OK = 0,
  // A required pointer argument was null.
  ATTRIB_STATUS_NULL_ARGUMENT = 1,
  // Malformed argument: bad UTF-8, bad date, index out of range.
  ATTRIB_STATUS_INVALID_ARGUMENT = 2,
  // Inconsistent configuration.
  ATTRIB_STATUS_CONFIG = 3,
  // Malformed panel data or inputs that do not match it: unknown factor
  // or date, missing or invalid update order.
  ATTRIB_STATUS_DATA = 4,
  // Model evaluated outside its domain.
  ATTRIB_STATUS_DOMAIN = 5,
  // I/O failure or any other error.
  ATTRIB_STATUS_OTHER = 6,
  // A panic was caught at the boundary.
  ATTRIB_STATUS_INTERNAL = 7,
} AttribStatus;

typedef enum AttribGranularity {
  ATTRIB_GRANULARITY_ANNUAL = 0,
  ATTRIB_GRANULARITY_QUARTERLY = 1,
  ATTRIB_GRANULARITY_MONTHLY = 2,
  ATTRIB_GRANULARITY_WEEKLY = 3,
  ATTRIB_GRANULARITY_DAILY = 4,
} AttribGranularity;

typedef enum AttribMethod {
  ATTRIB_METHOD_OAT = 0,
  ATTRIB_METHOD_SU = 1,
  ATTRIB_METHOD_ASU = 2,
} AttribMethod;

// Pricing model.
typedef struct AttribModel AttribModel;

// Risk-factor panel.
typedef struct AttribPanel AttribPanel;

// Decomposition result.
typedef struct AttribResult AttribResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message on this thread, or null if the last call succeeded.
// The pointer stays valid until the next call on this thread.
const char *attrib_last_error(void);

// Library version as a static nul-terminated string.
const char *attrib_version(void);

// Parses a panel from CSV text (`date,<factor>...`, ISO dates).
//
// # Safety
// `csv` must be a nul-terminated string; `out` must be writable.
enum AttribStatus attrib_panel_from_csv(const char *csv, struct AttribPanel **out);

// Reads a panel from a CSV file.
//
// # Safety
// `path` must be a nul-terminated string; `out` must be writable.
enum AttribStatus attrib_panel_from_file(const char *path, struct AttribPanel **out);

// Number of dates in the panel; 0 for a null handle.
//
// # Safety
// `panel` must be null or a live panel handle.
size_t attrib_panel_num_dates(const struct AttribPanel *panel);

// Number of factor columns; 0 for a null handle.
//
// # Safety
// `panel` must be null or a live panel handle.
size_t attrib_panel_num_factors(const struct AttribPanel *panel);

// # Safety
// `panel` must be null or a handle not yet freed.
void attrib_panel_free(struct AttribPanel *panel);

// Constant-maturity zero bond in foreign currency on factors IR, CS, FX.
//
// # Safety
// `out` must be writable.
enum AttribStatus attrib_model_bond(double maturity, struct AttribModel **out);

// FX-hedged foreign equity on factors FX, EQ, hedged at `(x0, y0)`.
//
// # Safety
// `out` must be writable.
enum AttribStatus attrib_model_hedged(double x0, double y0, struct AttribModel **out);

// Number of model factors; 0 for a null handle.
//
// # Safety
// `model` must be null or a live model handle.
size_t attrib_model_num_factors(const struct AttribModel *model);

// Prices the model at `values`, given in the model's factor order.
//
// # Safety
// `values` must point to `len` doubles; `out` must be writable.
enum AttribStatus attrib_model_price(const struct AttribModel *model,
                                     const double *values,
                                     size_t len,
                                     double *out);

// # Safety
// `model` must be null or a handle not yet freed.
void attrib_model_free(struct AttribModel *model);

// Decomposes the P&L of `model` over `[start, end]`, split at the given
// calendar granularity. `order` lists `order_len` factor names and is
// required for SU only; pass null and 0 otherwise.
//
// # Safety
// Handles must be live; strings nul-terminated; `order` must point to
// `order_len` strings when non-null; `out` must be writable.
enum AttribStatus attrib_decompose(const struct AttribModel *model,
                                   const struct AttribPanel *panel,
                                   const char *start,
                                   const char *end,
                                   enum AttribGranularity granularity,
                                   enum AttribMethod method,
                                   const char *const *order,
                                   size_t order_len,
                                   struct AttribResult **out);

// Number of factors in the result; 0 for a null handle.
//
// # Safety
// `result` must be null or a live result handle.
size_t attrib_result_num_factors(const struct AttribResult *result);

// Name of factor `index`, or null when out of range. Owned by the result.
//
// # Safety
// `result` must be null or a live result handle.
const char *attrib_result_factor_name(const struct AttribResult *result, size_t index);

// Contribution of factor `index`.
//
// # Safety
// `result` must be a live result handle; `out` must be writable.
enum AttribStatus attrib_result_contribution(const struct AttribResult *result,
                                             size_t index,
                                             double *out);

// Part of the P&L not assigned to any factor; zero for SU and ASU.
//
// # Safety
// `result` must be null or a live result handle.
double attrib_result_unexplained(const struct AttribResult *result);

// Total P&L over the period.
//
// # Safety
// `result` must be null or a live result handle.
double attrib_result_delta_p(const struct AttribResult *result);

// Number of sub-intervals the period was split into.
//
// # Safety
// `result` must be null or a live result handle.
size_t attrib_result_num_intervals(const struct AttribResult *result);

// # Safety
// `result` must be null or a handle not yet freed.
void attrib_result_free(struct AttribResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ATTRIB_H */
