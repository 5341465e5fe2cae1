#ifndef RACS_H
#define RACS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RacsMetric {
  RACS_METRIC_REP_EFFICIENCY = 0,
  RACS_METRIC_DMG_SELFISH = 1,
  RACS_METRIC_DMG_MALICIOUS = 2,
  RACS_METRIC_DETECTION_RATE_PCT = 3,
  RACS_METRIC_PAPER_LITERAL_PCT = 4,
} RacsMetric;

typedef enum RacsStatus {
  RACS_STATUS_OK = 0,
  RACS_STATUS_NULL_POINTER = 1,
  RACS_STATUS_INVALID_UTF8 = 2,
  /**
   * Bad configuration text, key or value.
   */
  RACS_STATUS_CONFIG = 3,
  /**
   * A numeric input outside its domain.
   */
  RACS_STATUS_RANGE = 4,
  /**
   * Proposition preconditions (α > 1, |Φ| > 3, ψ in [0, 1]) not met.
   */
  RACS_STATUS_PRECONDITION = 5,
  RACS_STATUS_IO = 6,
  /**
   * The requested metric is undefined for this report.
   */
  RACS_STATUS_UNDEFINED = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  RACS_STATUS_INTERNAL = 8,
} RacsStatus;

/**
 * Opaque simulation configuration.
 */
typedef struct RacsConfig RacsConfig;

/**
 * Opaque result of [`racs_run`].
 */
typedef struct RacsReport RacsReport;

/**
 * Outcome of one penalty decision; grades are the ASCII letters `a`..`d`,
 * and `p` is 0 for the delay variant.
 */
typedef struct RacsApdResult {
  uint8_t c;
  uint8_t e;
  uint8_t z;
  uint8_t p;
  uint8_t rho1;
  uint8_t rho2;
  uint8_t raq;
  double kappa;
} RacsApdResult;

typedef struct RacsPropositions {
  double link_theta_h;
  double link_theta_d;
  double link_margin;
  double collusion_theta_h;
  double collusion_theta_d;
  double collusion_margin;
} RacsPropositions;

/**
 * The six fields carried in the 53-bit attribute block.
 */
typedef struct RacsAttributes {
  uint32_t node_id;
  double lat;
  double long_;
  double radio_range;
  double velocity;
  double hello_interval;
} RacsAttributes;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *racs_last_error(void);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void racs_string_free(char *s);

/**
 * A configuration with the desk-scale defaults.
 */
struct RacsConfig *racs_config_new(void);

/**
 * Parses `key = value` text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum RacsStatus racs_config_parse(const char *text_ptr, struct RacsConfig **out);

/**
 * Sets one key as it would appear in a config file.
 *
 * # Safety
 * `cfg` must be a live handle; `key` and `value` NUL-terminated strings.
 */
enum RacsStatus racs_config_set(struct RacsConfig *cfg, const char *key, const char *value);

/**
 * The configuration as config-file text.
 *
 * # Safety
 * `cfg` must be a live handle or null.
 */
char *racs_config_to_text(const struct RacsConfig *cfg);

/**
 * # Safety
 * `cfg` must come from this library, or be null; it is invalid afterwards.
 */
void racs_config_free(struct RacsConfig *cfg);

/**
 * Runs every repetition of `cfg`.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum RacsStatus racs_run(const struct RacsConfig *cfg, struct RacsReport **out);

/**
 * Aggregate metric over all runs. Detection metrics are
 * [`RacsStatus::Undefined`] when no attacker acted.
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum RacsStatus racs_report_metric(const struct RacsReport *report,
                                   enum RacsMetric metric,
                                   double *out);

/**
 * Number of repetitions in the report, 0 for a null handle.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
size_t racs_report_run_count(const struct RacsReport *report);

/**
 * The metrics CSV (header plus one row). Free with [`racs_string_free`].
 *
 * # Safety
 * `report` must be a live handle or null.
 */
char *racs_report_csv(const struct RacsReport *report);

/**
 * Hex SHA-256 over the run traces. Free with [`racs_string_free`].
 *
 * # Safety
 * `report` must be a live handle or null.
 */
char *racs_report_trace_hash(const struct RacsReport *report);

/**
 * # Safety
 * `report` must come from this library, or be null; it is invalid afterwards.
 */
void racs_report_free(struct RacsReport *report);

/**
 * Fuzzifies crisp inputs and runs the rule tables. A NaN `p` selects the
 * delay variant, which has no path-fraction input.
 *
 * # Safety
 * `out` must be writable.
 */
enum RacsStatus racs_apd_eval(double c,
                              double e,
                              double z,
                              double p,
                              size_t phi_size,
                              uint32_t hop_limit,
                              struct RacsApdResult *out);

/**
 * Gains of honest reporting over deviating, for link-breakage
 * concealment and for collusion.
 *
 * # Safety
 * `out` must be writable.
 */
enum RacsStatus racs_check_props(double alpha,
                                 double phi_size,
                                 double psi1,
                                 double psi2,
                                 struct RacsPropositions *out);

/**
 * Most energy a single link breaker can waste.
 */
double racs_damage_bound(double hop_limit, double max_suspicions, double sigma, double phi_size);

/**
 * Packs the attributes into the low 53 bits of `*out`.
 *
 * # Safety
 * `attrs` must be readable and `out` writable.
 */
enum RacsStatus racs_attributes_encode(const struct RacsAttributes *attrs, uint64_t *out);

/**
 * Inverse of [`racs_attributes_encode`]; bits above 53 are a range error.
 *
 * # Safety
 * `out` must be writable.
 */
enum RacsStatus racs_attributes_decode(uint64_t bits, struct RacsAttributes *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RACS_H */
