#ifndef PCSNS_H
#define PCSNS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PcsnsStatus {
  PCSNS_STATUS_OK = 0,
  PCSNS_STATUS_NULL_POINTER = 1,
  PCSNS_STATUS_INVALID_UTF8 = 2,
  PCSNS_STATUS_CONFIG_ERROR = 3,
  PCSNS_STATUS_RUNTIME_ERROR = 4,
  PCSNS_STATUS_OUT_OF_RANGE = 5,
  PCSNS_STATUS_PANIC = 6,
} PcsnsStatus;

typedef enum PcsnsMode {
  PCSNS_MODE_FULL = 0,
  PCSNS_MODE_SNS = 1,
  PCSNS_MODE_PC_SNS = 2,
} PcsnsMode;

/**
 * Opaque experiment configuration.
 */
typedef struct PcsnsConfig PcsnsConfig;

/**
 * Opaque result of [`pcsns_run`].
 */
typedef struct PcsnsReport PcsnsReport;

typedef struct PcsnsSummary {
  enum PcsnsMode mode;
  size_t l_c;
  size_t l_s;
  double r_u_m;
  double v_u_mps;
  double noise_floor_db;
  double pslr_db;
  size_t peak_count;
  size_t peaks_above_3db;
} PcsnsSummary;

typedef struct PcsnsPeak {
  size_t range_bin;
  int64_t doppler_bin;
  double range_m;
  double velocity_mps;
  double power_db;
} PcsnsPeak;

typedef struct PcsnsMetrics {
  double bandwidth_hz;
  double range_resolution_m;
  double r_max_m;
  double velocity_resolution_mps;
  double v_max_mps;
  double wavelength_m;
} PcsnsMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next call into this library from the same thread.
 */
const char *pcsns_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pcsns_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void pcsns_string_free(char *s);

/**
 * Creates a configuration from a built-in preset name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PcsnsStatus pcsns_config_from_preset(const char *name, struct PcsnsConfig **out);

/**
 * Parses and validates a TOML configuration.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PcsnsStatus pcsns_config_from_toml(const char *text, struct PcsnsConfig **out);

/**
 * Serialises a configuration to TOML. Free the result with [`pcsns_string_free`].
 *
 * # Safety
 * `cfg` must be a live handle and `out` a valid pointer.
 */
enum PcsnsStatus pcsns_config_to_toml(const struct PcsnsConfig *cfg, char **out);

/**
 * # Safety
 * `cfg` must be NULL or a handle not yet freed.
 */
void pcsns_config_free(struct PcsnsConfig *cfg);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum PcsnsStatus pcsns_config_set_mode(struct PcsnsConfig *cfg, enum PcsnsMode mode);

/**
 * Sets the code split. Consistency with the mode is checked by [`pcsns_config_validate`] and [`pcsns_run`].
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum PcsnsStatus pcsns_config_set_code(struct PcsnsConfig *cfg,
                                       size_t l_c,
                                       size_t l_s);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum PcsnsStatus pcsns_config_set_noise(struct PcsnsConfig *cfg,
                                        double noise_power,
                                        uint64_t noise_seed);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum PcsnsStatus pcsns_config_set_symbol_seed(struct PcsnsConfig *cfg, uint64_t seed);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum PcsnsStatus pcsns_config_clear_targets(struct PcsnsConfig *cfg);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum PcsnsStatus pcsns_config_add_target(struct PcsnsConfig *cfg,
                                         double range_m,
                                         double velocity_mps,
                                         double amplitude_re,
                                         double amplitude_im);

/**
 * Sets the output directory and switches all file outputs on or off.
 *
 * # Safety
 * `cfg` must be a live handle; `dir` may be NULL to keep the current directory.
 */
enum PcsnsStatus pcsns_config_set_output(struct PcsnsConfig *cfg,
                                         const char *dir,
                                         bool write_files);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum PcsnsStatus pcsns_config_validate(const struct PcsnsConfig *cfg);

/**
 * Runs the configured experiment and writes the enabled outputs.
 *
 * # Safety
 * `cfg` must be a live handle and `out` a valid pointer.
 */
enum PcsnsStatus pcsns_run(const struct PcsnsConfig *cfg, struct PcsnsReport **out);

/**
 * # Safety
 * `report` must be NULL or a handle not yet freed.
 */
void pcsns_report_free(struct PcsnsReport *report);

/**
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum PcsnsStatus pcsns_report_summary(const struct PcsnsReport *report, struct PcsnsSummary *out);

/**
 * Peak `index` in descending power order.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum PcsnsStatus pcsns_report_peak(const struct PcsnsReport *report,
                                   size_t index,
                                   struct PcsnsPeak *out);

/**
 * Dimensions of the range-Doppler map (range bins × Doppler bins).
 *
 * # Safety
 * `report` must be a live handle; `rows` and `cols` valid pointers.
 */
enum PcsnsStatus pcsns_report_map_dims(const struct PcsnsReport *report,
                                       size_t *rows,
                                       size_t *cols);

/**
 * Copies the linear map power, row-major, into `buf` of `len` doubles.
 * `len` must equal rows × cols.
 *
 * # Safety
 * `report` must be a live handle and `buf` valid for `len` writes.
 */
enum PcsnsStatus pcsns_report_map_power(const struct PcsnsReport *report, double *buf, size_t len);

/**
 * Radar figures of merit for a numerology.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PcsnsStatus pcsns_derive_metrics(size_t n_subcarriers,
                                      size_t n_symbols,
                                      double subcarrier_spacing_hz,
                                      double carrier_freq_hz,
                                      double cp_duration_s,
                                      double speed_of_light_mps,
                                      struct PcsnsMetrics *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PCSNS_H */
