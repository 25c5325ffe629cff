#ifndef MPQW_H
#define MPQW_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

// Result codes.
typedef enum MpqwStatus {
  MPQW_STATUS_OK = 0,
  MPQW_STATUS_NULL_POINTER = 1,
  MPQW_STATUS_INVALID_ARGUMENT = 2,
  MPQW_STATUS_DOMAIN_ERROR = 3,
  MPQW_STATUS_BUFFER_TOO_SMALL = 4,
  MPQW_STATUS_PANIC = 5,
} MpqwStatus;

// Compiled walk step.
typedef struct MpqwCircuit MpqwCircuit;

// Graph size and marking layout.
typedef struct MpqwConfig MpqwConfig;

// Fixed-point phase schedule.
typedef struct MpqwSchedule MpqwSchedule;

// Message for the most recent failed call on this thread, or NULL.
// The pointer stays valid until the next failing call on the same thread.
const char *mpqw_last_error_message(void);

// Creates a graph configuration. `case_tag` is 1 (marks in every set) or
// 2 (marks in set 0 only).
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum MpqwStatus mpqw_config_new(size_t sets,
                                size_t set_size,
                                size_t marked,
                                uint8_t case_tag,
                                struct MpqwConfig **out);

// # Safety
// `config` must be NULL or a handle from [`mpqw_config_new`] not yet freed.
void mpqw_config_free(struct MpqwConfig *config);

// Creates the schedule for tolerance `epsilon` in (0, 1] and `t >= 1` pairs.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum MpqwStatus mpqw_schedule_new(double epsilon, size_t t, struct MpqwSchedule **out);

// # Safety
// `schedule` must be NULL or a handle from [`mpqw_schedule_new`] not yet freed.
void mpqw_schedule_free(struct MpqwSchedule *schedule);

// Number of step pairs `t`; the schedule has `t` alphas and `t + 1` betas.
//
// # Safety
// `schedule` must be a live handle and `out` writable.
enum MpqwStatus mpqw_schedule_len(const struct MpqwSchedule *schedule, size_t *out);

// # Safety
// `schedule` must be a live handle and `out` writable.
enum MpqwStatus mpqw_schedule_gamma(const struct MpqwSchedule *schedule, double *out);

// Copies the `t` coin phases into `buf`.
//
// # Safety
// `schedule` must be a live handle; `buf` must hold `len` doubles.
enum MpqwStatus mpqw_schedule_alphas(const struct MpqwSchedule *schedule, double *buf, size_t len);

// Copies the `t + 1` query phases into `buf`.
//
// # Safety
// `schedule` must be a live handle; `buf` must hold `len` doubles.
enum MpqwStatus mpqw_schedule_betas(const struct MpqwSchedule *schedule, double *buf, size_t len);

// Smallest guaranteed pair count with marks in every set.
//
// # Safety
// `out` must be writable.
enum MpqwStatus mpqw_min_steps_case1(double epsilon, size_t set_size, size_t *out);

// Smallest guaranteed pair count with marks in one set.
//
// # Safety
// `out` must be writable.
enum MpqwStatus mpqw_min_steps_case2(double epsilon, size_t sets, size_t set_size, size_t *out);

// Success probability after each of `0..=steps` walk steps with fixed
// phases, from the uniform arc state. `probs` must hold `steps + 1` values.
//
// # Safety
// `config` must be a live handle; `probs` must hold `probs_len` doubles.
enum MpqwStatus mpqw_simulate_plain(const struct MpqwConfig *config,
                                    double alpha,
                                    double beta,
                                    size_t steps,
                                    double *probs,
                                    size_t probs_len);

// Success probability after each of the `2t + 1` prefixes of the robust
// walk. `probs` must hold `2t + 1` values.
//
// # Safety
// `config` and `schedule` must be live handles; `probs` must hold
// `probs_len` doubles.
enum MpqwStatus mpqw_simulate_robust(const struct MpqwConfig *config,
                                     const struct MpqwSchedule *schedule,
                                     double *probs,
                                     size_t probs_len);

// Compiles one walk step. Requires `M - 1` and `N` to be powers of two.
//
// # Safety
// `config` must be a live handle and `out` writable.
enum MpqwStatus mpqw_circuit_build_step(const struct MpqwConfig *config,
                                        double alpha,
                                        double beta,
                                        struct MpqwCircuit **out);

// # Safety
// `circuit` must be NULL or a handle from [`mpqw_circuit_build_step`] not yet freed.
void mpqw_circuit_free(struct MpqwCircuit *circuit);

// Number of gates in the circuit.
//
// # Safety
// `circuit` must be a live handle and `out` writable.
enum MpqwStatus mpqw_circuit_gate_count(const struct MpqwCircuit *circuit, size_t *out);

// Writes the circuit text plus a terminating NUL into `buf`.
// `written` receives the text length without the NUL. If `len` is too
// small (or `buf` is NULL) nothing is copied, `written` still receives the
// length and the call returns `BufferTooSmall`.
//
// # Safety
// `circuit` must be a live handle, `written` writable, and `buf` NULL or
// valid for `len` bytes.
enum MpqwStatus mpqw_circuit_emit(const struct MpqwCircuit *circuit,
                                  char *buf,
                                  size_t len,
                                  size_t *written);

#endif  /* MPQW_H */
