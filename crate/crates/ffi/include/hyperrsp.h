#ifndef HYPERRSP_H
#define HYPERRSP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Number of amplitudes in Bob's two-qubit state.
#define RSP_BOB_DIM 4

// Status code returned by every entry point.
typedef enum RspStatus {
  RSP_STATUS_OK = 0,
  RSP_STATUS_NULL_POINTER = 1,
  RSP_STATUS_INVALID_PARAMS = 2,
  RSP_STATUS_INVALID_ARGUMENT = 3,
  RSP_STATUS_INVALID_FRAME = 4,
  RSP_STATUS_OUT_OF_RANGE = 5,
  RSP_STATUS_BUFFER_TOO_SMALL = 6,
  RSP_STATUS_INTERNAL = 7,
  RSP_STATUS_PANIC = 8,
} RspStatus;

typedef enum RspProtocol {
  // Polarization-frequency.
  RSP_PROTOCOL_PF = 0,
  // Polarization-time-bin.
  RSP_PROTOCOL_TB = 1,
} RspProtocol;

// Every branch of one protocol run, verified.
typedef struct RspRun RspRun;

// Repeated single-shot draws for one (protocol, params) pair.
typedef struct RspSampler RspSampler;

// Target (α0|H⟩+β0|V⟩)⊗(α|x⟩+β|y⟩). PF reads (alpha1, beta1) for the second
// factor and TB reads (alpha2, beta2); each pair must have unit norm.
typedef struct RspParams {
  double alpha0;
  double beta0;
  double alpha1;
  double beta1;
  double alpha2;
  double beta2;
} RspParams;

// One detection branch of a protocol run.
typedef struct RspBranchInfo {
  // 0 for H, 1 for V.
  uint8_t polarization;
  // Index into the protocol's path list (see `rsp_path_name`).
  uint8_t path_index;
  // Code Alice sends over the classical channel.
  uint8_t outcome_code;
  // Pauli factors of Bob's correction on polarization and on the second
  // DoF: 0 = I, 1 = σx, 2 = iσy, 3 = σz.
  uint8_t correction[2];
  double probability;
  // Fidelity after correction, NaN for a zero-probability branch.
  double fidelity;
  // Whether the tabulated correction is among those an exhaustive search accepts.
  bool table_matches_search;
  bool passed;
} RspBranchInfo;

typedef struct RspComplex {
  double re;
  double im;
} RspComplex;

typedef struct RspSampleStats {
  uint64_t trials;
  uint64_t detected;
  double success_rate;
  // NaN when nothing was detected.
  double mean_fidelity;
  // NaN when nothing was detected.
  double min_fidelity;
} RspSampleStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code.
const char *rsp_status_message(enum RspStatus status);

// Library version as a static NUL-terminated string.
const char *rsp_version(void);

// Runs and verifies every branch of `protocol` for `params`.
//
// # Safety
// `params` must be null or point to a valid [`RspParams`]; `out` must be null
// or valid for writing one pointer. Release the handle with [`rsp_run_free`].
enum RspStatus rsp_run_protocol(enum RspProtocol protocol,
                                const struct RspParams *params,
                                struct RspRun **out);

// # Safety
// `run` must be null or a handle from [`rsp_run_protocol`] not yet freed.
void rsp_run_free(struct RspRun *run);

// # Safety
// `run` must be a live handle; `out` must be valid for writes.
enum RspStatus rsp_run_branch_count(const struct RspRun *run, size_t *out);

// Writes whether every branch reached the target with its tabulated correction.
//
// # Safety
// `run` must be a live handle; `out` must be valid for writes.
enum RspStatus rsp_run_passed(const struct RspRun *run, bool *out);

// # Safety
// `run` must be a live handle; `out` must be valid for writes.
enum RspStatus rsp_run_branch_info(const struct RspRun *run,
                                   size_t index,
                                   struct RspBranchInfo *out);

// Copies Bob's state in branch `index`, before (`corrected == false`) or
// after the correction, as [`RSP_BOB_DIM`] amplitudes ordered
// (H,x), (H,y), (V,x), (V,y) with x, y = ω1, ω2 or e, l.
//
// # Safety
// `run` must be a live handle; `out` must be valid for `len` writes.
enum RspStatus rsp_run_bob_state(const struct RspRun *run,
                                 size_t index,
                                 bool corrected,
                                 struct RspComplex *out,
                                 size_t len);

// Writes the NUL-terminated name of path `index` (e.g. "a1", "kp3") into `buf`.
//
// # Safety
// `buf` must be valid for `len` writes.
enum RspStatus rsp_path_name(enum RspProtocol protocol, uint8_t index, char *buf, size_t len);

// Creates a sampler drawing detections for `protocol` and `params` from the
// seeded generator.
//
// # Safety
// `params` must point to a valid [`RspParams`]; `out` must be valid for
// writes. Release the handle with [`rsp_sampler_free`].
enum RspStatus rsp_sampler_new(enum RspProtocol protocol,
                               const struct RspParams *params,
                               uint64_t seed,
                               struct RspSampler **out);

// Draws one detection; writes its channel code and Bob's corrected state.
//
// # Safety
// `sampler` must be a live handle; `code` must be valid for writes and
// `state` for `len` writes.
enum RspStatus rsp_sampler_next(struct RspSampler *sampler,
                                uint8_t *code,
                                struct RspComplex *state,
                                size_t len);

// # Safety
// `sampler` must be null or a handle from [`rsp_sampler_new`] not yet freed.
void rsp_sampler_free(struct RspSampler *sampler);

// Monte Carlo run with detector efficiency `eta_d` on both sides.
//
// # Safety
// `params` must point to a valid [`RspParams`]; `out` must be valid for writes.
enum RspStatus rsp_sample_with_loss(enum RspProtocol protocol,
                                    const struct RspParams *params,
                                    double eta_d,
                                    uint64_t trials,
                                    uint64_t seed,
                                    struct RspSampleStats *out);

// Efficiency q_s / (q_u + b_t) as a reduced fraction.
//
// # Safety
// `numerator` and `denominator` must be valid for writes.
enum RspStatus rsp_protocol_efficiency(enum RspProtocol protocol,
                                       uint64_t *numerator,
                                       uint64_t *denominator);

// Classical bits needed to name a detection outcome.
//
// # Safety
// `out` must be valid for writes.
enum RspStatus rsp_payload_bits(enum RspProtocol protocol, uint32_t *out);

// Encodes the detection (polarization 0/1, path index) as a 3-byte frame.
//
// # Safety
// `frame` must be valid for 3 writes.
enum RspStatus rsp_encode_outcome(enum RspProtocol protocol,
                                  uint8_t polarization,
                                  uint8_t path_index,
                                  uint8_t *frame);

// Decodes a frame into its protocol, polarization (0/1) and path index.
//
// # Safety
// `frame` must be valid for `len` reads; the out-pointers for writes.
enum RspStatus rsp_decode_frame(const uint8_t *frame,
                                size_t len,
                                enum RspProtocol *protocol,
                                uint8_t *polarization,
                                uint8_t *path_index);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERRSP_H */
