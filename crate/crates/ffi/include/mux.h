#ifndef MUX_H
#define MUX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MuxBalanceLabel {
  MUX_BALANCE_LABEL_INTERIOR_SATISFIABLE = 0,
  MUX_BALANCE_LABEL_EXTERIOR_UNSATISFIABLE = 1,
  MUX_BALANCE_LABEL_STRICTLY_BALANCED = 2,
  MUX_BALANCE_LABEL_BALANCED_NOT_STRICT = 3,
  MUX_BALANCE_LABEL_UNBALANCED = 4,
} MuxBalanceLabel;

typedef enum MuxStatus {
  MUX_STATUS_OK = 0,
  MUX_STATUS_NULL_POINTER = 1,
  MUX_STATUS_INVALID_UTF8 = 2,
  MUX_STATUS_PARSE = 3,
  MUX_STATUS_INVALID_MULTIPLEX = 4,
  MUX_STATUS_INFEASIBLE_PROBABILITIES = 5,
  MUX_STATUS_CAP_EXCEEDED = 6,
  MUX_STATUS_OUTSIDE_DOMAIN = 7,
  MUX_STATUS_OVERFLOW = 8,
  MUX_STATUS_INVALID_ARGUMENT = 9,
  MUX_STATUS_PANIC = 10,
} MuxStatus;

/**
 * Opaque multiplex handle.
 */
typedef struct MuxMultiplex MuxMultiplex;

typedef struct MuxCountResult {
  uint64_t injections;
  uint64_t aut_size;
  uint64_t copies;
} MuxCountResult;

/**
 * `num / den` with `den > 0`.
 */
typedef struct MuxRational {
  int64_t num;
  int64_t den;
} MuxRational;

typedef struct MuxTheta {
  struct MuxRational theta1;
  struct MuxRational theta2;
  struct MuxRational theta12;
} MuxTheta;

typedef struct MuxSignature {
  uint32_t v;
  uint32_t a;
  uint32_t b;
  uint32_t c;
} MuxSignature;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next `mux_*` call on the same thread.
 */
const char *mux_last_error_message(void);

/**
 * Parses the JSON file format `{"n": .., "layer1": [[u,v],..], "layer2": [[u,v],..]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum MuxStatus mux_multiplex_from_json(const char *json, struct MuxMultiplex **out);

/**
 * Builds a multiplex from flat endpoint arrays: `layer1` holds
 * `2 * layer1_len` vertices `u0, v0, u1, v1, …`, likewise `layer2`.
 *
 * # Safety
 * Each array must hold at least twice its length in readable `u32`s (or
 * be null with length 0); `out` must be writable.
 */
enum MuxStatus mux_multiplex_from_edges(uint32_t n,
                                        const uint32_t *layer1,
                                        uintptr_t layer1_len,
                                        const uint32_t *layer2,
                                        uintptr_t layer2_len,
                                        struct MuxMultiplex **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `m` must come from this library and not have been freed.
 */
void mux_multiplex_free(struct MuxMultiplex *m);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
uint32_t mux_multiplex_n_vertices(const struct MuxMultiplex *m);

/**
 * Serialises to the JSON file format; free the string with `mux_string_free`.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum MuxStatus mux_multiplex_to_json(const struct MuxMultiplex *m, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void mux_string_free(char *s);

/**
 * Number of injective homomorphisms `motif → graph`.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum MuxStatus mux_count_injections(const struct MuxMultiplex *motif,
                                    const struct MuxMultiplex *graph,
                                    uint64_t *out);

/**
 * Injections, `|Aut(motif)|` and copies.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum MuxStatus mux_count_copies(const struct MuxMultiplex *motif,
                                const struct MuxMultiplex *graph,
                                struct MuxCountResult *out);

/**
 * # Safety
 * `m` must be live and `out` writable.
 */
enum MuxStatus mux_automorphism_count(const struct MuxMultiplex *m, uint64_t *out);

/**
 * Exact `Δ_H(θ)`; fails with `MUX_STATUS_OVERFLOW` when the reduced
 * fraction does not fit in 64 bits.
 *
 * # Safety
 * `m` must be live and `out` writable.
 */
enum MuxStatus mux_delta(const struct MuxMultiplex *m,
                         struct MuxTheta theta,
                         struct MuxRational *out);

/**
 * Balance label at `θ ∈ Θ`.
 *
 * # Safety
 * `m` must be live and `out` writable.
 */
enum MuxStatus mux_classify(const struct MuxMultiplex *m,
                            struct MuxTheta theta,
                            enum MuxBalanceLabel *out);

/**
 * `Φ_H(n, p)` and its minimising signature; either out-pointer may be null.
 *
 * # Safety
 * `m` must be live; non-null out-pointers must be writable.
 */
enum MuxStatus mux_phi(const struct MuxMultiplex *m,
                       uint64_t n,
                       double p1,
                       double p2,
                       double p12,
                       double *value,
                       struct MuxSignature *argmin);

/**
 * One draw of `G(n, p1, p2, p12)` on stream `(seed, rep)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MuxStatus mux_sample(uint32_t n,
                          double p1,
                          double p2,
                          double p12,
                          uint64_t seed,
                          uint64_t rep,
                          struct MuxMultiplex **out);

/**
 * `(n)_v · p1^a · p2^b · p12^c`.
 *
 * # Safety
 * `m` must be live and `out` writable.
 */
enum MuxStatus mux_exact_mean_injections(const struct MuxMultiplex *m,
                                         uint64_t n,
                                         double p1,
                                         double p2,
                                         double p12,
                                         double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MUX_H */
