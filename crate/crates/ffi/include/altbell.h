#ifndef ALTBELL_H
#define ALTBELL_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AltbellMode {
  ALTBELL_MODE_EXACT = 0,
  ALTBELL_MODE_UNITARY = 1,
} AltbellMode;

typedef enum AltbellStatus {
  ALTBELL_STATUS_OK = 0,
  ALTBELL_STATUS_NULL_POINTER = 1,
  ALTBELL_STATUS_INVALID_ARGUMENT = 2,
  ALTBELL_STATUS_SINGULAR_MATRIX = 3,
  ALTBELL_STATUS_INVALID_BASIS = 4,
  ALTBELL_STATUS_PARAM_OUT_OF_RANGE = 5,
  ALTBELL_STATUS_UNNORMALIZED_INPUT = 6,
  ALTBELL_STATUS_UNKNOWN_CIRCUIT = 7,
  ALTBELL_STATUS_PARSE_ERROR = 8,
  ALTBELL_STATUS_PANIC = 99,
} AltbellStatus;

typedef enum AltbellVerdict {
  ALTBELL_VERDICT_EXACT = 0,
  ALTBELL_VERDICT_PHASE_EQUIVALENT = 1,
  ALTBELL_VERDICT_MISMATCH = 2,
} AltbellVerdict;

/**
 * Opaque handle to a validated entangled basis.
 */
typedef struct AltbellBasis AltbellBasis;

/**
 * Opaque handle to the result of a teleport run.
 */
typedef struct AltbellTeleportRun AltbellTeleportRun;

typedef struct AltbellComplex {
  double re;
  double im;
} AltbellComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *altbell_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *altbell_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void altbell_string_free(char *s);

/**
 * Builds a built-in basis family. Pass NaN for a parameter the family does
 * not use.
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum AltbellStatus altbell_basis_builtin(const char *name,
                                         double theta,
                                         double lambda,
                                         struct AltbellBasis **out);

/**
 * Parses and validates a basis from its JSON file format.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum AltbellStatus altbell_basis_from_json(const char *json, struct AltbellBasis **out);

/**
 * Serializes a basis to its JSON file format.
 *
 * # Safety
 * `basis` must be a live handle and `out` a valid pointer.
 */
enum AltbellStatus altbell_basis_to_json(const struct AltbellBasis *basis, char **out);

/**
 * Releases a basis handle. Null is ignored.
 *
 * # Safety
 * `basis` must come from this library and not have been freed already.
 */
void altbell_basis_free(struct AltbellBasis *basis);

/**
 * Writes matrix `A_index` (row-major, 4 entries) to `out`.
 *
 * # Safety
 * `basis` must be a live handle; `out` must hold 4 elements.
 */
enum AltbellStatus altbell_basis_matrix(const struct AltbellBasis *basis,
                                        size_t index,
                                        struct AltbellComplex *out);

/**
 * Writes `T` and `T⁻¹` (row-major, 16 entries each). Either output may be
 * null if not wanted.
 *
 * # Safety
 * `basis` must be a live handle; non-null outputs must hold 16 elements.
 */
enum AltbellStatus altbell_basis_transform(const struct AltbellBasis *basis,
                                           struct AltbellComplex *out_t,
                                           struct AltbellComplex *out_t_inv);

/**
 * Coefficients of the computational state `|j⟩` over the basis states.
 *
 * # Safety
 * `basis` must be a live handle; `out` must hold 4 elements.
 */
enum AltbellStatus altbell_basis_expand(const struct AltbellBasis *basis,
                                        size_t j,
                                        struct AltbellComplex *out);

/**
 * Runs the teleportation protocol for payload `psi` (2 amplitudes, must be
 * normalized within 1e-9) with `|V_sender⟩` as the shared state.
 *
 * # Safety
 * `basis` must be a live handle, `psi` must hold 2 elements and `out` must
 * be a valid pointer.
 */
enum AltbellStatus altbell_teleport_run(const struct AltbellBasis *basis,
                                        const struct AltbellComplex *psi,
                                        size_t sender,
                                        uint64_t shots,
                                        uint64_t seed,
                                        enum AltbellMode mode,
                                        struct AltbellTeleportRun **out);

/**
 * Releases a teleport run handle. Null is ignored.
 *
 * # Safety
 * `run` must come from this library and not have been freed already.
 */
void altbell_teleport_run_free(struct AltbellTeleportRun *run);

/**
 * Outcome probabilities `p_k` (4 entries).
 *
 * # Safety
 * `run` must be a live handle; `out` must hold 4 elements.
 */
enum AltbellStatus altbell_teleport_run_probabilities(const struct AltbellTeleportRun *run,
                                                      double *out);

/**
 * Sampled outcome counts (4 entries).
 *
 * # Safety
 * `run` must be a live handle; `out` must hold 4 elements.
 */
enum AltbellStatus altbell_teleport_run_counts(const struct AltbellTeleportRun *run, uint64_t *out);

/**
 * Probability-weighted fidelity for the run's mode; the sampled fidelity is
 * written to `out_sampled` (NaN when no shots were taken) if it is non-null.
 *
 * # Safety
 * `run` must be a live handle; `out_expected` must be valid.
 */
enum AltbellStatus altbell_teleport_run_fidelity(const struct AltbellTeleportRun *run,
                                                 double *out_expected,
                                                 double *out_sampled);

/**
 * Full run report as pretty-printed JSON.
 *
 * # Safety
 * `run` must be a live handle and `out` a valid pointer.
 */
enum AltbellStatus altbell_teleport_run_to_json(const struct AltbellTeleportRun *run, char **out);

/**
 * `det` of the coefficient matrix of `c0|00⟩ + c1|01⟩ + c2|10⟩ + c3|11⟩`
 * after normalization.
 *
 * # Safety
 * `amps` must hold 4 elements and `out` must be valid.
 */
enum AltbellStatus altbell_entanglement_determinant(const struct AltbellComplex *amps,
                                                    struct AltbellComplex *out);

/**
 * Unitary polar factor of a nonsingular 2×2 matrix (row-major).
 *
 * # Safety
 * `m` and `out` must each hold 4 elements.
 */
enum AltbellStatus altbell_polar_unitary(const struct AltbellComplex *m,
                                         struct AltbellComplex *out);

/**
 * Verifies a catalog circuit. `family` selects the shared hyperbolic/scale
 * teleport circuit (0 hyperbolic, 1 scale). The full report is written as
 * JSON to `out_json` when it is non-null.
 *
 * # Safety
 * `id` must be a nul-terminated string, `out_verdict` valid.
 */
enum AltbellStatus altbell_circuit_verify(const char *id,
                                          double theta,
                                          double lambda,
                                          size_t matrix_index,
                                          uint32_t family,
                                          enum AltbellVerdict *out_verdict,
                                          char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALTBELL_H */
