#ifndef SLATER_MPS_H
#define SLATER_MPS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SmStatus {
  SM_STATUS_OK = 0,
  SM_STATUS_NULL_POINTER = 1,
  SM_STATUS_SHAPE = 2,
  SM_STATUS_VALIDATION = 3,
  SM_STATUS_ARGUMENT = 4,
  SM_STATUS_SIZE = 5,
  SM_STATUS_PANIC = 6,
} SmStatus;

typedef enum SmStatistics {
  SM_STATISTICS_FERMION = 0,
  SM_STATISTICS_BOSON = 1,
  // Abelian anyon; the exchange phase is passed separately.
  SM_STATISTICS_ANYON = 2,
} SmStatistics;

// Opaque matrix product state.
typedef struct SmMps SmMps;

// Opaque orbital set.
typedef struct SmOrbitals SmOrbitals;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread (empty after success).
// Valid until the next call into this library from the same thread.
const char *sm_last_error(void);

// Static description of a status code.
const char *sm_status_string(enum SmStatus status);

// Random orthonormal orbitals, deterministic in `seed`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum SmStatus sm_orbitals_random(size_t n_sites,
                                 size_t n_orbitals,
                                 uint64_t seed,
                                 struct SmOrbitals **out);

// The lowest plane waves split between the two halves of the chain.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum SmStatus sm_orbitals_plane_wave(size_t n_sites, size_t n_orbitals, struct SmOrbitals **out);

// Orbital `a` localized on site `a`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum SmStatus sm_orbitals_localized(size_t n_sites, size_t n_orbitals, struct SmOrbitals **out);

// Orbitals from `2 * n_orbitals * n_sites` interleaved doubles, row-major
// (orbital by orbital). Orthonormality is not checked here, see
// [`sm_orbitals_validate`].
//
// # Safety
// `values` must point to `2 * n_orbitals * n_sites` readable doubles and
// `out` to writable storage for one handle.
enum SmStatus sm_orbitals_from_array(size_t n_sites,
                                     size_t n_orbitals,
                                     const double *values,
                                     struct SmOrbitals **out);

// # Safety
// `orbitals` must be null or a handle returned by this library, not yet freed.
void sm_orbitals_free(struct SmOrbitals *orbitals);

// Number of sites, or 0 for a null handle.
//
// # Safety
// `orbitals` must be null or a live handle.
size_t sm_orbitals_n_sites(const struct SmOrbitals *orbitals);

// Number of orbitals, or 0 for a null handle.
//
// # Safety
// `orbitals` must be null or a live handle.
size_t sm_orbitals_n_orbitals(const struct SmOrbitals *orbitals);

// Writes the largest deviation of the Gram matrix from the identity and
// returns `SM_STATUS_VALIDATION` when it exceeds the orthonormality tolerance.
//
// # Safety
// `orbitals` must be a live handle; `max_deviation` may be null.
enum SmStatus sm_orbitals_validate(const struct SmOrbitals *orbitals, double *max_deviation);

// Amplitude of a configuration from the determinant formula.
//
// # Safety
// `orbitals` must be a live handle, `occ` must point to `len` bytes and
// `out` to two writable doubles.
enum SmStatus sm_determinant_oracle(const struct SmOrbitals *orbitals,
                                    const uint8_t *occ,
                                    size_t len,
                                    double *out);

// Builds the MPS of the determinant (or its bosonic/anyonic analogue).
// `phase` is only read for `SM_STATISTICS_ANYON`.
//
// # Safety
// `orbitals` must be a live handle and `out` writable storage for one handle.
enum SmStatus sm_mps_build(const struct SmOrbitals *orbitals,
                           enum SmStatistics stat,
                           double phase,
                           struct SmMps **out);

// # Safety
// `mps` must be null or a handle returned by this library, not yet freed.
void sm_mps_free(struct SmMps *mps);

// # Safety
// `mps` must be null or a live handle.
size_t sm_mps_n_sites(const struct SmMps *mps);

// Largest bond dimension, or 0 for a null handle.
//
// # Safety
// `mps` must be null or a live handle.
size_t sm_mps_bond_dim(const struct SmMps *mps);

// # Safety
// `mps` must be a live handle, `occ` must point to `len` bytes and `out` to
// two writable doubles.
enum SmStatus sm_mps_amplitude(const struct SmMps *mps,
                               const uint8_t *occ,
                               size_t len,
                               double *out);

// Dense statevector as `2 * 2^L` interleaved doubles; `len` is the capacity
// of `out` in doubles.
//
// # Safety
// `mps` must be a live handle and `out` must point to `len` writable doubles.
enum SmStatus sm_mps_statevector(const struct SmMps *mps, double *out, size_t len);

// Von Neumann entropy (nats) of the left half of an even chain.
//
// # Safety
// `mps` must be a live handle and `out` a writable double.
enum SmStatus sm_mps_halfcut_entropy(const struct SmMps *mps, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLATER_MPS_H */
