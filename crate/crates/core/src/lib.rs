//! Exact matrix product states for Slater determinants.
//!
//! The crate builds matrix product operators (MPOs) for creation operators of
//! delocalized orbitals and stacks them into matrix product states (MPS). A
//! Slater determinant of `N` orbitals on `L` sites becomes an MPS of bond
//! dimension `2^N`, independent of `L`. Every construction has a dense
//! brute-force counterpart for cross-checking at small `L`.
//!
//! Module map:
//!
//! - [`tensor`]: dense complex matrices, Kronecker products, eigenvalues, partial traces
//! - [`orbitals`]: orthonormal orbital sets
//! - [`mpo`]: creation-operator MPOs and their dense Jordan-Wigner oracle
//! - [`mps`]: the Slater-determinant MPS, amplitudes and determinant oracle
//! - [`entanglement`]: half-chain von Neumann entropy
//! - [`basis_change`]: the grid network for a change of one-body basis
//! - [`ci`]: MPOs for the two-determinant operator `α c̃₁†c̃₂† + β c̃₃†c̃₄†`
//! - [`io`]: JSON file formats shared by the CLI and the C bindings
//!
//! ```
//! use slater_mps::{build_slater_mps, determinant_oracle, OrbitalSet, Occupation, Statistics};
//!
//! let orbitals = OrbitalSet::random_orthonormal(6, 3, 42).unwrap();
//! let mps = build_slater_mps(&orbitals, Statistics::Fermion).unwrap();
//! assert_eq!(mps.bond_dim(), 8);
//!
//! let occ: Occupation = "101100".parse().unwrap();
//! let diff = mps.amplitude(&occ).unwrap() - determinant_oracle(&orbitals, &occ).unwrap();
//! assert!(diff.norm() < 1e-12);
//! ```

pub mod basis_change;
pub mod ci;
pub mod entanglement;
pub mod error;
pub mod io;
pub mod mpo;
pub mod mps;
pub mod orbitals;
pub mod tensor;

pub use basis_change::{
    build_grid, inverse_transform, sector_contract, theta_state, transform_tensor, BasisChangeGrid, ContractionStats,
};
pub use ci::{
    build_ci_block_mpo, build_ci_compact_mpo, ci_dense_oracle, ci_entropy_bound_check, ci_residuals, CiCoefficients,
    CiEntropyReport, CiResiduals,
};
pub use entanglement::{halfcut_entropy, reduced_spectrum_check, vn_entropy, EntropyReport};
pub use error::{Error, Result};
pub use mpo::{
    adjoint_mpo, apply_mpo_to_mps, build_creation_mpo, jw_dense_creation, set_boundary_mode, BoundaryMode, Mpo,
    MpoSite, Statistics,
};
pub use mps::{
    amplitude, anyonic_oracle, build_slater_mps, determinant_oracle, mps_to_dense, vacuum_mps, Mps, MpsSite, Occupation,
};
pub use orbitals::{OrbitalSet, ValidationReport};
pub use tensor::{hermitian_eigvals, kron, matmul, partial_trace, ComplexMatrix, ComplexVector, C64};

/// Hard cap on the number of sites for any dense `2^L` object.
pub const DENSE_MAX_L: usize = 12;

/// Hard cap on the particle number of a Slater MPS (bond dimension `2^12 = 4096`).
pub const MAX_PARTICLES: usize = 12;

pub(crate) fn check_dense_cap(n_sites: usize, cap: usize, what: &str) -> Result<()> {
    if n_sites > cap {
        Err(Error::Size(format!("{what} on {n_sites} sites exceeds the dense cap of {cap}")))
    } else {
        Ok(())
    }
}
