//! Von Neumann entropy across a cut of the chain.
//!
//! Entropies are computed from the dense statevector and an explicit partial
//! trace, never from the MPS tensors, so they give an independent check of
//! the bond-dimension bound `S ≤ ln D`. All values are in nats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mps::{Mps, Occupation};
use crate::tensor::{hermitian_eigvals, partial_trace, ComplexMatrix, ComplexVector, C64};
use crate::{check_dense_cap, DENSE_MAX_L};

/// Eigenvalues at or below this are dropped before `λ ln λ`.
pub const EIGENVALUE_FLOOR: f64 = 1e-14;
/// Tolerance on the reduced spectrum in [`reduced_spectrum_check`].
pub const SPECTRUM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    /// Number of sites kept on the left of the cut.
    pub cut: usize,
    pub entropy_nats: f64,
    /// The same entropy in bits, `entropy_nats / ln 2`.
    pub entropy_log2: f64,
    #[serde(rename = "bond_dim")]
    pub bond_dim: usize,
}

impl EntropyReport {
    pub fn new(cut: usize, entropy_nats: f64, bond_dim: usize) -> Self {
        Self { cut, entropy_nats, entropy_log2: entropy_nats / std::f64::consts::LN_2, bond_dim }
    }

    /// `S ≤ ln D + 1e-9`.
    pub fn within_bond_bound(&self) -> bool {
        self.entropy_nats <= (self.bond_dim as f64).ln() + 1e-9
    }
}

/// `−Σ λ ln λ` over the eigenvalues of a density matrix.
pub fn vn_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let vals = hermitian_eigvals(rho)?;
    let trace: f64 = vals.iter().sum();
    if (trace - 1.0).abs() > 1e-8 {
        return Err(Error::Validation(format!("density matrix has trace {trace}")));
    }
    if let Some(&min) = vals.first() {
        if min < -1e-10 {
            return Err(Error::Validation(format!("density matrix has negative eigenvalue {min:e}")));
        }
    }
    Ok(vals.iter().filter(|&&l| l > EIGENVALUE_FLOOR).map(|&l| -l * l.ln()).sum())
}

fn normalized(state: &ComplexVector) -> Result<ComplexVector> {
    let norm = state.norm();
    if norm == 0.0 {
        return Err(Error::Validation("cannot take the entropy of the zero state".into()));
    }
    Ok(state.scale(C64::new(norm.recip(), 0.0)))
}

/// Entropy of sites `1..=cut` of a dense `n_sites` state (normalized first).
pub fn cut_entropy(state: &ComplexVector, n_sites: usize, cut: usize) -> Result<f64> {
    let rho = partial_trace(&normalized(state)?, n_sites, 0..cut)?;
    vn_entropy(&rho)
}

/// Entropy of sites `cut+1..=L`, the complement of [`cut_entropy`].
pub fn cut_entropy_right(state: &ComplexVector, n_sites: usize, cut: usize) -> Result<f64> {
    let rho = partial_trace(&normalized(state)?, n_sites, cut..n_sites)?;
    vn_entropy(&rho)
}

fn check_halfcut(mps: &Mps) -> Result<usize> {
    let l = mps.n_sites();
    check_dense_cap(l, DENSE_MAX_L, "half-cut entropy")?;
    if !l.is_multiple_of(2) {
        return Err(Error::Argument(format!("half-cut needs an even chain, got L = {l}")));
    }
    Ok(l / 2)
}

/// Entropy of the left half `1..=L/2`.
pub fn halfcut_entropy(mps: &Mps) -> Result<EntropyReport> {
    let cut = check_halfcut(mps)?;
    let state = mps.to_dense()?;
    let s = cut_entropy(&state, mps.n_sites(), cut)?;
    Ok(EntropyReport::new(cut, s, mps.bond_dim_at_cut(cut)))
}

/// Ascending eigenvalues of the left-half reduced density matrix.
pub fn reduced_spectrum(mps: &Mps) -> Result<Vec<f64>> {
    let cut = check_halfcut(mps)?;
    let state = normalized(&mps.to_dense()?)?;
    hermitian_eigvals(&partial_trace(&state, mps.n_sites(), 0..cut)?)
}

/// Particle number of a dense state, if it is sharp within `tol`.
pub fn particle_number(state: &ComplexVector, n_sites: usize, tol: f64) -> Option<usize> {
    let norm_sqr: f64 = state.entries().iter().map(|z| z.norm_sqr()).sum();
    if norm_sqr == 0.0 {
        return None;
    }
    let moments = state.entries().iter().enumerate().fold((0.0, 0.0), |(m1, m2), (idx, z)| {
        let n = Occupation::from_index(idx, n_sites).popcount() as f64;
        let w = z.norm_sqr() / norm_sqr;
        (m1 + w * n, m2 + w * n * n)
    });
    let mean: f64 = moments.0;
    let variance = moments.1 - mean * mean;
    let n = mean.round();
    ((mean - n).abs() < tol && variance.abs() < tol).then_some(n as usize)
}

/// True when the half-cut reduced density matrix is the maximally mixed
/// state on `2^N` levels: exactly `2^N` eigenvalues above [`SPECTRUM_TOL`],
/// each within [`SPECTRUM_TOL`] of `2^{−N}`. `N` is the particle number of
/// the state.
pub fn reduced_spectrum_check(mps: &Mps) -> Result<bool> {
    let spectrum = reduced_spectrum(mps)?;
    let state = mps.to_dense()?;
    let Some(n) = particle_number(&state, mps.n_sites(), SPECTRUM_TOL) else {
        return Ok(false);
    };
    let level = 0.5f64.powi(n as i32);
    let nonzero: Vec<f64> = spectrum.into_iter().filter(|&l| l > SPECTRUM_TOL).collect();
    Ok(nonzero.len() == 1 << n && nonzero.iter().all(|l| (l - level).abs() < SPECTRUM_TOL))
}
