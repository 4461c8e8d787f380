//! Orthonormal one-body orbital sets.
//!
//! An [`OrbitalSet`] stores `N` orbitals over `L` sites as an `N × L` matrix
//! whose row `α` holds `φ_α(ℓ)`. Indices are 0-based in code; file formats and
//! user-facing output count orbitals and sites from 1.
//!
//! Random sets are drawn with the ChaCha20 stream cipher generator
//! (`rand_chacha::ChaCha20Rng`, seeded through `SeedableRng::seed_from_u64`)
//! so that a seed reproduces the same set on every platform.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::tensor::{ComplexMatrix, C64, ONE, ZERO};

/// Gram-matrix deviation accepted as orthonormal.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Candidates whose norm falls below this after projection are skipped by
/// [`OrbitalSet::complete_basis`].
pub const DEPENDENCE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitalSet {
    phi: ComplexMatrix,
}

/// Outcome of [`OrbitalSet::validate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationReport {
    /// `max_{α,β} |Σ_ℓ φ_α(ℓ) φ*_β(ℓ) − δ_{αβ}|`.
    pub max_deviation: f64,
    /// Orbital pair (0-based) attaining the maximum, if any orbitals exist.
    pub worst_pair: Option<(usize, usize)>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.max_deviation < ORTHONORMAL_TOL
    }
}

impl OrbitalSet {
    /// Wraps an `N × L` matrix without checking orthonormality.
    pub fn from_matrix(phi: ComplexMatrix) -> Result<Self> {
        if phi.cols() == 0 {
            return Err(Error::Argument("orbital set needs at least one site".into()));
        }
        if phi.rows() > phi.cols() {
            return Err(Error::Argument(format!("{} orbitals do not fit on {} sites", phi.rows(), phi.cols())));
        }
        Ok(Self { phi })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        Self::from_matrix(ComplexMatrix::from_rows(rows)?)
    }

    /// Site-localized orbitals `φ_α = e_α`.
    pub fn localized(n_sites: usize, n_orbitals: usize) -> Result<Self> {
        check_counts(n_sites, n_orbitals)?;
        Self::from_matrix(ComplexMatrix::from_fn(n_orbitals, n_sites, |a, l| if a == l { ONE } else { ZERO }))
    }

    /// Orthonormalized i.i.d. complex Gaussians.
    ///
    /// Rows are orthonormalized in order by Gram-Schmidt, which is the QR
    /// decomposition with a real positive diagonal on `R`.
    pub fn random_orthonormal(n_sites: usize, n_orbitals: usize, seed: u64) -> Result<Self> {
        check_counts(n_sites, n_orbitals)?;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut rows: Vec<Vec<C64>> = Vec::with_capacity(n_orbitals);
        while rows.len() < n_orbitals {
            let mut v: Vec<C64> = (0..n_sites)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    C64::new(re, im)
                })
                .collect();
            // a Gaussian draw is dependent with probability zero; retry anyway
            if orthogonalize(&mut v, &rows) > DEPENDENCE_TOL {
                rows.push(v);
            }
        }
        Self::from_row_vecs(&rows, n_sites)
    }

    fn from_row_vecs(rows: &[Vec<C64>], n_sites: usize) -> Result<Self> {
        if rows.is_empty() {
            return Self::from_matrix(ComplexMatrix::zeros(0, n_sites));
        }
        Self::from_rows(rows)
    }

    /// `L/2`-periodic plane waves `φ_α(ℓ) = L^{-1/2} exp(4πiαℓ/L)` for
    /// `α = 1..N`, `ℓ = 1..L`.
    pub fn plane_wave_set(n_sites: usize, n_orbitals: usize) -> Result<Self> {
        if n_sites == 0 || !n_sites.is_multiple_of(2) {
            return Err(Error::Argument(format!("plane waves need an even site count, got {n_sites}")));
        }
        if 2 * n_orbitals > n_sites {
            return Err(Error::Argument(format!("plane waves need 2N <= L, got N = {n_orbitals}, L = {n_sites}")));
        }
        let norm = (n_sites as f64).sqrt().recip();
        Self::from_matrix(ComplexMatrix::from_fn(n_orbitals, n_sites, |a, l| {
            let theta = 4.0 * PI * ((a + 1) * (l + 1)) as f64 / n_sites as f64;
            C64::from_polar(norm, theta)
        }))
    }

    pub fn n_sites(&self) -> usize {
        self.phi.cols()
    }

    pub fn n_orbitals(&self) -> usize {
        self.phi.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.phi
    }

    /// Orbital `alpha` (0-based) as a slice over sites.
    pub fn orbital(&self, alpha: usize) -> &[C64] {
        self.phi.row(alpha)
    }

    pub fn value(&self, alpha: usize, site: usize) -> C64 {
        self.phi[(alpha, site)]
    }

    /// Keeps the listed orbitals, in the listed order.
    pub fn select(&self, alphas: &[usize]) -> Result<Self> {
        if let Some(&bad) = alphas.iter().find(|&&a| a >= self.n_orbitals()) {
            return Err(Error::Argument(format!("orbital index {bad} out of range")));
        }
        let rows: Vec<Vec<C64>> = alphas.iter().map(|&a| self.orbital(a).to_vec()).collect();
        Self::from_row_vecs(&rows, self.n_sites())
    }

    pub fn gram(&self) -> ComplexMatrix {
        let n = self.n_orbitals();
        ComplexMatrix::from_fn(n, n, |a, b| {
            self.orbital(a).iter().zip(self.orbital(b)).map(|(x, y)| x * y.conj()).sum()
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let gram = self.gram();
        let n = self.n_orbitals();
        let mut report = ValidationReport { max_deviation: 0.0, worst_pair: None };
        for a in 0..n {
            for b in 0..n {
                let target = if a == b { ONE } else { ZERO };
                let dev = (gram[(a, b)] - target).norm();
                if report.worst_pair.is_none() || dev > report.max_deviation {
                    report = ValidationReport { max_deviation: dev, worst_pair: Some((a, b)) };
                }
            }
        }
        report
    }

    /// Returns an error unless the set passes [`validate`](Self::validate).
    pub fn ensure_orthonormal(&self) -> Result<()> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            let (a, b) = report.worst_pair.unwrap_or_default();
            Err(Error::Validation(format!(
                "orbitals are not orthonormal: overlap ({}, {}) deviates by {:e}",
                a + 1,
                b + 1,
                report.max_deviation
            )))
        }
    }

    /// Restricts every orbital to the left and right half of the chain, with
    /// a `√2` rescaling. Left rows are supported on sites `1..=L/2`, right rows
    /// on `L/2+1..=L`. The halves are orthonormal only for special inputs
    /// such as [`plane_wave_set`](Self::plane_wave_set).
    pub fn split_halves(&self) -> Result<(Self, Self)> {
        let l = self.n_sites();
        if !l.is_multiple_of(2) {
            return Err(Error::Argument(format!("cannot split an odd chain of {l} sites")));
        }
        let half = l / 2;
        let s = C64::new(std::f64::consts::SQRT_2, 0.0);
        let masked = |left: bool| {
            ComplexMatrix::from_fn(self.n_orbitals(), l, |a, site| {
                if (site < half) == left {
                    s * self.phi[(a, site)]
                } else {
                    ZERO
                }
            })
        };
        Ok((Self { phi: masked(true) }, Self { phi: masked(false) }))
    }

    /// Extends the set to a full orthonormal basis of `L` orbitals.
    ///
    /// Canonical vectors `e_1, …, e_L` are offered in order and
    /// Gram-Schmidt-projected against the rows collected so far; a candidate is
    /// dropped when its remaining norm is below [`DEPENDENCE_TOL`].
    pub fn complete_basis(&self) -> Result<Self> {
        self.ensure_orthonormal()?;
        let l = self.n_sites();
        let mut rows: Vec<Vec<C64>> = (0..self.n_orbitals()).map(|a| self.orbital(a).to_vec()).collect();
        for k in 0..l {
            if rows.len() == l {
                break;
            }
            let mut v = vec![ZERO; l];
            v[k] = ONE;
            if orthogonalize(&mut v, &rows) > DEPENDENCE_TOL {
                rows.push(v);
            }
        }
        debug_assert_eq!(rows.len(), l);
        Self::from_row_vecs(&rows, l)
    }
}

fn check_counts(n_sites: usize, n_orbitals: usize) -> Result<()> {
    if n_sites == 0 {
        return Err(Error::Argument("need at least one site".into()));
    }
    if n_orbitals > n_sites {
        return Err(Error::Argument(format!("N = {n_orbitals} exceeds L = {n_sites}")));
    }
    Ok(())
}

/// Projects `v` onto the orthogonal complement of the (orthonormal) `basis`,
/// twice for numerical stability, and normalizes it. Returns the norm before
/// normalization; `v` is left unnormalized when that norm is tiny.
fn orthogonalize(v: &mut [C64], basis: &[Vec<C64>]) -> f64 {
    for _ in 0..2 {
        for b in basis {
            let overlap: C64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= overlap * bi;
            }
        }
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > DEPENDENCE_TOL {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
    norm
}
