//! The two-determinant operator `Θ = α c̃₁†c̃₂† + β c̃₃†c̃₄†` as an MPO.
//!
//! Two representations are provided. The block form stacks the creation MPOs
//! of each pair (orbital 1 above orbital 2, orbital 3 above orbital 4) and
//! adds the two products as a direct sum, giving bond dimension 8. The
//! compact form shares the "nothing created" and "both created" bond states
//! between the two terms and needs only 6:
//!
//! ```text
//! bond 5: nothing created         bond 1..4: one particle created
//! bond 0: both created            (b_0| = (5|,  |b_L) = |0)
//! ```

use serde::{Deserialize, Serialize};

use crate::check_dense_cap;
use crate::entanglement::halfcut_entropy;
use crate::error::{Error, Result};
use crate::mpo::{apply_mpo_to_mps, build_creation_mpo, jw_dense_creation, Mpo, MpoSite, Statistics};
use crate::mps::vacuum_mps;
use crate::orbitals::OrbitalSet;
use crate::tensor::{matmul, ComplexMatrix, ComplexVector, C64, ONE};

/// Size cap for the dense CI oracle and the entropy check.
pub const CI_DENSE_MAX_L: usize = 10;
/// Tolerance on `|α|² + |β|² = 1` in [`ci_entropy_bound_check`].
pub const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct CiCoefficients {
    alpha: C64,
    beta: C64,
    orbitals: OrbitalSet,
}

impl CiCoefficients {
    /// Requires exactly four orthonormal orbitals.
    pub fn new(alpha: C64, beta: C64, orbitals: OrbitalSet) -> Result<Self> {
        if orbitals.n_orbitals() != 4 {
            return Err(Error::Argument(format!(
                "two-determinant operator needs 4 orbitals, got {}",
                orbitals.n_orbitals()
            )));
        }
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::Argument("coefficients must be finite".into()));
        }
        orbitals.ensure_orthonormal()?;
        Ok(Self { alpha, beta, orbitals })
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn orbitals(&self) -> &OrbitalSet {
        &self.orbitals
    }

    pub fn n_sites(&self) -> usize {
        self.orbitals.n_sites()
    }

    fn check_sites(&self, n_sites: usize) -> Result<()> {
        if self.n_sites() != n_sites {
            return Err(Error::Shape(format!("orbitals live on {} sites, requested {n_sites}", self.n_sites())));
        }
        Ok(())
    }

    fn creation(&self, alpha: usize) -> Result<Mpo> {
        build_creation_mpo(self.orbitals.orbital(alpha), self.n_sites(), Statistics::Fermion)
    }
}

/// Bond dimension 8: `(c̃₁†·c̃₂†) ⊕ (c̃₃†·c̃₄†)` weighted by `α`, `β` on the
/// right boundary.
pub fn build_ci_block_mpo(c: &CiCoefficients, n_sites: usize) -> Result<Mpo> {
    c.check_sites(n_sites)?;
    let first = c.creation(0)?.compose(&c.creation(1)?)?;
    let second = c.creation(2)?.compose(&c.creation(3)?)?;
    let sum = first.direct_sum(&second)?;
    let mut beta_l = ComplexVector::zeros(8);
    beta_l.entries_mut()[0] = c.alpha;
    beta_l.entries_mut()[4] = c.beta;
    let beta0 = sum.beta0().clone();
    sum.with_boundaries(beta0, beta_l)
}

/// Bond dimension 6, see the module docs for the bond labels.
pub fn build_ci_compact_mpo(c: &CiCoefficients, n_sites: usize) -> Result<Mpo> {
    c.check_sites(n_sites)?;
    let phi = |a: usize, l: usize| c.orbitals.value(a, l);
    let string = ComplexMatrix::from_diag(&[ONE, -ONE, -ONE, -ONE, -ONE, ONE]);
    let sites = (0..n_sites)
        .map(|l| {
            let mut create = ComplexMatrix::zeros(6, 6);
            create[(1, 0)] = -c.alpha * phi(0, l);
            create[(2, 0)] = -c.beta * phi(2, l);
            create[(3, 0)] = c.beta * phi(3, l);
            create[(4, 0)] = c.alpha * phi(1, l);
            create[(5, 1)] = phi(1, l);
            create[(5, 2)] = phi(3, l);
            create[(5, 3)] = phi(2, l);
            create[(5, 4)] = phi(0, l);
            MpoSite::new([[ComplexMatrix::identity(6), ComplexMatrix::zeros(6, 6)], [create, string.clone()]])
        })
        .collect::<Result<Vec<_>>>()?;
    Mpo::new(sites, ComplexVector::basis(6, 5), ComplexVector::basis(6, 0))
}

/// `α M₁M₂ + β M₃M₄` with `M_a` the dense Jordan-Wigner creation operator of
/// orbital `a`.
pub fn ci_dense_oracle(c: &CiCoefficients, n_sites: usize) -> Result<ComplexMatrix> {
    c.check_sites(n_sites)?;
    check_dense_cap(n_sites, CI_DENSE_MAX_L, "dense CI operator")?;
    let m = (0..4)
        .map(|a| jw_dense_creation(c.orbitals.orbital(a), n_sites, Statistics::Fermion))
        .collect::<Result<Vec<_>>>()?;
    let first = matmul(&m[0], &m[1])?.scale(c.alpha);
    let second = matmul(&m[2], &m[3])?.scale(c.beta);
    first.add(&second)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CiEntropyReport {
    pub entropy_nats: f64,
    pub entropy_log2: f64,
    /// `ln 6`, from the bond dimension of the compact MPO.
    pub bound_nats: f64,
    pub within_bound: bool,
}

/// Half-cut entropy of the normalized state `Θ|Ω⟩`, compared with `ln 6`.
pub fn ci_entropy_bound_check(c: &CiCoefficients, n_sites: usize) -> Result<CiEntropyReport> {
    c.check_sites(n_sites)?;
    check_dense_cap(n_sites, CI_DENSE_MAX_L, "CI entropy")?;
    let weight = c.alpha.norm_sqr() + c.beta.norm_sqr();
    if (weight - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Argument(format!("|α|² + |β|² = {weight}, expected 1")));
    }
    let state = apply_mpo_to_mps(&build_ci_compact_mpo(c, n_sites)?, &vacuum_mps(n_sites)?)?;
    let report = halfcut_entropy(&state)?;
    let bound_nats = 6f64.ln();
    Ok(CiEntropyReport {
        entropy_nats: report.entropy_nats,
        entropy_log2: report.entropy_log2,
        bound_nats,
        within_bound: report.entropy_nats <= bound_nats + 1e-9,
    })
}

/// Largest absolute difference between the dense forms of the block MPO,
/// the compact MPO and the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CiResiduals {
    pub block_vs_oracle: f64,
    pub compact_vs_oracle: f64,
    pub block_vs_compact: f64,
}

impl CiResiduals {
    pub fn max(&self) -> f64 {
        self.block_vs_oracle.max(self.compact_vs_oracle).max(self.block_vs_compact)
    }
}

pub fn ci_residuals(c: &CiCoefficients, n_sites: usize) -> Result<CiResiduals> {
    let oracle = ci_dense_oracle(c, n_sites)?;
    let block = build_ci_block_mpo(c, n_sites)?.to_dense()?;
    let compact = build_ci_compact_mpo(c, n_sites)?.to_dense()?;
    Ok(CiResiduals {
        block_vs_oracle: block.max_abs_diff(&oracle),
        compact_vs_oracle: compact.max_abs_diff(&oracle),
        block_vs_compact: block.max_abs_diff(&compact),
    })
}
