//! Matrix product operators for delocalized creation operators.
//!
//! The creation operator of an orbital `φ` is a bond-dimension-2 MPO. With
//! physical output index `s` and input index `r`, each site carries four
//! `2 × 2` bond matrices `B[s][r]`:
//!
//! ```text
//! B[0][0] = diag(1, w0)      B[0][1] = 0
//! B[1][0] = φ(ℓ) |1)(0|      B[1][1] = diag(1, w1)
//! ```
//!
//! where `W = diag(w0, w1)` is the exchange matrix of the particle statistics.
//! Bond state `1` means "not created yet" and carries the exchange string;
//! bond state `0` means "already created" and acts as the identity. For
//! fermions (`W = σ^z`) and bosons (`W = I`) this is the usual recipe with
//! `B[0][0] = I` and `B[1][1] = σ^z` or `I`.
//!
//! Boundary vectors are stored next to the site tensors so that the
//! [`BoundaryMode`] switches can be applied without touching the sites.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mps::{Mps, MpsSite};
use crate::tensor::{kron, kron_all, kron_vec, pauli, ComplexMatrix, ComplexVector, C64, ONE, ZERO};
use crate::{check_dense_cap, DENSE_MAX_L};

/// Exchange statistics of hard-core particles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Statistics {
    Fermion,
    Boson,
    /// Abelian anyon with exchange phase `phase` (radians).
    Anyon {
        phase: f64,
    },
}

impl Statistics {
    /// Diagonal of the exchange matrix `W`.
    pub fn exchange_diag(&self) -> [C64; 2] {
        match *self {
            Statistics::Fermion => [ONE, -ONE],
            Statistics::Boson => [ONE, ONE],
            Statistics::Anyon { phase } => [C64::from_polar(1.0, phase), C64::from_polar(1.0, -phase)],
        }
    }

    /// `σ^z` for fermions, `I` for bosons, `exp(iφσ^z)` for anyons.
    ///
    /// Note that `Anyon { phase: π }` gives `−I`, not `σ^z`.
    pub fn exchange_matrix(&self) -> ComplexMatrix {
        let [w0, w1] = self.exchange_diag();
        pauli::diag(w0, w1)
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistics::Fermion => write!(f, "fermion"),
            Statistics::Boson => write!(f, "boson"),
            Statistics::Anyon { phase } => write!(f, "anyon:{phase}"),
        }
    }
}

impl FromStr for Statistics {
    type Err = Error;

    /// Accepts `fermion`, `boson` or `anyon:<phase in radians>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fermion" => Ok(Statistics::Fermion),
            "boson" => Ok(Statistics::Boson),
            _ => {
                let phase = s
                    .strip_prefix("anyon:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .filter(|p| p.is_finite())
                    .ok_or_else(|| {
                        Error::Argument(format!("unknown statistics {s:?} (expected fermion, boson or anyon:<phase>)"))
                    })?;
                Ok(Statistics::Anyon { phase })
            }
        }
    }
}

/// One MPO site: bond matrices `B[s][r]` for output `s` and input `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct MpoSite {
    tensors: [[ComplexMatrix; 2]; 2],
}

impl MpoSite {
    pub fn new(tensors: [[ComplexMatrix; 2]; 2]) -> Result<Self> {
        let (rows, cols) = (tensors[0][0].rows(), tensors[0][0].cols());
        if tensors.iter().flatten().any(|m| m.rows() != rows || m.cols() != cols) {
            return Err(Error::Shape("MPO site tensors have mismatched bond dimensions".into()));
        }
        Ok(Self { tensors })
    }

    pub fn get(&self, s: usize, r: usize) -> &ComplexMatrix {
        &self.tensors[s][r]
    }

    pub fn bond_left(&self) -> usize {
        self.tensors[0][0].rows()
    }

    pub fn bond_right(&self) -> usize {
        self.tensors[0][0].cols()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mpo {
    sites: Vec<MpoSite>,
    beta0: ComplexVector,
    beta_l: ComplexVector,
}

/// Boundary-vector choices for a creation-operator MPO.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryMode {
    /// `(1| … |0)`: the creation operator itself.
    Construction,
    /// `(0| … |0)`: the identity.
    Identity,
    /// `(1| … |1)`: the exchange string on every site, `(σ^z)^{⊗L}` for fermions.
    Parity,
    /// `(0| … |1)`: the zero operator.
    Null,
}

impl BoundaryMode {
    /// `(left, right)` boundary vectors of dimension 2.
    pub fn vectors(self) -> (ComplexVector, ComplexVector) {
        let (l, r) = match self {
            BoundaryMode::Construction => (1, 0),
            BoundaryMode::Identity => (0, 0),
            BoundaryMode::Parity => (1, 1),
            BoundaryMode::Null => (0, 1),
        };
        (ComplexVector::basis(2, l), ComplexVector::basis(2, r))
    }
}

impl Mpo {
    pub fn new(sites: Vec<MpoSite>, beta0: ComplexVector, beta_l: ComplexVector) -> Result<Self> {
        let first = sites.first().ok_or_else(|| Error::Argument("MPO needs at least one site".into()))?;
        if first.bond_left() != beta0.dim() {
            return Err(Error::Shape(format!(
                "left boundary of dim {} against bond {}",
                beta0.dim(),
                first.bond_left()
            )));
        }
        for (k, w) in sites.windows(2).enumerate() {
            if w[0].bond_right() != w[1].bond_left() {
                return Err(Error::Shape(format!("bond mismatch between sites {} and {}", k + 1, k + 2)));
            }
        }
        let last = &sites[sites.len() - 1];
        if last.bond_right() != beta_l.dim() {
            return Err(Error::Shape(format!(
                "right boundary of dim {} against bond {}",
                beta_l.dim(),
                last.bond_right()
            )));
        }
        Ok(Self { sites, beta0, beta_l })
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[MpoSite] {
        &self.sites
    }

    pub fn site(&self, site: usize) -> &MpoSite {
        &self.sites[site]
    }

    pub fn beta0(&self) -> &ComplexVector {
        &self.beta0
    }

    pub fn beta_l(&self) -> &ComplexVector {
        &self.beta_l
    }

    /// Largest bond dimension, boundaries included.
    pub fn bond_dim(&self) -> usize {
        self.sites.iter().map(|s| s.bond_left().max(s.bond_right())).max().unwrap_or(0)
    }

    pub fn with_boundaries(&self, beta0: ComplexVector, beta_l: ComplexVector) -> Result<Self> {
        Self::new(self.sites.clone(), beta0, beta_l)
    }

    /// Replaces the boundaries of a bond-dimension-2 MPO by those of `mode`.
    pub fn with_mode(&self, mode: BoundaryMode) -> Result<Self> {
        let (b0, bl) = mode.vectors();
        self.with_boundaries(b0, bl)
    }

    /// The MPO of `self†`: every bond matrix is conjugated and the physical
    /// indices are swapped, `B'[s][r] = conj(B[r][s])`.
    pub fn adjoint(&self) -> Self {
        let sites = self
            .sites
            .iter()
            .map(|site| MpoSite {
                tensors: [
                    [site.get(0, 0).conj(), site.get(1, 0).conj()],
                    [site.get(0, 1).conj(), site.get(1, 1).conj()],
                ],
            })
            .collect();
        Self { sites, beta0: self.beta0.conj(), beta_l: self.beta_l.conj() }
    }

    /// The operator product `self · below` (`below` acts first).
    pub fn compose(&self, below: &Mpo) -> Result<Self> {
        if self.n_sites() != below.n_sites() {
            return Err(Error::Shape(format!(
                "cannot compose MPOs on {} and {} sites",
                self.n_sites(),
                below.n_sites()
            )));
        }
        let sites = self
            .sites
            .iter()
            .zip(&below.sites)
            .map(|(top, bot)| {
                let entry = |s: usize, r: usize| {
                    let a = kron(top.get(s, 0), bot.get(0, r));
                    let b = kron(top.get(s, 1), bot.get(1, r));
                    a.add(&b).expect("kron shapes agree")
                };
                MpoSite { tensors: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]] }
            })
            .collect();
        Ok(Self { sites, beta0: kron_vec(&self.beta0, &below.beta0), beta_l: kron_vec(&self.beta_l, &below.beta_l) })
    }

    /// Block-diagonal sum: the bond space is the direct sum of both bond
    /// spaces and the boundaries are concatenated.
    pub fn direct_sum(&self, other: &Mpo) -> Result<Self> {
        if self.n_sites() != other.n_sites() {
            return Err(Error::Shape(format!("cannot add MPOs on {} and {} sites", self.n_sites(), other.n_sites())));
        }
        let sites = self
            .sites
            .iter()
            .zip(&other.sites)
            .map(|(a, b)| {
                let entry = |s: usize, r: usize| block_diag(a.get(s, r), b.get(s, r));
                MpoSite { tensors: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]] }
            })
            .collect();
        let concat = |x: &ComplexVector, y: &ComplexVector| ComplexVector::new([x.entries(), y.entries()].concat());
        Ok(Self { sites, beta0: concat(&self.beta0, &other.beta0), beta_l: concat(&self.beta_l, &other.beta_l) })
    }

    /// Dense `2^L × 2^L` matrix; rows are output configurations, site 1 is
    /// the most significant bit.
    pub fn to_dense(&self) -> Result<ComplexMatrix> {
        check_dense_cap(self.n_sites(), DENSE_MAX_L, "MPO")?;
        // partial[d] is the operator on the processed prefix with open right bond d
        let mut partial: Vec<ComplexMatrix> =
            self.beta0.entries().iter().map(|&b| ComplexMatrix::from_diag(&[b])).collect();
        for site in &self.sites {
            let dim = partial[0].rows();
            let next_bond = site.bond_right();
            let mut next = vec![ComplexMatrix::zeros(2 * dim, 2 * dim); next_bond];
            for (d, block) in partial.iter().enumerate() {
                let entries: Vec<(usize, usize, C64)> = (0..dim)
                    .flat_map(|i| block.row(i).iter().enumerate().map(move |(j, &v)| (i, j, v)))
                    .filter(|&(_, _, v)| v != ZERO)
                    .collect();
                for s in 0..2 {
                    for r in 0..2 {
                        let bond_row = site.get(s, r).row(d);
                        for (dn, &weight) in bond_row.iter().enumerate() {
                            if weight == ZERO {
                                continue;
                            }
                            let target = &mut next[dn];
                            for &(i, j, v) in &entries {
                                target[(2 * i + s, 2 * j + r)] += v * weight;
                            }
                        }
                    }
                }
            }
            partial = next;
        }
        let dim = partial[0].rows();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for (block, &b) in partial.iter().zip(self.beta_l.entries()) {
            if b != ZERO {
                out = out.add(&block.scale(b))?;
            }
        }
        Ok(out)
    }
}

fn block_diag(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows() + b.rows(), a.cols() + b.cols(), |i, j| match (i < a.rows(), j < a.cols()) {
        (true, true) => a[(i, j)],
        (false, false) => b[(i - a.rows(), j - a.cols())],
        _ => ZERO,
    })
}

/// Bond-dimension-2 MPO of the creation operator `Σ_ℓ φ(ℓ) a_ℓ†`, with
/// construction boundaries `(1| … |0)`.
pub fn build_creation_mpo(orbital: &[C64], n_sites: usize, stat: Statistics) -> Result<Mpo> {
    if orbital.len() != n_sites {
        return Err(Error::Shape(format!("orbital has {} entries for {n_sites} sites", orbital.len())));
    }
    let [w0, w1] = stat.exchange_diag();
    let keep_empty = pauli::diag(ONE, w0);
    let keep_full = pauli::diag(ONE, w1);
    let sites = orbital
        .iter()
        .map(|&phi| MpoSite {
            tensors: [
                [keep_empty.clone(), ComplexMatrix::zeros(2, 2)],
                [pauli::sigma_minus().scale(phi), keep_full.clone()],
            ],
        })
        .collect();
    let (b0, bl) = BoundaryMode::Construction.vectors();
    Mpo::new(sites, b0, bl)
}

/// Creation MPO with boundaries switched to `mode`.
pub fn set_boundary_mode(mpo: &Mpo, mode: BoundaryMode) -> Result<Mpo> {
    mpo.with_mode(mode)
}

pub fn adjoint_mpo(mpo: &Mpo) -> Mpo {
    mpo.adjoint()
}

/// Dense generalized Jordan-Wigner creation operator
/// `Σ_ℓ φ(ℓ) W^{⊗ℓ−1} ⊗ σ⁻ ⊗ I^{⊗L−ℓ}`, summed term by term.
pub fn jw_dense_creation(orbital: &[C64], n_sites: usize, stat: Statistics) -> Result<ComplexMatrix> {
    check_dense_cap(n_sites, DENSE_MAX_L, "dense creation operator")?;
    if orbital.len() != n_sites {
        return Err(Error::Shape(format!("orbital has {} entries for {n_sites} sites", orbital.len())));
    }
    let w = stat.exchange_matrix();
    let id = pauli::identity();
    let sm = pauli::sigma_minus();
    let dim = 1usize << n_sites;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (site, &phi) in orbital.iter().enumerate() {
        if phi == ZERO {
            continue;
        }
        let factors: Vec<&ComplexMatrix> = (0..n_sites)
            .map(|k| match k.cmp(&site) {
                std::cmp::Ordering::Less => &w,
                std::cmp::Ordering::Equal => &sm,
                std::cmp::Ordering::Greater => &id,
            })
            .collect();
        out = out.add(&kron_all(factors).scale(phi))?;
    }
    Ok(out)
}

/// MPS of `mpo |mps⟩`. The MPO bond is the outer Kronecker factor of the new
/// bond, so the output bond dimension is the product of the two inputs.
pub fn apply_mpo_to_mps(mpo: &Mpo, mps: &Mps) -> Result<Mps> {
    if mpo.n_sites() != mps.n_sites() {
        return Err(Error::Shape(format!("MPO on {} sites applied to MPS on {} sites", mpo.n_sites(), mps.n_sites())));
    }
    let sites = mpo
        .sites()
        .iter()
        .zip(mps.sites())
        .map(|(op, st)| {
            let entry = |s: usize| {
                kron(op.get(s, 0), st.get(0)).add(&kron(op.get(s, 1), st.get(1))).expect("kron shapes agree")
            };
            MpsSite::new([entry(0), entry(1)])
        })
        .collect::<Result<Vec<_>>>()?;
    Mps::new(sites, kron_vec(mpo.beta0(), mps.b0()), kron_vec(mpo.beta_l(), mps.b_l()))
}
