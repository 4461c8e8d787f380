//! Matrix product states and the Slater-determinant construction.
//!
//! An [`Mps`] stores per-site matrices `A[s]` (`s ∈ {0, 1}`) together with a
//! left boundary row vector `b0` and a right boundary column vector `bL`:
//!
//! ```text
//! T[s_1 … s_L] = b0 · A_{s_1}^{[1]} · … · A_{s_L}^{[L]} · bL
//! ```
//!
//! [`build_slater_mps`] writes down the stacked creation operators of `N`
//! orbitals directly. The bond space is the tensor product of the `N`
//! two-level creation-operator bonds with orbital 1 as the outermost factor,
//! so `D = 2^N` independently of `L`. For fermions
//!
//! ```text
//! A_0 = I
//! A_1 = Σ_α φ_α(ℓ) (σ^z)^{⊗α−1} ⊗ σ⁻ ⊗ I^{⊗N−α}
//! b0  = (1|^{⊗N},  bL = |0)^{⊗N}
//! ```
//!
//! and for other statistics the `σ^z` and `I` factors become the diagonal
//! bond matrices of the corresponding creation MPO (see [`crate::mpo`]).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mpo::{jw_dense_creation, Statistics};
use crate::orbitals::OrbitalSet;
use crate::tensor::{ComplexMatrix, ComplexVector, C64, ONE, ZERO};
use crate::{check_dense_cap, DENSE_MAX_L, MAX_PARTICLES};

/// Size cap for [`anyonic_oracle`].
pub const ANYONIC_ORACLE_MAX_L: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct MpsSite {
    tensors: [ComplexMatrix; 2],
}

impl MpsSite {
    pub fn new(tensors: [ComplexMatrix; 2]) -> Result<Self> {
        let [a0, a1] = &tensors;
        if a0.rows() != a1.rows() || a0.cols() != a1.cols() {
            return Err(Error::Shape("MPS site matrices have mismatched shapes".into()));
        }
        Ok(Self { tensors })
    }

    pub fn get(&self, s: usize) -> &ComplexMatrix {
        &self.tensors[s]
    }

    pub fn bond_left(&self) -> usize {
        self.tensors[0].rows()
    }

    pub fn bond_right(&self) -> usize {
        self.tensors[0].cols()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mps {
    sites: Vec<MpsSite>,
    b0: ComplexVector,
    b_l: ComplexVector,
}

impl Mps {
    pub fn new(sites: Vec<MpsSite>, b0: ComplexVector, b_l: ComplexVector) -> Result<Self> {
        let first = sites.first().ok_or_else(|| Error::Argument("MPS needs at least one site".into()))?;
        if first.bond_left() != b0.dim() {
            return Err(Error::Shape(format!("left boundary of dim {} against bond {}", b0.dim(), first.bond_left())));
        }
        for (k, w) in sites.windows(2).enumerate() {
            if w[0].bond_right() != w[1].bond_left() {
                return Err(Error::Shape(format!("bond mismatch between sites {} and {}", k + 1, k + 2)));
            }
        }
        let last = &sites[sites.len() - 1];
        if last.bond_right() != b_l.dim() {
            return Err(Error::Shape(format!(
                "right boundary of dim {} against bond {}",
                b_l.dim(),
                last.bond_right()
            )));
        }
        Ok(Self { sites, b0, b_l })
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[MpsSite] {
        &self.sites
    }

    pub fn b0(&self) -> &ComplexVector {
        &self.b0
    }

    pub fn b_l(&self) -> &ComplexVector {
        &self.b_l
    }

    /// Largest bond dimension, boundaries included.
    pub fn bond_dim(&self) -> usize {
        self.sites.iter().map(|s| s.bond_left().max(s.bond_right())).max().unwrap_or(0)
    }

    /// Bond dimension between sites `cut` and `cut + 1` (1-based), i.e. after
    /// the first `cut` sites. `cut = 0` and `cut = L` give the boundary dims.
    pub fn bond_dim_at_cut(&self, cut: usize) -> usize {
        if cut == 0 {
            self.b0.dim()
        } else {
            self.sites[cut.min(self.n_sites()) - 1].bond_right()
        }
    }

    /// Same state multiplied by `factor` (absorbed into the left boundary).
    pub fn scaled(&self, factor: C64) -> Self {
        Self { sites: self.sites.clone(), b0: self.b0.scale(factor), b_l: self.b_l.clone() }
    }

    pub fn amplitude(&self, occ: &Occupation) -> Result<C64> {
        amplitude(self, occ)
    }

    pub fn to_dense(&self) -> Result<ComplexVector> {
        mps_to_dense(self)
    }

    /// `⟨ψ|ψ⟩` by left-environment contraction, `O(L·D³)`.
    pub fn norm_sqr(&self) -> f64 {
        let b0 = self.b0.entries();
        let mut env = ComplexMatrix::from_fn(b0.len(), b0.len(), |i, j| b0[i].conj() * b0[j]);
        for site in &self.sites {
            let mut next = ComplexMatrix::zeros(site.bond_right(), site.bond_right());
            for a in &site.tensors {
                // a† · env · a
                let ea = crate::tensor::matmul(&env, a).expect("environment shape");
                let term = crate::tensor::matmul(&a.adjoint(), &ea).expect("environment shape");
                next = next.add(&term).expect("environment shape");
            }
            env = next;
        }
        let bl = self.b_l.entries();
        let mut acc = ZERO;
        for i in 0..bl.len() {
            for j in 0..bl.len() {
                acc += bl[i].conj() * env[(i, j)] * bl[j];
            }
        }
        acc.re
    }
}

/// Occupation numbers `s_1 … s_L`; site 1 is the most significant bit of
/// [`index`](Self::index).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occupation {
    bits: Vec<u8>,
}

impl Occupation {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Argument("occupation bits must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    pub fn empty(n_sites: usize) -> Self {
        Self { bits: vec![0; n_sites] }
    }

    pub fn from_index(index: usize, n_sites: usize) -> Self {
        let bits = (0..n_sites).map(|k| ((index >> (n_sites - 1 - k)) & 1) as u8).collect();
        Self { bits }
    }

    pub fn index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// Occupied sites, 0-based and ascending.
    pub fn occupied_sites(&self) -> Vec<usize> {
        self.bits.iter().enumerate().filter(|(_, &b)| b == 1).map(|(k, _)| k).collect()
    }

    /// All occupations of `n_sites` with exactly `n_particles` ones, in
    /// increasing [`index`](Self::index) order.
    pub fn with_popcount(n_sites: usize, n_particles: usize) -> Vec<Self> {
        if n_particles > n_sites {
            return Vec::new();
        }
        // walk the combinations in lexicographic order of the bit string
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = (0..n_particles).collect();
        loop {
            let mut bits = vec![0u8; n_sites];
            for &k in &chosen {
                bits[k] = 1;
            }
            out.push(Self { bits });
            let mut i = n_particles;
            loop {
                if i == 0 {
                    out.sort_by_key(Occupation::index);
                    return out;
                }
                i -= 1;
                if chosen[i] < n_sites - n_particles + i {
                    chosen[i] += 1;
                    for j in i + 1..n_particles {
                        chosen[j] = chosen[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Occupation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Argument(format!("invalid occupation string {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { bits })
    }
}

/// The Fock vacuum `|0…0⟩` as a bond-dimension-1 MPS.
pub fn vacuum_mps(n_sites: usize) -> Result<Mps> {
    if n_sites == 0 {
        return Err(Error::Argument("vacuum needs at least one site".into()));
    }
    let site = MpsSite::new([ComplexMatrix::identity(1), ComplexMatrix::zeros(1, 1)])?;
    Mps::new(vec![site; n_sites], ComplexVector::basis(1, 0), ComplexVector::basis(1, 0))
}

/// MPS of `ã_1† ã_2† … ã_N† |Ω⟩` with bond dimension `2^N`.
pub fn build_slater_mps(set: &OrbitalSet, stat: Statistics) -> Result<Mps> {
    set.ensure_orthonormal()?;
    let n = set.n_orbitals();
    if n == 0 {
        return Err(Error::Argument("need at least one orbital".into()));
    }
    if n > MAX_PARTICLES {
        return Err(Error::Size(format!("bond dimension 2^{n} exceeds the cap 2^{MAX_PARTICLES}")));
    }
    let d = 1usize << n;
    let [w0, w1] = stat.exchange_diag();
    // bond factor for orbital a sits at bit (n - 1 - a)
    let bit = |a: usize| 1usize << (n - 1 - a);
    let weight = |state: usize, a: usize, w: C64| if state & bit(a) != 0 { w } else { ONE };

    let a0_diag: Vec<C64> = (0..d).map(|c| (0..n).map(|b| weight(c, b, w0)).product()).collect();
    let a0 = ComplexMatrix::from_diag(&a0_diag);

    let mut sites = Vec::with_capacity(set.n_sites());
    for site in 0..set.n_sites() {
        let mut a1 = ComplexMatrix::zeros(d, d);
        for a in 0..n {
            let phi = set.value(a, site);
            if phi == ZERO {
                continue;
            }
            for col in (0..d).filter(|c| c & bit(a) == 0) {
                let before: C64 = (0..a).map(|b| weight(col, b, w1)).product();
                let after: C64 = (a + 1..n).map(|b| weight(col, b, w0)).product();
                a1[(col | bit(a), col)] += phi * before * after;
            }
        }
        sites.push(MpsSite::new([a0.clone(), a1])?);
    }
    Mps::new(sites, ComplexVector::basis(d, d - 1), ComplexVector::basis(d, 0))
}

/// `b0 · A_{s_1} ⋯ A_{s_L} · bL`, contracted from the left boundary so each
/// site costs one vector-matrix product.
pub fn amplitude(mps: &Mps, occ: &Occupation) -> Result<C64> {
    if occ.len() != mps.n_sites() {
        return Err(Error::Shape(format!("occupation of length {} for {} sites", occ.len(), mps.n_sites())));
    }
    let mut v = mps.b0.entries().to_vec();
    for (site, &s) in mps.sites.iter().zip(occ.bits()) {
        v = site.get(s as usize).vecmat(&v)?;
    }
    Ok(v.iter().zip(mps.b_l.entries()).map(|(a, b)| a * b).sum())
}

/// Full statevector, index order as in [`Occupation::index`].
pub fn mps_to_dense(mps: &Mps) -> Result<ComplexVector> {
    check_dense_cap(mps.n_sites(), DENSE_MAX_L, "MPS statevector")?;
    let mut prefixes: Vec<Vec<C64>> = vec![mps.b0.entries().to_vec()];
    for site in &mps.sites {
        // site tensors of a Slater MPS are very sparse
        let sparse: Vec<Vec<(usize, usize, C64)>> = site
            .tensors
            .iter()
            .map(|a| {
                (0..a.rows())
                    .flat_map(|i| a.row(i).iter().enumerate().map(move |(j, &v)| (i, j, v)))
                    .filter(|&(_, _, v)| v != ZERO)
                    .collect()
            })
            .collect();
        let cols = site.bond_right();
        let mut next = Vec::with_capacity(prefixes.len() * 2);
        for v in &prefixes {
            for entries in &sparse {
                let mut out = vec![ZERO; cols];
                for &(i, j, a) in entries {
                    out[j] += v[i] * a;
                }
                next.push(out);
            }
        }
        prefixes = next;
    }
    let bl = mps.b_l.entries();
    Ok(ComplexVector::new(prefixes.iter().map(|v| v.iter().zip(bl).map(|(a, b)| a * b).sum()).collect()))
}

/// Expansion coefficient of a Slater determinant: the `N × N` determinant of
/// `φ_α(ℓ_q)` over the occupied sites `ℓ_1 < … < ℓ_N`, or zero when the
/// occupation does not hold exactly `N` particles.
pub fn determinant_oracle(set: &OrbitalSet, occ: &Occupation) -> Result<C64> {
    if occ.len() != set.n_sites() {
        return Err(Error::Shape(format!("occupation of length {} for {} sites", occ.len(), set.n_sites())));
    }
    let sites = occ.occupied_sites();
    let n = set.n_orbitals();
    if sites.len() != n {
        return Ok(ZERO);
    }
    let m = ComplexMatrix::from_fn(n, n, |a, q| set.value(a, sites[q]));
    Ok(determinant(m))
}

/// Determinant by LU decomposition with partial pivoting.
pub(crate) fn determinant(mut m: ComplexMatrix) -> C64 {
    let n = m.rows();
    let mut det = ONE;
    for k in 0..n {
        let pivot =
            (k..n).max_by(|&i, &j| m[(i, k)].norm().total_cmp(&m[(j, k)].norm())).expect("non-empty pivot range");
        if m[(pivot, k)] == ZERO {
            return ZERO;
        }
        if pivot != k {
            for j in 0..n {
                let tmp = m[(k, j)];
                m[(k, j)] = m[(pivot, j)];
                m[(pivot, j)] = tmp;
            }
            det = -det;
        }
        let p = m[(k, k)];
        det *= p;
        for i in k + 1..n {
            let f = m[(i, k)] / p;
            if f == ZERO {
                continue;
            }
            for j in k..n {
                let v = m[(k, j)];
                m[(i, j)] -= f * v;
            }
        }
    }
    det
}

/// Dense `M_1 M_2 ⋯ M_N |Ω⟩`, with `M_α` the dense generalized Jordan-Wigner
/// creation operator of orbital `α`.
pub fn anyonic_oracle(set: &OrbitalSet, stat: Statistics) -> Result<ComplexVector> {
    let l = set.n_sites();
    check_dense_cap(l, ANYONIC_ORACLE_MAX_L, "anyonic oracle")?;
    let mut state = ComplexVector::basis(1 << l, 0);
    for a in (0..set.n_orbitals()).rev() {
        let op = jw_dense_creation(set.orbital(a), l, stat)?;
        state = op.matvec(&state)?;
    }
    Ok(state)
}
