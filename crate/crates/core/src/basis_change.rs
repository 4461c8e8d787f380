//! Many-body transformation induced by a change of one-body basis.
//!
//! Given a full orthonormal basis `φ_1 … φ_L`, stack the `L` creation MPOs
//! with orbital 1 on top and orbital `L` at the bottom, feed the local vacuum
//! in from below and close every row on the right with `|0)`. Setting the
//! left boundary of row `α` to `(q_α|` turns the stack into
//!
//! ```text
//! Θ(q) = c̃_1^{†q_1} c̃_2^{†q_2} ⋯ c̃_L^{†q_L}
//! ```
//!
//! and `|Ψ_q⟩ = Θ(q)|Ω⟩`. Leaving the left boundaries open and contracting
//! them with the new-basis coefficients `T_new[q]` yields the old-basis
//! coefficients `T_old[s] = Σ_q ⟨s|Ψ_q⟩ T_new[q]`.
//!
//! The grid is contracted column by column (site by site). The running tensor
//! is indexed by the `L` row bonds and the physical configuration of the
//! sites already swept. A row bond in state `1` means the row has not created
//! its particle yet, and it can only drop to `0`. Pruned contraction therefore
//! skips every bond configuration with a `1` on a row whose left boundary is
//! `0`; the counters in [`ContractionStats`] record how many intermediate
//! coefficients each strategy visits.

use crate::check_dense_cap;
use crate::error::{Error, Result};
use crate::mpo::{build_creation_mpo, Mpo, MpoSite, Statistics};
use crate::mps::Occupation;
use crate::orbitals::OrbitalSet;
use crate::tensor::{ComplexMatrix, ComplexVector, C64, ONE, ZERO};

/// Size cap for grid contractions.
pub const GRID_MAX_L: usize = 10;

#[derive(Clone, Debug)]
pub struct BasisChangeGrid {
    basis: OrbitalSet,
    rows: Vec<Mpo>,
}

/// Work done by one grid contraction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ContractionStats {
    /// Intermediate coefficients visited, summed over all columns.
    pub coefficients_visited: u64,
}

impl BasisChangeGrid {
    pub fn n_sites(&self) -> usize {
        self.basis.n_sites()
    }

    pub fn basis(&self) -> &OrbitalSet {
        &self.basis
    }

    /// Row `α` (0-based): the creation MPO of orbital `α`.
    pub fn rows(&self) -> &[Mpo] {
        &self.rows
    }

    /// Grid of the inverse basis change `Φ†`, which realizes the inverse
    /// (adjoint) many-body map.
    pub fn inverse(&self) -> Result<Self> {
        build_grid(&OrbitalSet::from_matrix(self.basis.matrix().adjoint())?)
    }

    fn bit(&self, row: usize) -> usize {
        1 << (self.n_sites() - 1 - row)
    }

    /// Contracts the grid with the left-boundary distribution `initial`
    /// (indexed like an occupation string `q`). Only bond configurations that
    /// are subsets of `mask` are visited.
    fn contract(&self, initial: &[C64], mask: usize) -> (ComplexVector, ContractionStats) {
        let l = self.n_sites();
        let n_bonds = 1usize << l;
        let allowed: Vec<usize> = (0..n_bonds).filter(|b| b & !mask == 0).collect();
        let mut stats = ContractionStats::default();

        // state[b * width + p]: open bonds b, physical prefix p
        let mut width = 1usize;
        let mut state = vec![ZERO; n_bonds];
        for &b in &allowed {
            state[b] = initial[b];
        }

        for site in 0..l {
            let column: Vec<&MpoSite> = self.rows.iter().map(|row| row.site(site)).collect();
            let next_width = width * 2;
            let mut next = vec![ZERO; n_bonds * next_width];
            for &b in &allowed {
                for p in 0..width {
                    stats.coefficients_visited += 1;
                    let amp = state[b * width + p];
                    if amp == ZERO {
                        continue;
                    }
                    self.push_column(&column, l, 0, b, 0, amp, &mut |b_out, s, value| {
                        debug_assert_eq!(b_out & !mask, 0, "bond left the allowed set");
                        next[b_out * next_width + 2 * p + s] += value;
                    });
                }
            }
            state = next;
            width = next_width;
        }

        // close every row with its right boundary
        let mut out = vec![ZERO; width];
        for &b in &allowed {
            let weight: C64 = self
                .rows
                .iter()
                .enumerate()
                .map(|(row, mpo)| mpo.beta_l()[usize::from(b & self.bit(row) != 0)])
                .product();
            if weight == ZERO {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(&state[b * width..(b + 1) * width]) {
                *o += weight * v;
            }
        }
        (ComplexVector::new(out), stats)
    }

    /// Pushes one coefficient through a column, bottom row first. `rows_left`
    /// counts the rows still to process; `vertical` is the physical index
    /// flowing upwards.
    #[allow(clippy::too_many_arguments)]
    fn push_column(
        &self,
        column: &[&MpoSite],
        rows_left: usize,
        vertical: usize,
        b_in: usize,
        b_out: usize,
        amp: C64,
        emit: &mut impl FnMut(usize, usize, C64),
    ) {
        if rows_left == 0 {
            emit(b_out, vertical, amp);
            return;
        }
        let row = rows_left - 1;
        let bit = self.bit(row);
        let bond = usize::from(b_in & bit != 0);
        for up in 0..2 {
            let tensor: &ComplexMatrix = column[row].get(up, vertical);
            for next_bond in 0..2 {
                let t = tensor[(bond, next_bond)];
                if t == ZERO {
                    continue;
                }
                let b_next = if next_bond == 1 { b_out | bit } else { b_out };
                self.push_column(column, row, up, b_in, b_next, amp * t, emit);
            }
        }
    }

    fn check_occupation(&self, q: &Occupation) -> Result<()> {
        if q.len() != self.n_sites() {
            return Err(Error::Shape(format!("boundary string of length {} for {} rows", q.len(), self.n_sites())));
        }
        Ok(())
    }

    fn delta(&self, q: &Occupation) -> Vec<C64> {
        let mut v = vec![ZERO; 1 << self.n_sites()];
        v[q.index()] = ONE;
        v
    }

    /// [`theta_state`] together with its work counter.
    pub fn theta_state_counted(&self, q: &Occupation) -> Result<(ComplexVector, ContractionStats)> {
        self.check_occupation(q)?;
        let full = (1 << self.n_sites()) - 1;
        Ok(self.contract(&self.delta(q), full))
    }

    /// [`sector_contract`] together with its work counter.
    pub fn sector_contract_counted(&self, q: &Occupation) -> Result<(ComplexVector, ContractionStats)> {
        self.check_occupation(q)?;
        Ok(self.contract(&self.delta(q), q.index()))
    }
}

/// Stacks the creation MPOs of a full orthonormal basis (`N == L`).
pub fn build_grid(full_basis: &OrbitalSet) -> Result<BasisChangeGrid> {
    let l = full_basis.n_sites();
    if full_basis.n_orbitals() != l {
        return Err(Error::Argument(format!(
            "basis change needs a square basis, got {} orbitals on {l} sites",
            full_basis.n_orbitals()
        )));
    }
    check_dense_cap(l, GRID_MAX_L, "basis-change grid")?;
    full_basis.ensure_orthonormal()?;
    let rows = (0..l)
        .map(|a| build_creation_mpo(full_basis.orbital(a), l, Statistics::Fermion))
        .collect::<Result<Vec<_>>>()?;
    Ok(BasisChangeGrid { basis: full_basis.clone(), rows })
}

/// `|Ψ_q⟩ = c̃_1^{†q_1} ⋯ c̃_L^{†q_L} |Ω⟩` as a dense state.
pub fn theta_state(grid: &BasisChangeGrid, q: &Occupation) -> Result<ComplexVector> {
    grid.theta_state_counted(q).map(|(v, _)| v)
}

/// Same result as [`theta_state`], visiting only bond configurations
/// compatible with the particles requested by `q`.
pub fn sector_contract(grid: &BasisChangeGrid, q: &Occupation) -> Result<ComplexVector> {
    grid.sector_contract_counted(q).map(|(v, _)| v)
}

/// Old-basis coefficients from new-basis coefficients,
/// `T_old[s] = Σ_q ⟨s|Ψ_q⟩ T_new[q]`.
pub fn transform_tensor(grid: &BasisChangeGrid, t_new: &ComplexVector) -> Result<ComplexVector> {
    let dim = 1usize << grid.n_sites();
    if t_new.dim() != dim {
        return Err(Error::Shape(format!("coefficient tensor of dim {} for {dim} configurations", t_new.dim())));
    }
    Ok(grid.contract(t_new.entries(), dim - 1).0)
}

/// The reverse map, new-basis coefficients from old-basis coefficients.
pub fn inverse_transform(grid: &BasisChangeGrid, t_old: &ComplexVector) -> Result<ComplexVector> {
    transform_tensor(&grid.inverse()?, t_old)
}
