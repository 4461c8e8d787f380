use std::process::ExitCode;

use anyhow::Context;
use serde::Serialize;
use slater_mps::tensor::{matmul, ComplexMatrix, ComplexVector};
use slater_mps::{
    anyonic_oracle, build_slater_mps, determinant_oracle, jw_dense_creation, Occupation, OrbitalSet, Statistics,
};

use super::{emit, require_cap, StateInput, EXIT_VERIFY};

pub(super) const DEFAULT_TOL: f64 = 1e-11;
const VERIFY_MAX_L: usize = 8;

#[derive(Debug, Default, Serialize)]
struct VerifyReport {
    #[serde(rename = "L")]
    n_sites: usize,
    #[serde(rename = "N")]
    n_orbitals: usize,
    statistics: String,
    samples: usize,
    max_amplitude_residual: f64,
    norm_residual: f64,
    anticommutator_residual: f64,
    tolerance: f64,
    pass: bool,
}

struct Residuals {
    amplitude: f64,
    norm: f64,
    anticommutator: f64,
}

fn oracle_state(set: &OrbitalSet, stat: Statistics) -> anyhow::Result<ComplexVector> {
    if stat == Statistics::Fermion {
        let l = set.n_sites();
        (0..1usize << l)
            .map(|idx| determinant_oracle(set, &Occupation::from_index(idx, l)))
            .collect::<slater_mps::Result<Vec<_>>>()
            .map(ComplexVector::new)
            .map_err(Into::into)
    } else {
        Ok(anyonic_oracle(set, stat)?)
    }
}

/// Largest deviation of `{c_a, c_b†} = δ_ab` and `{c_a†, c_b†} = 0` over all
/// pairs of orbitals, with fermionic Jordan-Wigner operators.
fn anticommutator_residual(set: &OrbitalSet) -> anyhow::Result<f64> {
    let l = set.n_sites();
    let ops = (0..set.n_orbitals())
        .map(|a| jw_dense_creation(set.orbital(a), l, Statistics::Fermion))
        .collect::<slater_mps::Result<Vec<_>>>()?;
    let ann: Vec<ComplexMatrix> = ops.iter().map(ComplexMatrix::adjoint).collect();
    let identity = ComplexMatrix::identity(1 << l);
    let zero = ComplexMatrix::zeros(1 << l, 1 << l);
    let mut worst = 0.0f64;
    for a in 0..ops.len() {
        for b in 0..ops.len() {
            let mixed = matmul(&ann[a], &ops[b])?.add(&matmul(&ops[b], &ann[a])?)?;
            let expected = if a == b { &identity } else { &zero };
            worst = worst.max(mixed.max_abs_diff(expected));
            let created = matmul(&ops[a], &ops[b])?.add(&matmul(&ops[b], &ops[a])?)?;
            worst = worst.max(created.max_abs());
        }
    }
    Ok(worst)
}

fn check(set: &OrbitalSet, stat: Statistics) -> anyhow::Result<Residuals> {
    let l = set.n_sites();
    let mps = build_slater_mps(set, stat)?;
    let oracle = oracle_state(set, stat)?;
    let mut amplitude = mps.to_dense()?.max_abs_diff(&oracle);
    for occ in Occupation::with_popcount(l, set.n_orbitals()) {
        amplitude = amplitude.max((mps.amplitude(&occ)? - oracle[occ.index()]).norm());
    }
    let norm = (mps.norm_sqr() - oracle.norm().powi(2)).abs();
    Ok(Residuals { amplitude, norm, anticommutator: anticommutator_residual(set)? })
}

pub(super) fn run(input: &StateInput, seeds: u64, tol: f64, cap: usize) -> anyhow::Result<ExitCode> {
    let set = input.load()?;
    let (l, n) = (set.n_sites(), set.n_orbitals());
    require_cap(l, cap.min(VERIFY_MAX_L), "verify")?;

    let mut sets = vec![set];
    for seed in 0..seeds {
        sets.push(OrbitalSet::random_orthonormal(l, n, seed)?);
    }
    let mut report = VerifyReport {
        n_sites: l,
        n_orbitals: n,
        statistics: input.stat.to_string(),
        samples: sets.len(),
        tolerance: tol,
        ..Default::default()
    };
    for (k, s) in sets.iter().enumerate() {
        let r = check(s, input.stat).with_context(|| format!("sample {k}"))?;
        report.max_amplitude_residual = report.max_amplitude_residual.max(r.amplitude);
        report.norm_residual = report.norm_residual.max(r.norm);
        report.anticommutator_residual = report.anticommutator_residual.max(r.anticommutator);
    }
    report.pass =
        report.max_amplitude_residual < tol && report.norm_residual < tol && report.anticommutator_residual < tol;
    emit(None, &(serde_json::to_string(&report)? + "\n"))?;
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VERIFY) })
}
