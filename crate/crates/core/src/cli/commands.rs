use std::fs::File;
use std::io::{self, BufReader};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{ensure, Context};
use serde_json::json;
use slater_mps::basis_change::{build_grid, inverse_transform, transform_tensor, GRID_MAX_L};
use slater_mps::ci::{ci_entropy_bound_check, ci_residuals, CiCoefficients, CI_DENSE_MAX_L};
use slater_mps::io::{self as sio, AmplitudeRecord};
use slater_mps::{build_slater_mps, halfcut_entropy, Occupation, OrbitalSet, C64};

use super::{emit, load_orbitals, require_cap, OrbitalKind, StateInput, EXIT_VERIFY};

pub(super) fn gen_orbitals(
    kind: OrbitalKind,
    n_sites: usize,
    n_orbitals: usize,
    seed: u64,
    output: Option<&Path>,
) -> anyhow::Result<ExitCode> {
    let set = match kind {
        OrbitalKind::Random => OrbitalSet::random_orthonormal(n_sites, n_orbitals, seed),
        OrbitalKind::PlaneWave => OrbitalSet::plane_wave_set(n_sites, n_orbitals),
        OrbitalKind::Localized => OrbitalSet::localized(n_sites, n_orbitals),
    }?;
    emit(output, &(sio::orbitals_to_json(&set) + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

pub(super) fn build(input: &StateInput, output: Option<&Path>) -> anyhow::Result<ExitCode> {
    let mps = build_slater_mps(&input.load()?, input.stat)?;
    emit(output, &(sio::mps_to_json(&mps) + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn emit_records(records: &[AmplitudeRecord]) -> anyhow::Result<()> {
    let mut out = io::BufWriter::new(io::stdout().lock());
    sio::write_amplitudes(&mut out, records)?;
    io::Write::flush(&mut out)?;
    Ok(())
}

pub(super) fn amplitude(input: &StateInput, occ: &[String], all: bool, cap: usize) -> anyhow::Result<ExitCode> {
    let set = input.load()?;
    let mps = build_slater_mps(&set, input.stat)?;
    let configs = if all {
        require_cap(set.n_sites(), cap, "listing every amplitude")?;
        Occupation::with_popcount(set.n_sites(), set.n_orbitals())
    } else {
        occ.iter().map(|s| s.parse()).collect::<slater_mps::Result<Vec<Occupation>>>()?
    };
    let records =
        configs.iter().map(|o| Ok(AmplitudeRecord::new(o, mps.amplitude(o)?))).collect::<anyhow::Result<Vec<_>>>()?;
    emit_records(&records)?;
    Ok(ExitCode::SUCCESS)
}

pub(super) fn statevector(input: &StateInput, cap: usize) -> anyhow::Result<ExitCode> {
    let set = input.load()?;
    require_cap(set.n_sites(), cap, "statevector")?;
    let state = build_slater_mps(&set, input.stat)?.to_dense()?;
    let records: Vec<AmplitudeRecord> = Occupation::with_popcount(set.n_sites(), set.n_orbitals())
        .iter()
        .map(|o| AmplitudeRecord::new(o, state[o.index()]))
        .collect();
    emit_records(&records)?;
    Ok(ExitCode::SUCCESS)
}

pub(super) fn entropy(input: &StateInput, cap: usize) -> anyhow::Result<ExitCode> {
    let set = input.load()?;
    require_cap(set.n_sites(), cap, "entropy")?;
    let report = halfcut_entropy(&build_slater_mps(&set, input.stat)?)?;
    emit(None, &(serde_json::to_string(&report)? + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

pub(super) fn ci_check(orbitals: &Path, alpha: C64, beta: C64, tol: f64, cap: usize) -> anyhow::Result<ExitCode> {
    let set = load_orbitals(orbitals)?;
    let l = set.n_sites();
    require_cap(l, cap.min(CI_DENSE_MAX_L), "ci-check")?;
    let c = CiCoefficients::new(alpha, beta, set.clone())?;
    let residuals = ci_residuals(&c, l)?;

    // the normalized state does not depend on the overall scale of (α, β)
    let weight = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    let entropy = if l.is_multiple_of(2) && weight > 0.0 {
        let scale = C64::new(weight.recip(), 0.0);
        let unit = CiCoefficients::new(alpha * scale, beta * scale, set)?;
        Some(ci_entropy_bound_check(&unit, l)?)
    } else {
        None
    };
    let pass = residuals.max() < tol && entropy.is_none_or(|e| e.within_bound);
    let report = json!({
        "L": l,
        "residuals": residuals,
        "max_residual": residuals.max(),
        "tolerance": tol,
        "entropy": entropy,
        "pass": pass,
    });
    emit(None, &(report.to_string() + "\n"))?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VERIFY) })
}

pub(super) fn basis_change(
    basis: &Path,
    input: &Path,
    inverse: bool,
    output: Option<&Path>,
    cap: usize,
) -> anyhow::Result<ExitCode> {
    let set = load_orbitals(basis)?;
    require_cap(set.n_sites(), cap.min(GRID_MAX_L), "basis-change")?;
    let grid = build_grid(&set)?;
    let records = if input == Path::new("-") {
        sio::read_amplitudes(io::stdin().lock())?
    } else {
        let file = File::open(input).with_context(|| format!("opening {}", input.display()))?;
        sio::read_amplitudes(BufReader::new(file))?
    };
    let (t_in, l) = sio::records_to_state(&records)?;
    ensure!(l == grid.n_sites(), "amplitudes on {l} sites for a basis on {} sites", grid.n_sites());
    let t_out = if inverse { inverse_transform(&grid, &t_in)? } else { transform_tensor(&grid, &t_in)? };
    let mut buf = Vec::new();
    sio::write_amplitudes(&mut buf, &sio::state_to_records(&t_out, l))?;
    emit(output, std::str::from_utf8(&buf)?)?;
    Ok(ExitCode::SUCCESS)
}
