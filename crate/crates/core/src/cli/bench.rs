use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::ensure;
use slater_mps::{build_slater_mps, Occupation, OrbitalSet, Statistics, MAX_PARTICLES};

use super::emit;

/// Amplitudes timed per repeat, taken from the start of the sector.
const AMPLITUDE_SAMPLES: usize = 256;

struct Row {
    n_sites: usize,
    n_particles: usize,
    build_ms: f64,
    amplitude_us_mean: f64,
    dense_ms: Option<f64>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if !xs.len().is_multiple_of(2) {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2.0
    }
}

fn measure(l: usize, n: usize, repeats: usize, seed: u64, cap: usize) -> anyhow::Result<Row> {
    let set = OrbitalSet::random_orthonormal(l, n, seed)?;
    let configs: Vec<Occupation> = Occupation::with_popcount(l, n).into_iter().take(AMPLITUDE_SAMPLES).collect();
    let mut build = Vec::with_capacity(repeats);
    let mut dense = Vec::with_capacity(repeats);
    let mut amp_total = 0.0;
    let mut amp_count = 0usize;
    for _ in 0..repeats {
        let t = Instant::now();
        let mps = build_slater_mps(&set, Statistics::Fermion)?;
        build.push(t.elapsed().as_secs_f64() * 1e3);

        let t = Instant::now();
        for occ in &configs {
            std::hint::black_box(mps.amplitude(occ)?);
        }
        amp_total += t.elapsed().as_secs_f64() * 1e6;
        amp_count += configs.len();

        if l <= cap {
            let t = Instant::now();
            std::hint::black_box(mps.to_dense()?);
            dense.push(t.elapsed().as_secs_f64() * 1e3);
        }
    }
    Ok(Row {
        n_sites: l,
        n_particles: n,
        build_ms: median(build),
        amplitude_us_mean: amp_total / amp_count.max(1) as f64,
        dense_ms: (!dense.is_empty()).then(|| median(dense)),
    })
}

pub(super) fn run(
    sites: &[usize],
    particles: &[usize],
    repeats: usize,
    seed: u64,
    cap: usize,
) -> anyhow::Result<ExitCode> {
    ensure!(repeats >= 1, "need at least one repeat");
    let mut sites = sites.to_vec();
    let mut particles = particles.to_vec();
    sites.sort_unstable();
    sites.dedup();
    particles.sort_unstable();
    particles.dedup();
    ensure!(
        particles.iter().all(|&n| (1..=MAX_PARTICLES).contains(&n)),
        "particle numbers must lie in 1..={MAX_PARTICLES}"
    );

    let mut csv = String::from("L,N,build_ms,amplitude_us_mean,dense_ms\n");
    for &l in &sites {
        for &n in particles.iter().filter(|&&n| n <= l) {
            let row = measure(l, n, repeats, seed, cap)?;
            let dense = row.dense_ms.map(|d| format!("{d:.6}")).unwrap_or_default();
            writeln!(
                csv,
                "{},{},{:.6},{:.6},{dense}",
                row.n_sites, row.n_particles, row.build_ms, row.amplitude_us_mean
            )?;
        }
    }
    emit(None, &csv)?;
    Ok(ExitCode::SUCCESS)
}
