mod bench;
mod commands;
mod verify;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context};
use clap::{Parser, Subcommand, ValueEnum};
use slater_mps::{OrbitalSet, Statistics, C64, DENSE_MAX_L};

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

const MAX_L_ENV: &str = "SLATER_MPS_MAX_L";

/// Exact matrix product states for Slater determinants.
#[derive(Debug, Parser)]
#[command(name = "slater-mps", version)]
pub struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write an orbital file.
    GenOrbitals {
        #[arg(long, value_enum)]
        kind: OrbitalKind,
        #[arg(short = 'L', long = "sites")]
        n_sites: usize,
        #[arg(short = 'N', long = "orbitals")]
        n_orbitals: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the MPS of a determinant and dump its tensors as JSON.
    Build {
        #[command(flatten)]
        input: StateInput,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Contract selected amplitudes from the MPS (JSON lines).
    Amplitude {
        #[command(flatten)]
        input: StateInput,
        /// Occupation string such as 0110; may be repeated.
        #[arg(long = "occ", required_unless_present = "all")]
        occ: Vec<String>,
        /// Every configuration with the right particle number.
        #[arg(long, conflicts_with = "occ")]
        all: bool,
    },
    /// Dense state of the determinant (JSON lines, particle-number sector only).
    Statevector {
        #[command(flatten)]
        input: StateInput,
    },
    /// Half-chain entanglement entropy.
    Entropy {
        #[command(flatten)]
        input: StateInput,
    },
    /// Compare the MPS with brute-force oracles.
    Verify {
        #[command(flatten)]
        input: StateInput,
        /// Extra random orbital sets of the same shape, seeded 0, 1, ...
        #[arg(long, default_value_t = 0)]
        seeds: u64,
        #[arg(long, default_value_t = verify::DEFAULT_TOL)]
        tol: f64,
    },
    /// Check the two-determinant MPOs against each other and the oracle.
    CiCheck {
        /// File with exactly four orbitals.
        #[arg(long)]
        orbitals: PathBuf,
        /// Coefficient of the first pair, as `re,im`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: C64,
        /// Coefficient of the second pair, as `re,im`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        beta: C64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Map coefficients in a new one-body basis to the site basis.
    BasisChange {
        /// Full orthonormal basis (N == L).
        #[arg(long)]
        basis: PathBuf,
        /// Amplitudes in the new basis (JSON lines, `-` for stdin).
        #[arg(long)]
        input: PathBuf,
        /// Apply the reverse map, site basis to new basis.
        #[arg(long)]
        inverse: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time construction and contraction (CSV).
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
        sites: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        particles: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrbitalKind {
    Random,
    PlaneWave,
    Localized,
}

#[derive(Debug, clap::Args)]
struct StateInput {
    /// Orbital file (`-` for stdin).
    #[arg(long)]
    orbitals: PathBuf,
    /// fermion, boson or anyon:<phase>
    #[arg(long, default_value = "fermion")]
    stat: Statistics,
}

impl StateInput {
    fn load(&self) -> anyhow::Result<OrbitalSet> {
        load_orbitals(&self.orbitals)
    }
}

pub fn run(args: Args) -> anyhow::Result<ExitCode> {
    let cap = dense_cap()?;
    match args.command {
        Command::GenOrbitals { kind, n_sites, n_orbitals, seed, output } => {
            commands::gen_orbitals(kind, n_sites, n_orbitals, seed, output.as_deref())
        }
        Command::Build { input, output } => commands::build(&input, output.as_deref()),
        Command::Amplitude { input, occ, all } => commands::amplitude(&input, &occ, all, cap),
        Command::Statevector { input } => commands::statevector(&input, cap),
        Command::Entropy { input } => commands::entropy(&input, cap),
        Command::Verify { input, seeds, tol } => verify::run(&input, seeds, tol, cap),
        Command::CiCheck { orbitals, alpha, beta, tol } => commands::ci_check(&orbitals, alpha, beta, tol, cap),
        Command::BasisChange { basis, input, inverse, output } => {
            commands::basis_change(&basis, &input, inverse, output.as_deref(), cap)
        }
        Command::Bench { sites, particles, repeats, seed } => bench::run(&sites, &particles, repeats, seed, cap),
    }
}

/// The dense cap, lowered by the environment if requested.
fn dense_cap() -> anyhow::Result<usize> {
    match std::env::var(MAX_L_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("{MAX_L_ENV}={v:?} is not a count"))?;
            Ok(n.min(DENSE_MAX_L))
        }
        Err(std::env::VarError::NotPresent) => Ok(DENSE_MAX_L),
        Err(e) => bail!("{MAX_L_ENV}: {e}"),
    }
}

fn require_cap(n_sites: usize, cap: usize, what: &str) -> anyhow::Result<()> {
    ensure!(n_sites <= cap, "{what} needs L <= {cap}, got L = {n_sites}");
    Ok(())
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).context("reading stdin")?;
        Ok(text)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

/// Loads an orbital file and insists on orthonormal rows.
fn load_orbitals(path: &Path) -> anyhow::Result<OrbitalSet> {
    let set = slater_mps::io::orbitals_from_json(&read_input(path)?)
        .with_context(|| format!("loading {}", path.display()))?;
    set.ensure_orthonormal().with_context(|| format!("orbitals in {}", path.display()))?;
    Ok(set)
}

/// Writes `text` to `output`, or stdout when absent.
fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    let z = match parts.as_slice() {
        [re] => C64::new(num(re)?, 0.0),
        [re, im] => C64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected re,im but got {s:?}")),
    };
    if z.is_finite() {
        Ok(z)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}
