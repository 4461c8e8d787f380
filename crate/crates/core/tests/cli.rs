use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use slater_mps::io::{orbitals_from_json, orbitals_to_json};
use slater_mps::tensor::ComplexMatrix;
use slater_mps::OrbitalSet;
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_slater-mps"));
    cmd.env_remove("SLATER_MPS_MAX_L");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(stdout(out).trim()).unwrap_or_else(|e| panic!("{e}: {:?}", stdout(out)))
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["gen-orbitals"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_orbitals_plane_wave_reloads() {
    let dir = TempDir::new().unwrap();
    let path = gen(dir.path(), "pw.json", &["--kind", "plane-wave", "-L", "8", "-N", "2"]);
    let set = orbitals_from_json(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!((set.n_orbitals(), set.n_sites()), (2, 8));
    assert!(set.validate().is_ok());
}

#[test]
fn gen_orbitals_localized_is_identity() {
    let out = run(&["gen-orbitals", "--kind", "localized", "-L", "4", "-N", "4"]);
    assert!(out.status.success());
    let set = orbitals_from_json(&stdout(&out)).unwrap();
    assert_eq!(set.matrix(), &ComplexMatrix::identity(4));
}

#[test]
fn gen_orbitals_is_deterministic_per_seed() {
    let a = run(&["gen-orbitals", "--kind", "random", "-L", "5", "-N", "2", "--seed", "9"]);
    let b = run(&["gen-orbitals", "--kind", "random", "-L", "5", "-N", "2", "--seed", "9"]);
    let c = run(&["gen-orbitals", "--kind", "random", "-L", "5", "-N", "2", "--seed", "10"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn bad_parameters_exit_with_usage_code() {
    let out = run(&["gen-orbitals", "--kind", "random", "-L", "4", "-N", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["gen-orbitals", "--kind", "plane-wave", "-L", "5", "-N", "1"]).status.code(), Some(2));
}

#[test]
fn verify_random_fermions_and_bosons() {
    let dir = TempDir::new().unwrap();
    let path = gen(dir.path(), "r.json", &["--kind", "random", "-L", "6", "-N", "3", "--seed", "1"]);
    for stat in ["fermion", "boson", "anyon:0.7"] {
        let out = run(&["verify", "--orbitals", path_str(&path), "--stat", stat, "--seeds", "2"]);
        assert_eq!(out.status.code(), Some(0), "{stat}");
        let report = json(&out);
        assert_eq!(report["pass"], true);
        assert_eq!(report["samples"], 3);
        for key in ["max_amplitude_residual", "norm_residual", "anticommutator_residual"] {
            assert!(report[key].as_f64().unwrap() < 1e-11);
        }
    }
}

#[test]
fn verify_rejects_corrupted_orbitals() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    let set = OrbitalSet::random_orthonormal(4, 2, 3).unwrap();
    let mut m = set.matrix().clone();
    m[(1, 0)] += slater_mps::C64::new(0.3, 0.0);
    fs::write(&path, orbitals_to_json(&OrbitalSet::from_matrix(m).unwrap())).unwrap();
    let out = run(&["verify", "--orbitals", path_str(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("orthonormal"));
}

#[test]
fn verify_rejects_oversize_input() {
    let dir = TempDir::new().unwrap();
    let path = gen(dir.path(), "big.json", &["--kind", "random", "-L", "9", "-N", "2"]);
    assert_eq!(run(&["verify", "--orbitals", path_str(&path)]).status.code(), Some(2));
}

#[test]
fn verify_failure_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let path = gen(dir.path(), "r.json", &["--kind", "random", "-L", "5", "-N", "2"]);
    let out = run(&["verify", "--orbitals", path_str(&path), "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn entropy_reports() {
    let dir = TempDir::new().unwrap();
    let pw = gen(dir.path(), "pw.json", &["--kind", "plane-wave", "-L", "8", "-N", "2"]);
    let report = json(&run(&["entropy", "--orbitals", path_str(&pw)]));
    assert!((report["entropy_log2"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    assert_eq!(report["cut"], 4);
    assert_eq!(report["bond_dim"], 4);

    let loc = gen(dir.path(), "loc.json", &["--kind", "localized", "-L", "6", "-N", "2"]);
    let report = json(&run(&["entropy", "--orbitals", path_str(&loc)]));
    assert!(report["entropy_nats"].as_f64().unwrap().abs() < 1e-12);

    let rnd = gen(dir.path(), "rnd.json", &["--kind", "random", "-L", "8", "-N", "3", "--seed", "4"]);
    let s = json(&run(&["entropy", "--orbitals", path_str(&rnd)]))["entropy_nats"].as_f64().unwrap();
    assert!((0.0..=3.0 * std::f64::consts::LN_2 + 1e-9).contains(&s));

    let odd = gen(dir.path(), "odd.json", &["--kind", "random", "-L", "5", "-N", "2"]);
    assert_eq!(run(&["entropy", "--orbitals", path_str(&odd)]).status.code(), Some(2));
}

#[test]
fn env_cap_lowers_but_never_raises() {
    let dir = TempDir::new().unwrap();
    let pw = gen(dir.path(), "pw.json", &["--kind", "plane-wave", "-L", "8", "-N", "2"]);
    let lowered = bin().args(["entropy", "--orbitals", path_str(&pw)]).env("SLATER_MPS_MAX_L", "6").output().unwrap();
    assert_eq!(lowered.status.code(), Some(2));
    let raised = bin().args(["entropy", "--orbitals", path_str(&pw)]).env("SLATER_MPS_MAX_L", "64").output().unwrap();
    assert_eq!(raised.status.code(), Some(0));
    let big = gen(dir.path(), "big.json", &["--kind", "random", "-L", "14", "-N", "1"]);
    let out = bin().args(["statevector", "--orbitals", path_str(&big)]).env("SLATER_MPS_MAX_L", "64").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let bad = bin().args(["entropy", "--orbitals", path_str(&pw)]).env("SLATER_MPS_MAX_L", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn amplitudes_and_statevector_agree() {
    let dir = TempDir::new().unwrap();
    let path = gen(dir.path(), "r.json", &["--kind", "random", "-L", "6", "-N", "2", "--seed", "2"]);
    let all = stdout(&run(&["amplitude", "--orbitals", path_str(&path), "--all"]));
    let dense = stdout(&run(&["statevector", "--orbitals", path_str(&path)]));
    let parse = |text: &str| -> Vec<Value> { text.lines().map(|l| serde_json::from_str(l).unwrap()).collect() };
    let (a, d) = (parse(&all), parse(&dense));
    assert_eq!(a.len(), 15);
    assert_eq!(d.len(), 15);
    for (x, y) in a.iter().zip(&d) {
        assert_eq!(x["occ"], y["occ"]);
        assert!((x["re"].as_f64().unwrap() - y["re"].as_f64().unwrap()).abs() < 1e-12);
        assert!((x["im"].as_f64().unwrap() - y["im"].as_f64().unwrap()).abs() < 1e-12);
    }
    let one = parse(&stdout(&run(&["amplitude", "--orbitals", path_str(&path), "--occ", "100100"])));
    assert_eq!(one.len(), 1);
    assert_eq!(run(&["amplitude", "--orbitals", path_str(&path), "--occ", "10x"]).status.code(), Some(2));
}

#[test]
fn build_writes_mps_json() {
    let dir = TempDir::new().unwrap();
    let path = gen(dir.path(), "r.json", &["--kind", "random", "-L", "5", "-N", "3"]);
    let out = dir.path().join("mps.json");
    assert!(run(&["build", "--orbitals", path_str(&path), "-o", path_str(&out)]).status.success());
    let mps: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(mps["L"], 5);
    assert_eq!(mps["bond_dim"], 8);
    assert_eq!(mps["sites"].as_array().unwrap().len(), 5);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let path = gen(dir.path(), "r.json", &["--kind", "random", "-L", "6", "-N", "3", "--seed", "7"]);
    for args in [
        vec!["verify", "--orbitals", path_str(&path), "--seeds", "1"],
        vec!["entropy", "--orbitals", path_str(&path)],
        vec!["statevector", "--orbitals", path_str(&path)],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}

#[test]
fn ci_check_reports_residuals_and_entropy() {
    let dir = TempDir::new().unwrap();
    let path = gen(dir.path(), "c.json", &["--kind", "random", "-L", "6", "-N", "4", "--seed", "3"]);
    let out = run(&["ci-check", "--orbitals", path_str(&path), "--alpha", "0.6,0.0", "--beta", "-0.8,0"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(report["max_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(report["entropy"]["within_bound"], true);
    let three = gen(dir.path(), "t.json", &["--kind", "random", "-L", "6", "-N", "3"]);
    let out = run(&["ci-check", "--orbitals", path_str(&three), "--alpha", "1", "--beta", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn basis_change_round_trip() {
    let dir = TempDir::new().unwrap();
    let basis = gen(dir.path(), "u.json", &["--kind", "random", "-L", "4", "-N", "4", "--seed", "5"]);
    let t_new = dir.path().join("new.jsonl");
    fs::write(&t_new, "{\"occ\":\"0110\",\"re\":0.6,\"im\":0.0}\n{\"occ\":\"1001\",\"re\":0.0,\"im\":0.8}\n").unwrap();
    let t_old = dir.path().join("old.jsonl");
    let back = dir.path().join("back.jsonl");
    let fwd = run(&["basis-change", "--basis", path_str(&basis), "--input", path_str(&t_new), "-o", path_str(&t_old)]);
    assert!(fwd.status.success(), "{}", String::from_utf8_lossy(&fwd.stderr));
    let inv = run(&[
        "basis-change",
        "--basis",
        path_str(&basis),
        "--input",
        path_str(&t_old),
        "--inverse",
        "-o",
        path_str(&back),
    ]);
    assert!(inv.status.success());
    let records = slater_mps::io::read_amplitudes(fs::read_to_string(back).unwrap().as_bytes()).unwrap();
    let (state, _) = slater_mps::io::records_to_state(&records).unwrap();
    assert!((state[0b0110].re - 0.6).abs() < 1e-11);
    assert!((state[0b1001].im - 0.8).abs() < 1e-11);
    assert!((state.norm() - 1.0).abs() < 1e-11);

    let wrong = gen(dir.path(), "w.json", &["--kind", "random", "-L", "4", "-N", "2"]);
    let out = run(&["basis-change", "--basis", path_str(&wrong), "--input", path_str(&t_new)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_emits_csv() {
    let out = run(&["bench", "--sites", "6", "--particles", "2", "--repeats", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "L,N,build_ms,amplitude_us_mean,dense_ms");
    assert_eq!(lines.len(), 2);
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&cells[..2], &["6", "2"]);
    for cell in &cells[2..] {
        assert!(cell.parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn bench_amplitude_cost_grows_with_particle_number() {
    let out = run(&["bench", "--sites", "10", "--particles", "1,3,5", "--repeats", "3"]);
    let text = stdout(&out);
    let costs: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(costs.len(), 3);
    // bond dimension 2, 8, 32: a loose check on the trend
    assert!(costs[2] > costs[0], "{costs:?}");
}
