use std::ffi::CStr;
use std::ptr;

use slater_mps::{determinant_oracle, Occupation, OrbitalSet};
use slater_mps_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sm_last_error()) }.to_string_lossy().into_owned()
}

fn random(l: usize, n: usize, seed: u64) -> *mut SmOrbitals {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sm_orbitals_random(l, n, seed, &mut out) }, SmStatus::Ok);
    assert!(!out.is_null());
    out
}

#[test]
fn amplitudes_match_the_rust_api() {
    let orbs = random(6, 3, 11);
    let mut mps = ptr::null_mut();
    unsafe {
        assert_eq!(sm_orbitals_n_sites(orbs), 6);
        assert_eq!(sm_orbitals_n_orbitals(orbs), 3);
        assert_eq!(sm_mps_build(orbs, SmStatistics::Fermion, 0.0, &mut mps), SmStatus::Ok);
        assert_eq!(sm_mps_bond_dim(mps), 8);
        assert_eq!(sm_mps_n_sites(mps), 6);
    }
    let reference = OrbitalSet::random_orthonormal(6, 3, 11).unwrap();
    for occ in Occupation::with_popcount(6, 3) {
        let mut amp = [0.0; 2];
        let mut det = [0.0; 2];
        unsafe {
            assert_eq!(sm_mps_amplitude(mps, occ.bits().as_ptr(), 6, amp.as_mut_ptr()), SmStatus::Ok);
            assert_eq!(sm_determinant_oracle(orbs, occ.bits().as_ptr(), 6, det.as_mut_ptr()), SmStatus::Ok);
        }
        let expected = determinant_oracle(&reference, &occ).unwrap();
        assert!((amp[0] - expected.re).abs() < 1e-12 && (amp[1] - expected.im).abs() < 1e-12);
        assert_eq!(det, [expected.re, expected.im]);
    }
    unsafe {
        sm_mps_free(mps);
        sm_orbitals_free(orbs);
    }
}

#[test]
fn statevector_and_entropy() {
    let mut orbs = ptr::null_mut();
    let mut mps = ptr::null_mut();
    let mut entropy = 0.0;
    let mut state = vec![0.0; 2 * 256];
    unsafe {
        assert_eq!(sm_orbitals_plane_wave(8, 2, &mut orbs), SmStatus::Ok);
        assert_eq!(sm_mps_build(orbs, SmStatistics::Fermion, 0.0, &mut mps), SmStatus::Ok);
        assert_eq!(sm_mps_halfcut_entropy(mps, &mut entropy), SmStatus::Ok);
        assert_eq!(sm_mps_statevector(mps, state.as_mut_ptr(), state.len()), SmStatus::Ok);
        assert_eq!(sm_mps_statevector(mps, state.as_mut_ptr(), 10), SmStatus::Shape);
        sm_mps_free(mps);
        sm_orbitals_free(orbs);
    }
    assert!((entropy - 2.0 * std::f64::consts::LN_2).abs() < 1e-10);
    let norm: f64 = state.iter().map(|x| x * x).sum();
    assert!((norm - 1.0).abs() < 1e-12);
}

#[test]
fn anyon_build() {
    let orbs = random(5, 2, 3);
    let mut mps = ptr::null_mut();
    unsafe {
        assert_eq!(sm_mps_build(orbs, SmStatistics::Anyon, 0.4, &mut mps), SmStatus::Ok);
        assert_eq!(sm_mps_bond_dim(mps), 4);
        sm_mps_free(mps);
        sm_orbitals_free(orbs);
    }
}

#[test]
fn from_array_and_validation() {
    // two orbitals on two sites, second one not normalized
    let values = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0];
    let mut orbs = ptr::null_mut();
    let mut dev = 0.0;
    unsafe {
        assert_eq!(sm_orbitals_from_array(2, 2, values.as_ptr(), &mut orbs), SmStatus::Ok);
        assert_eq!(sm_orbitals_validate(orbs, &mut dev), SmStatus::Validation);
        assert!((dev - 3.0).abs() < 1e-12);
        assert!(last_error().contains("orthonormal"));
        let mut mps = ptr::null_mut();
        assert_eq!(sm_mps_build(orbs, SmStatistics::Fermion, 0.0, &mut mps), SmStatus::Validation);
        assert!(mps.is_null());
        sm_orbitals_free(orbs);

        let good = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        assert_eq!(sm_orbitals_from_array(2, 2, good.as_ptr(), &mut orbs), SmStatus::Ok);
        assert_eq!(sm_orbitals_validate(orbs, ptr::null_mut()), SmStatus::Ok);
        assert_eq!(last_error(), "");
        sm_orbitals_free(orbs);
    }
}

#[test]
fn error_codes() {
    let mut orbs = ptr::null_mut();
    unsafe {
        assert_eq!(sm_orbitals_random(4, 5, 0, &mut orbs), SmStatus::Argument);
        assert!(orbs.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(sm_orbitals_plane_wave(5, 1, &mut orbs), SmStatus::Argument);
        assert_eq!(sm_orbitals_random(4, 2, 0, ptr::null_mut()), SmStatus::NullPointer);
        assert_eq!(sm_mps_halfcut_entropy(ptr::null(), ptr::null_mut()), SmStatus::NullPointer);
        assert_eq!(sm_orbitals_n_sites(ptr::null()), 0);
        sm_orbitals_free(ptr::null_mut());
        sm_mps_free(ptr::null_mut());

        let orbs = random(5, 2, 1);
        let mut mps = ptr::null_mut();
        assert_eq!(sm_mps_build(orbs, SmStatistics::Fermion, 0.0, &mut mps), SmStatus::Ok);
        let mut out = [0.0; 2];
        let short = [1u8, 0, 1];
        assert_eq!(sm_mps_amplitude(mps, short.as_ptr(), 3, out.as_mut_ptr()), SmStatus::Shape);
        let bad = [1u8, 0, 2, 0, 0];
        assert_eq!(sm_mps_amplitude(mps, bad.as_ptr(), 5, out.as_mut_ptr()), SmStatus::Argument);
        let mut s = 0.0;
        assert_eq!(sm_mps_halfcut_entropy(mps, &mut s), SmStatus::Argument);
        sm_mps_free(mps);
        sm_orbitals_free(orbs);
    }
    let msg = unsafe { CStr::from_ptr(sm_status_string(SmStatus::Size)) };
    assert_eq!(msg.to_str().unwrap(), "size cap exceeded");
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/slater_mps.h")).unwrap();
    for name in [
        "typedef struct SmOrbitals SmOrbitals",
        "typedef struct SmMps SmMps",
        "SM_STATUS_VALIDATION = 3",
        "sm_orbitals_random",
        "sm_orbitals_from_array",
        "sm_mps_build",
        "sm_mps_amplitude",
        "sm_mps_halfcut_entropy",
        "sm_determinant_oracle",
        "sm_last_error",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
