//! C interface to `slater-mps`.
//!
//! Orbital sets and MPS are exposed as opaque handles that must be released
//! with the matching `*_free` function. Every fallible call returns an
//! [`SmStatus`]; on failure [`sm_last_error`] gives a message for the calling
//! thread. Occupation strings are passed as arrays of `0`/`1` bytes, complex
//! numbers as interleaved `(re, im)` doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{self, AssertUnwindSafe};

use slater_mps::{
    build_slater_mps, determinant_oracle, halfcut_entropy, Error, Mps, Occupation, OrbitalSet, Statistics, C64,
};

/// Opaque orbital set.
pub struct SmOrbitals(OrbitalSet);

/// Opaque matrix product state.
pub struct SmMps(Mps);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmStatus {
    Ok = 0,
    NullPointer = 1,
    Shape = 2,
    Validation = 3,
    Argument = 4,
    Size = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmStatistics {
    Fermion = 0,
    Boson = 1,
    /// Abelian anyon; the exchange phase is passed separately.
    Anyon = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> SmStatus {
    match err {
        Error::Shape(_) => SmStatus::Shape,
        Error::Validation(_) => SmStatus::Validation,
        Error::Argument(_) => SmStatus::Argument,
        Error::Size(_) => SmStatus::Size,
    }
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), SmStatus>) -> SmStatus {
    set_error("");
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SmStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            SmStatus::Panic
        }
    }
}

fn fail(err: Error) -> SmStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn null() -> SmStatus {
    set_error("null pointer argument");
    SmStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, SmStatus> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), SmStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn occupation(occ: *const u8, len: usize) -> Result<Occupation, SmStatus> {
    if occ.is_null() && len > 0 {
        return Err(null());
    }
    let bits = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(occ, len).to_vec() };
    Occupation::new(bits).map_err(fail)
}

fn statistics(kind: SmStatistics, phase: f64) -> Statistics {
    match kind {
        SmStatistics::Fermion => Statistics::Fermion,
        SmStatistics::Boson => Statistics::Boson,
        SmStatistics::Anyon => Statistics::Anyon { phase },
    }
}

unsafe fn emit_orbitals(set: slater_mps::Result<OrbitalSet>, out: *mut *mut SmOrbitals) -> Result<(), SmStatus> {
    if out.is_null() {
        return Err(null());
    }
    let set = set.map_err(fail)?;
    out.write(Box::into_raw(Box::new(SmOrbitals(set))));
    Ok(())
}

/// Message of the last failed call on this thread (empty after success).
/// Valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn sm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn sm_status_string(status: SmStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        SmStatus::Ok => b"ok\0",
        SmStatus::NullPointer => b"null pointer\0",
        SmStatus::Shape => b"shape mismatch\0",
        SmStatus::Validation => b"validation failed\0",
        SmStatus::Argument => b"invalid argument\0",
        SmStatus::Size => b"size cap exceeded\0",
        SmStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Random orthonormal orbitals, deterministic in `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sm_orbitals_random(
    n_sites: usize,
    n_orbitals: usize,
    seed: u64,
    out: *mut *mut SmOrbitals,
) -> SmStatus {
    guard(|| emit_orbitals(OrbitalSet::random_orthonormal(n_sites, n_orbitals, seed), out))
}

/// The lowest plane waves split between the two halves of the chain.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sm_orbitals_plane_wave(
    n_sites: usize,
    n_orbitals: usize,
    out: *mut *mut SmOrbitals,
) -> SmStatus {
    guard(|| emit_orbitals(OrbitalSet::plane_wave_set(n_sites, n_orbitals), out))
}

/// Orbital `a` localized on site `a`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sm_orbitals_localized(
    n_sites: usize,
    n_orbitals: usize,
    out: *mut *mut SmOrbitals,
) -> SmStatus {
    guard(|| emit_orbitals(OrbitalSet::localized(n_sites, n_orbitals), out))
}

/// Orbitals from `2 * n_orbitals * n_sites` interleaved doubles, row-major
/// (orbital by orbital). Orthonormality is not checked here, see
/// [`sm_orbitals_validate`].
///
/// # Safety
/// `values` must point to `2 * n_orbitals * n_sites` readable doubles and
/// `out` to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sm_orbitals_from_array(
    n_sites: usize,
    n_orbitals: usize,
    values: *const f64,
    out: *mut *mut SmOrbitals,
) -> SmStatus {
    guard(|| {
        if values.is_null() {
            return Err(null());
        }
        let doubles = n_sites
            .checked_mul(n_orbitals)
            .and_then(|c| c.checked_mul(2))
            .ok_or_else(|| fail(Error::Size("orbital array too large".into())))?;
        let raw = std::slice::from_raw_parts(values, doubles);
        let data = raw.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect();
        let set = slater_mps::ComplexMatrix::new(n_orbitals, n_sites, data).and_then(OrbitalSet::from_matrix);
        emit_orbitals(set, out)
    })
}

/// # Safety
/// `orbitals` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sm_orbitals_free(orbitals: *mut SmOrbitals) {
    if !orbitals.is_null() {
        drop(Box::from_raw(orbitals));
    }
}

/// Number of sites, or 0 for a null handle.
///
/// # Safety
/// `orbitals` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sm_orbitals_n_sites(orbitals: *const SmOrbitals) -> usize {
    orbitals.as_ref().map_or(0, |o| o.0.n_sites())
}

/// Number of orbitals, or 0 for a null handle.
///
/// # Safety
/// `orbitals` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sm_orbitals_n_orbitals(orbitals: *const SmOrbitals) -> usize {
    orbitals.as_ref().map_or(0, |o| o.0.n_orbitals())
}

/// Writes the largest deviation of the Gram matrix from the identity and
/// returns `SM_STATUS_VALIDATION` when it exceeds the orthonormality tolerance.
///
/// # Safety
/// `orbitals` must be a live handle; `max_deviation` may be null.
#[no_mangle]
pub unsafe extern "C" fn sm_orbitals_validate(orbitals: *const SmOrbitals, max_deviation: *mut f64) -> SmStatus {
    guard(|| {
        let set = &deref(orbitals)?.0;
        let report = set.validate();
        if !max_deviation.is_null() {
            max_deviation.write(report.max_deviation);
        }
        set.ensure_orthonormal().map_err(fail)
    })
}

/// Amplitude of a configuration from the determinant formula.
///
/// # Safety
/// `orbitals` must be a live handle, `occ` must point to `len` bytes and
/// `out` to two writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sm_determinant_oracle(
    orbitals: *const SmOrbitals,
    occ: *const u8,
    len: usize,
    out: *mut f64,
) -> SmStatus {
    guard(|| {
        let set = &deref(orbitals)?.0;
        let z = determinant_oracle(set, &occupation(occ, len)?).map_err(fail)?;
        write_out(out, z.re)?;
        write_out(out.add(1), z.im)
    })
}

/// Builds the MPS of the determinant (or its bosonic/anyonic analogue).
/// `phase` is only read for `SM_STATISTICS_ANYON`.
///
/// # Safety
/// `orbitals` must be a live handle and `out` writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sm_mps_build(
    orbitals: *const SmOrbitals,
    stat: SmStatistics,
    phase: f64,
    out: *mut *mut SmMps,
) -> SmStatus {
    guard(|| {
        let set = &deref(orbitals)?.0;
        if out.is_null() {
            return Err(null());
        }
        let mps = build_slater_mps(set, statistics(stat, phase)).map_err(fail)?;
        out.write(Box::into_raw(Box::new(SmMps(mps))));
        Ok(())
    })
}

/// # Safety
/// `mps` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sm_mps_free(mps: *mut SmMps) {
    if !mps.is_null() {
        drop(Box::from_raw(mps));
    }
}

/// # Safety
/// `mps` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sm_mps_n_sites(mps: *const SmMps) -> usize {
    mps.as_ref().map_or(0, |m| m.0.n_sites())
}

/// Largest bond dimension, or 0 for a null handle.
///
/// # Safety
/// `mps` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sm_mps_bond_dim(mps: *const SmMps) -> usize {
    mps.as_ref().map_or(0, |m| m.0.bond_dim())
}

/// # Safety
/// `mps` must be a live handle, `occ` must point to `len` bytes and `out` to
/// two writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sm_mps_amplitude(mps: *const SmMps, occ: *const u8, len: usize, out: *mut f64) -> SmStatus {
    guard(|| {
        let mps = &deref(mps)?.0;
        let z = mps.amplitude(&occupation(occ, len)?).map_err(fail)?;
        write_out(out, z.re)?;
        write_out(out.add(1), z.im)
    })
}

/// Dense statevector as `2 * 2^L` interleaved doubles; `len` is the capacity
/// of `out` in doubles.
///
/// # Safety
/// `mps` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sm_mps_statevector(mps: *const SmMps, out: *mut f64, len: usize) -> SmStatus {
    guard(|| {
        let mps = &deref(mps)?.0;
        if out.is_null() {
            return Err(null());
        }
        let state = mps.to_dense().map_err(fail)?;
        if len < 2 * state.dim() {
            return Err(fail(Error::Shape(format!("buffer of {len} doubles, need {}", 2 * state.dim()))));
        }
        let buf = std::slice::from_raw_parts_mut(out, 2 * state.dim());
        for (pair, z) in buf.chunks_exact_mut(2).zip(state.entries()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// Von Neumann entropy (nats) of the left half of an even chain.
///
/// # Safety
/// `mps` must be a live handle and `out` a writable double.
#[no_mangle]
pub unsafe extern "C" fn sm_mps_halfcut_entropy(mps: *const SmMps, out: *mut f64) -> SmStatus {
    guard(|| {
        let mps = &deref(mps)?.0;
        let report = halfcut_entropy(mps).map_err(fail)?;
        write_out(out, report.entropy_nats)
    })
}
