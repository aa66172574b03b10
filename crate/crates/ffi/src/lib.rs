//! C ABI for `altbell`.
//!
//! Every fallible function returns an [`AltbellStatus`]; results go through
//! out-pointers. On failure, [`altbell_last_error_message`] describes the
//! most recent error on the calling thread. Bases and teleport runs are
//! opaque handles released with their `_free` function; strings returned by
//! the library are released with [`altbell_string_free`].
//!
//! Complex matrices are passed as row-major arrays of [`AltbellComplex`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use altbell::basis::{
    assemble_transform, builtin_basis, entanglement_determinant, expand_computational,
    parse_basis_json, BasisFile, EntangledBasis, Family, QubitState, TwoQubitState,
};
use altbell::circuit::{self, CircuitParams, TeleportFamily, Verdict};
use altbell::linalg::{Mat2, C64};
use altbell::teleport::{self, Mode, TeleportRun};
use altbell::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltbellStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SingularMatrix = 3,
    InvalidBasis = 4,
    ParamOutOfRange = 5,
    UnnormalizedInput = 6,
    UnknownCircuit = 7,
    ParseError = 8,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltbellMode {
    Exact = 0,
    Unitary = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltbellVerdict {
    Exact = 0,
    PhaseEquivalent = 1,
    Mismatch = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AltbellComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for AltbellComplex {
    fn from(z: C64) -> Self {
        AltbellComplex { re: z.re, im: z.im }
    }
}

impl From<AltbellComplex> for C64 {
    fn from(z: AltbellComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

/// Opaque handle to a validated entangled basis.
pub struct AltbellBasis(EntangledBasis);

/// Opaque handle to the result of a teleport run.
pub struct AltbellTeleportRun(TeleportRun);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AltbellStatus {
    match e {
        Error::SingularMatrix { .. } | Error::SingularCorrection { .. } => {
            AltbellStatus::SingularMatrix
        }
        Error::InvalidBasis(_) => AltbellStatus::InvalidBasis,
        Error::ParamOutOfRange { .. } | Error::IndexOutOfRange { .. } => {
            AltbellStatus::ParamOutOfRange
        }
        Error::UnnormalizedInput { .. } => AltbellStatus::UnnormalizedInput,
        Error::UnknownCircuit(_) => AltbellStatus::UnknownCircuit,
        Error::Parse { .. } | Error::Json(_) => AltbellStatus::ParseError,
        _ => AltbellStatus::InvalidArgument,
    }
}

struct Fail(AltbellStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(AltbellStatus::NullPointer, format!("{what} is null"))
}

fn invalid(message: impl Into<String>) -> Fail {
    Fail(AltbellStatus::InvalidArgument, message.into())
}

/// Runs `f`, converting errors and panics into a status and recording the
/// message for [`altbell_last_error_message`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> AltbellStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AltbellStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(format!("panic: {message}"));
            AltbellStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn read_array<const N: usize>(
    p: *const AltbellComplex,
    what: &str,
) -> Result<[C64; N], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    let s = std::slice::from_raw_parts(p, N);
    Ok(std::array::from_fn(|i| s[i].into()))
}

unsafe fn write_array(p: *mut AltbellComplex, values: &[C64], what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    let s = std::slice::from_raw_parts_mut(p, values.len());
    for (o, v) in s.iter_mut().zip(values) {
        *o = (*v).into();
    }
    Ok(())
}

fn to_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| invalid("string contains a nul byte"))
}

fn opt(x: f64) -> Option<f64> {
    (!x.is_nan()).then_some(x)
}

/// Message for the last failed call on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn altbell_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn altbell_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn altbell_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a built-in basis family. Pass NaN for a parameter the family does
/// not use.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn altbell_basis_builtin(
    name: *const c_char,
    theta: f64,
    lambda: f64,
    out: *mut *mut AltbellBasis,
) -> AltbellStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let name = read_str(name, "name")?;
        let family = Family::from_name(name, opt(theta), opt(lambda))?;
        let basis = builtin_basis(&family)?;
        *out = Box::into_raw(Box::new(AltbellBasis(basis)));
        Ok(())
    })
}

/// Parses and validates a basis from its JSON file format.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn altbell_basis_from_json(
    json: *const c_char,
    out: *mut *mut AltbellBasis,
) -> AltbellStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let basis = parse_basis_json(read_str(json, "json")?)?;
        *out = Box::into_raw(Box::new(AltbellBasis(basis)));
        Ok(())
    })
}

/// Serializes a basis to its JSON file format.
///
/// # Safety
/// `basis` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn altbell_basis_to_json(
    basis: *const AltbellBasis,
    out: *mut *mut c_char,
) -> AltbellStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let basis = basis.as_ref().ok_or_else(|| null("basis"))?;
        *out = to_c_string(BasisFile::from_basis(&basis.0).to_json()?)?;
        Ok(())
    })
}

/// Releases a basis handle. Null is ignored.
///
/// # Safety
/// `basis` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn altbell_basis_free(basis: *mut AltbellBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

/// Writes matrix `A_index` (row-major, 4 entries) to `out`.
///
/// # Safety
/// `basis` must be a live handle; `out` must hold 4 elements.
#[no_mangle]
pub unsafe extern "C" fn altbell_basis_matrix(
    basis: *const AltbellBasis,
    index: usize,
    out: *mut AltbellComplex,
) -> AltbellStatus {
    guard(|| {
        let basis = basis.as_ref().ok_or_else(|| null("basis"))?;
        let m = basis.0.matrix(index)?;
        write_array(out, &m.vectorize(), "out")
    })
}

/// Writes `T` and `T⁻¹` (row-major, 16 entries each). Either output may be
/// null if not wanted.
///
/// # Safety
/// `basis` must be a live handle; non-null outputs must hold 16 elements.
#[no_mangle]
pub unsafe extern "C" fn altbell_basis_transform(
    basis: *const AltbellBasis,
    out_t: *mut AltbellComplex,
    out_t_inv: *mut AltbellComplex,
) -> AltbellStatus {
    guard(|| {
        let basis = basis.as_ref().ok_or_else(|| null("basis"))?;
        let tr = assemble_transform(&basis.0)?;
        let flat = |m: &altbell::linalg::Mat4| m.0.iter().flatten().copied().collect::<Vec<_>>();
        if !out_t.is_null() {
            write_array(out_t, &flat(&tr.t), "out_t")?;
        }
        if !out_t_inv.is_null() {
            write_array(out_t_inv, &flat(&tr.t_inv), "out_t_inv")?;
        }
        Ok(())
    })
}

/// Coefficients of the computational state `|j⟩` over the basis states.
///
/// # Safety
/// `basis` must be a live handle; `out` must hold 4 elements.
#[no_mangle]
pub unsafe extern "C" fn altbell_basis_expand(
    basis: *const AltbellBasis,
    j: usize,
    out: *mut AltbellComplex,
) -> AltbellStatus {
    guard(|| {
        let basis = basis.as_ref().ok_or_else(|| null("basis"))?;
        write_array(out, &expand_computational(j, &basis.0)?, "out")
    })
}

/// Runs the teleportation protocol for payload `psi` (2 amplitudes, must be
/// normalized within 1e-9) with `|V_sender⟩` as the shared state.
///
/// # Safety
/// `basis` must be a live handle, `psi` must hold 2 elements and `out` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn altbell_teleport_run(
    basis: *const AltbellBasis,
    psi: *const AltbellComplex,
    sender: usize,
    shots: u64,
    seed: u64,
    mode: AltbellMode,
    out: *mut *mut AltbellTeleportRun,
) -> AltbellStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let basis = basis.as_ref().ok_or_else(|| null("basis"))?;
        let [g1, g2] = read_array::<2>(psi, "psi")?;
        let psi = QubitState::new(g1, g2)?;
        let mode = match mode {
            AltbellMode::Exact => Mode::Exact,
            AltbellMode::Unitary => Mode::Unitary,
        };
        let run = teleport::run(&psi, sender, &basis.0, shots, seed, mode)?;
        *out = Box::into_raw(Box::new(AltbellTeleportRun(run)));
        Ok(())
    })
}

/// Releases a teleport run handle. Null is ignored.
///
/// # Safety
/// `run` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn altbell_teleport_run_free(run: *mut AltbellTeleportRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Outcome probabilities `p_k` (4 entries).
///
/// # Safety
/// `run` must be a live handle; `out` must hold 4 elements.
#[no_mangle]
pub unsafe extern "C" fn altbell_teleport_run_probabilities(
    run: *const AltbellTeleportRun,
    out: *mut f64,
) -> AltbellStatus {
    guard(|| {
        let run = run.as_ref().ok_or_else(|| null("run"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        for (k, b) in run.0.branches.iter().enumerate() {
            *out.add(k) = b.probability;
        }
        Ok(())
    })
}

/// Sampled outcome counts (4 entries).
///
/// # Safety
/// `run` must be a live handle; `out` must hold 4 elements.
#[no_mangle]
pub unsafe extern "C" fn altbell_teleport_run_counts(
    run: *const AltbellTeleportRun,
    out: *mut u64,
) -> AltbellStatus {
    guard(|| {
        let run = run.as_ref().ok_or_else(|| null("run"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        for (k, n) in run.0.counts.iter().enumerate() {
            *out.add(k) = *n;
        }
        Ok(())
    })
}

/// Probability-weighted fidelity for the run's mode; the sampled fidelity is
/// written to `out_sampled` (NaN when no shots were taken) if it is non-null.
///
/// # Safety
/// `run` must be a live handle; `out_expected` must be valid.
#[no_mangle]
pub unsafe extern "C" fn altbell_teleport_run_fidelity(
    run: *const AltbellTeleportRun,
    out_expected: *mut f64,
    out_sampled: *mut f64,
) -> AltbellStatus {
    guard(|| {
        let run = run.as_ref().ok_or_else(|| null("run"))?;
        *out_ref(out_expected, "out_expected")? = run.0.expected_fidelity;
        if let Some(s) = out_sampled.as_mut() {
            *s = run.0.sampled_fidelity.unwrap_or(f64::NAN);
        }
        Ok(())
    })
}

/// Full run report as pretty-printed JSON.
///
/// # Safety
/// `run` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn altbell_teleport_run_to_json(
    run: *const AltbellTeleportRun,
    out: *mut *mut c_char,
) -> AltbellStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let run = run.as_ref().ok_or_else(|| null("run"))?;
        let text = serde_json::to_string_pretty(&run.0).map_err(Error::from)?;
        *out = to_c_string(text)?;
        Ok(())
    })
}

/// `det` of the coefficient matrix of `c0|00⟩ + c1|01⟩ + c2|10⟩ + c3|11⟩`
/// after normalization.
///
/// # Safety
/// `amps` must hold 4 elements and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn altbell_entanglement_determinant(
    amps: *const AltbellComplex,
    out: *mut AltbellComplex,
) -> AltbellStatus {
    guard(|| {
        let state = TwoQubitState::new(read_array::<4>(amps, "amps")?).normalize()?;
        *out_ref(out, "out")? = entanglement_determinant(&state).into();
        Ok(())
    })
}

/// Unitary polar factor of a nonsingular 2×2 matrix (row-major).
///
/// # Safety
/// `m` and `out` must each hold 4 elements.
#[no_mangle]
pub unsafe extern "C" fn altbell_polar_unitary(
    m: *const AltbellComplex,
    out: *mut AltbellComplex,
) -> AltbellStatus {
    guard(|| {
        let m = Mat2::from_vectorized(read_array::<4>(m, "m")?);
        write_array(out, &m.polar_unitary()?.vectorize(), "out")
    })
}

/// Verifies a catalog circuit. `family` selects the shared hyperbolic/scale
/// teleport circuit (0 hyperbolic, 1 scale). The full report is written as
/// JSON to `out_json` when it is non-null.
///
/// # Safety
/// `id` must be a nul-terminated string, `out_verdict` valid.
#[no_mangle]
pub unsafe extern "C" fn altbell_circuit_verify(
    id: *const c_char,
    theta: f64,
    lambda: f64,
    matrix_index: usize,
    family: u32,
    out_verdict: *mut AltbellVerdict,
    out_json: *mut *mut c_char,
) -> AltbellStatus {
    guard(|| {
        let verdict_out = out_ref(out_verdict, "out_verdict")?;
        if let Some(j) = out_json.as_mut() {
            *j = ptr::null_mut();
        }
        let id = read_str(id, "id")?;
        if matrix_index > 3 {
            return Err(Error::IndexOutOfRange {
                index: matrix_index,
                bound: 4,
            }
            .into());
        }
        let family = match family {
            0 => TeleportFamily::Hyperbolic,
            1 => TeleportFamily::Scale,
            other => return Err(invalid(format!("unknown teleport family {other}"))),
        };
        let params = CircuitParams {
            theta,
            lambda,
            matrix_index,
            family,
        };
        let report = circuit::verify(id, &params)?;
        *verdict_out = match report.verdict {
            Verdict::Exact => AltbellVerdict::Exact,
            Verdict::PhaseEquivalent => AltbellVerdict::PhaseEquivalent,
            Verdict::Mismatch => AltbellVerdict::Mismatch,
        };
        if let Some(j) = out_json.as_mut() {
            let text = serde_json::to_string_pretty(&report).map_err(Error::from)?;
            *j = to_c_string(text)?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_out_pointer_is_reported() {
        let status =
            unsafe { altbell_basis_builtin(c"bell".as_ptr(), f64::NAN, f64::NAN, ptr::null_mut()) };
        assert_eq!(status, AltbellStatus::NullPointer);
        let msg = unsafe { CStr::from_ptr(altbell_last_error_message()) };
        assert!(msg.to_str().unwrap().contains("out"));
    }

    #[test]
    fn panics_become_status() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, AltbellStatus::Panic);
        let msg = unsafe { CStr::from_ptr(altbell_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "panic: boom");
    }

    #[test]
    fn status_mapping() {
        assert_eq!(
            status_of(&Error::UnknownCircuit("x".into())),
            AltbellStatus::UnknownCircuit
        );
        assert_eq!(
            status_of(&Error::MissingParam("theta")),
            AltbellStatus::InvalidArgument
        );
    }
}
