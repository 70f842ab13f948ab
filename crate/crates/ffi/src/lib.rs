//! C ABI over `sedlab`.
//!
//! Handles are opaque and owned by the caller once returned; release them with
//! the matching `*_free`. Every fallible call returns a [`SedStatus`]; on a
//! non-zero status [`sed_last_error_message`] describes the failure on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sedlab::cd_algebra::{parse_element_text, CdElement, Sedenion};
use sedlab::coeff_solver::{default_pairs, reference_pairs, solve_coefficients_for, FitTarget};
use sedlab::holonomy::{run_great_circle, HolonomyTrace, TransportConfig};
use sedlab::invariants::{check_factorization, check_full_factorization, d1, d2_full, d2_geometric, find_annihilator_exact, is_zero_divisor};
use sedlab::mult_operator::{det_exact, left_mult_matrix};
use sedlab::{Rational, Scalar, SedError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SedStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    InvalidArgument = 3,
    NotZeroDivisor = 4,
    SingularSystem = 5,
    Degenerate = 6,
    Panic = 7,
}

/// Exact sedenion.
pub struct SedSedenion(Sedenion<Rational>);

/// Result of one great-circle transport run.
pub struct SedTrace(HolonomyTrace);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SedInvariants {
    pub d1: f64,
    pub d2: f64,
    pub d2_full: f64,
    pub delta: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SedTraceStep {
    pub step: usize,
    pub t: f64,
    pub theta: f64,
    pub phi: f64,
    pub phi_unwrapped: f64,
    pub orth_err: f64,
    pub norm_err: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SedLineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &SedError) -> SedStatus {
    match e {
        SedError::Parse(_) => SedStatus::Parse,
        SedError::NotZeroDivisor | SedError::NotOnLocus => SedStatus::NotZeroDivisor,
        SedError::SingularSystem { .. } => SedStatus::SingularSystem,
        SedError::FiberDegenerate | SedError::FiberAngleUndefined => SedStatus::Degenerate,
        _ => SedStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), SedStatus>) -> SedStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SedStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            SedStatus::Panic
        }
    }
}

fn fail(e: SedError) -> SedStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null() -> SedStatus {
    set_error("null pointer argument");
    SedStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, SedStatus> {
    p.as_ref().ok_or_else(null)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, SedStatus> {
    p.as_mut().ok_or_else(null)
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sed_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sed_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `c0,...,c15`, `4:c0,...`, or a basis expression such as `e1+e10`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sed_sedenion_parse(text: *const c_char, out_handle: *mut *mut SedSedenion) -> SedStatus {
    guard(|| {
        let slot = out(out_handle)?;
        *slot = ptr::null_mut();
        if text.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| fail(SedError::Parse("text is not UTF-8".into())))?;
        let (v, _) = parse_element_text(s, 4).map_err(fail)?;
        if v.level() != 4 {
            return Err(fail(SedError::WrongLevel { expected: 4, actual: v.level() }));
        }
        *slot = Box::into_raw(Box::new(SedSedenion(v)));
        Ok(())
    })
}

/// Builds a sedenion from 16 doubles, each converted exactly.
///
/// # Safety
/// `coeffs` must point to 16 readable doubles; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sed_sedenion_from_doubles(coeffs: *const f64, out_handle: *mut *mut SedSedenion) -> SedStatus {
    guard(|| {
        let slot = out(out_handle)?;
        *slot = ptr::null_mut();
        if coeffs.is_null() {
            return Err(null());
        }
        let c = std::slice::from_raw_parts(coeffs, 16);
        let exact = c
            .iter()
            .map(|&x| Rational::from_float(x).ok_or_else(|| fail(SedError::InvalidParameter(format!("{x} is not finite")))))
            .collect::<Result<Vec<_>, _>>()?;
        *slot = Box::into_raw(Box::new(SedSedenion(CdElement::new(4, exact).map_err(fail)?)));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sed_sedenion_free(handle: *mut SedSedenion) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Writes the 16 coefficients, rounded to double.
///
/// # Safety
/// `handle` must be valid; `out_coeffs` must hold 16 doubles.
#[no_mangle]
pub unsafe extern "C" fn sed_sedenion_coeffs(handle: *const SedSedenion, out_coeffs: *mut f64) -> SedStatus {
    guard(|| {
        let v = &deref(handle)?.0;
        if out_coeffs.is_null() {
            return Err(null());
        }
        let dst = std::slice::from_raw_parts_mut(out_coeffs, 16);
        for (d, c) in dst.iter_mut().zip(v.coeffs()) {
            *d = c.to_f64();
        }
        Ok(())
    })
}

/// Exact text form `4:c0,...`; free with [`sed_string_free`].
///
/// # Safety
/// `handle` must be valid; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sed_sedenion_to_text(handle: *const SedSedenion, out_text: *mut *mut c_char) -> SedStatus {
    guard(|| {
        let slot = out(out_text)?;
        *slot = CString::new(deref(handle)?.0.to_text()).expect("no NULs in numbers").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sed_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `out = a b`.
///
/// # Safety
/// Handles must be valid; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sed_sedenion_multiply(
    a: *const SedSedenion,
    b: *const SedSedenion,
    out_handle: *mut *mut SedSedenion,
) -> SedStatus {
    guard(|| {
        let slot = out(out_handle)?;
        *slot = ptr::null_mut();
        let p = deref(a)?.0.multiply(&deref(b)?.0).map_err(fail)?;
        *slot = Box::into_raw(Box::new(SedSedenion(p)));
        Ok(())
    })
}

/// `D1`, `D2`, the full quartic and `det M(v)`, computed exactly then rounded.
///
/// # Safety
/// `handle` must be valid; `out_inv` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sed_invariants(handle: *const SedSedenion, out_inv: *mut SedInvariants) -> SedStatus {
    guard(|| {
        let v = &deref(handle)?.0;
        let dst = out(out_inv)?;
        *dst = SedInvariants {
            d1: d1(v).map_err(fail)?.to_f64(),
            d2: d2_geometric(v).map_err(fail)?.to_f64(),
            d2_full: d2_full(v).map_err(fail)?.to_f64(),
            delta: det_exact(&left_mult_matrix(v)).to_f64(),
        };
        Ok(())
    })
}

/// Exact zero-divisor test.
///
/// # Safety
/// `handle` must be valid; `out_flag` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sed_is_zero_divisor(handle: *const SedSedenion, out_flag: *mut bool) -> SedStatus {
    guard(|| {
        let v = &deref(handle)?.0;
        *out(out_flag)? = is_zero_divisor(v, 0.0).map_err(fail)?;
        Ok(())
    })
}

/// Exact check of `det M(v) = D1⁴ D2²` (`full_law = false`) or of the law
/// with the full quartic (`full_law = true`).
///
/// # Safety
/// `handle` must be valid; `out_holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sed_check_factorization(
    handle: *const SedSedenion,
    full_law: bool,
    out_holds: *mut bool,
) -> SedStatus {
    guard(|| {
        let v = &deref(handle)?.0;
        let r = if full_law { check_full_factorization(v) } else { check_factorization(v) }.map_err(fail)?;
        *out(out_holds)? = r.holds;
        Ok(())
    })
}

/// Unit annihilator `w` (16 doubles) and `|v w|`.
///
/// # Safety
/// `handle` must be valid; `out_w` must hold 16 doubles; `out_residual` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sed_find_annihilator(
    handle: *const SedSedenion,
    out_w: *mut f64,
    out_residual: *mut f64,
) -> SedStatus {
    guard(|| {
        let v = &deref(handle)?.0;
        if out_w.is_null() {
            return Err(null());
        }
        let res = out(out_residual)?;
        let w = find_annihilator_exact(v).map_err(fail)?.unit_f64();
        *res = v.to_f64().multiply(&w).map_err(fail)?.norm_sq().sqrt();
        std::slice::from_raw_parts_mut(out_w, 16).copy_from_slice(w.coeffs());
        Ok(())
    })
}

/// Solves for the six monomial coefficients, rounded to double.
/// `target`: 0 = determinant, 1 = its square root, 2 = determinant / a⁴.
///
/// # Safety
/// `out_coeffs` must hold 6 doubles.
#[no_mangle]
pub unsafe extern "C" fn sed_solve_coefficients(target: u32, use_reference_pairs: bool, out_coeffs: *mut f64) -> SedStatus {
    guard(|| {
        if out_coeffs.is_null() {
            return Err(null());
        }
        let target = match target {
            0 => FitTarget::Delta,
            1 => FitTarget::SqrtDelta,
            2 => FitTarget::DeltaOverA4,
            t => return Err(fail(SedError::InvalidParameter(format!("unknown target {t}")))),
        };
        let pairs = if use_reference_pairs { reference_pairs() } else { default_pairs() };
        let c = solve_coefficients_for(&pairs, target).map_err(fail)?;
        let dst = std::slice::from_raw_parts_mut(out_coeffs, 6);
        for (d, c) in dst.iter_mut().zip(&c) {
            *d = c.to_f64();
        }
        Ok(())
    })
}

/// Great-circle transport with the seeded initial frame.
///
/// # Safety
/// `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sed_holonomy_run(num_steps: usize, seed: u64, out_handle: *mut *mut SedTrace) -> SedStatus {
    guard(|| {
        let slot = out(out_handle)?;
        *slot = ptr::null_mut();
        let tr = run_great_circle(&TransportConfig::new(num_steps, seed)).map_err(fail)?;
        *slot = Box::into_raw(Box::new(SedTrace(tr)));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sed_trace_free(handle: *mut SedTrace) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of records (`num_steps + 1`); 0 for a null handle.
///
/// # Safety
/// `handle` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn sed_trace_len(handle: *const SedTrace) -> usize {
    handle.as_ref().map_or(0, |t| t.0.steps.len())
}

/// # Safety
/// `handle` must be valid; `out_step` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sed_trace_step(handle: *const SedTrace, index: usize, out_step: *mut SedTraceStep) -> SedStatus {
    guard(|| {
        let t = &deref(handle)?.0;
        let dst = out(out_step)?;
        let s = t
            .steps
            .get(index)
            .ok_or_else(|| fail(SedError::InvalidParameter(format!("index {index} out of range"))))?;
        *dst = SedTraceStep {
            step: s.step,
            t: s.t,
            theta: s.theta,
            phi: s.phi,
            phi_unwrapped: s.phi_unwrapped,
            orth_err: s.orth_err,
            norm_err: s.norm_err,
        };
        Ok(())
    })
}

/// # Safety
/// `handle` must be valid; `out_fit` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sed_trace_fit(handle: *const SedTrace, out_fit: *mut SedLineFit) -> SedStatus {
    guard(|| {
        let f = deref(handle)?.0.fit;
        *out(out_fit)? = SedLineFit { slope: f.slope, intercept: f.intercept, rms: f.rms };
        Ok(())
    })
}
