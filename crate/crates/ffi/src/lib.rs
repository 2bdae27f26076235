//! C ABI over the `dlcodes` library.
//!
//! Objects are opaque handles created by `dlc_*_new`/`dlc_*_build*`/`dlc_*_read*`
//! and released with the matching `dlc_*_free`. Every fallible call returns a
//! [`DlcStatus`]; the message for the last failure on the calling thread is
//! available from [`dlc_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dlcodes::bundle_codes::{
    build_code_2a4_proxy, build_code_a2, CodeError, CodeSpec, RankTwoBundleSpec,
};
use dlcodes::code::{FormatError, LinearCode};
use dlcodes::mindist::{self, MinDistError};
use dlcodes::rr_spaces::LineBundleA2;
use dlcodes::params::{corollary_2a4_params, corollary_a2_params, ParamError, ParamReport};
use dlcodes::{Fe, Field};

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DlcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    HypothesisViolation = 5,
    RankDeficient = 6,
    BudgetExceeded = 7,
    Unsupported = 8,
    Panic = 9,
}

/// A finite field GF(p^m).
pub struct DlcField(Field);

/// A linear code with its generator matrix and column labels.
pub struct DlcCode(LinearCode);

/// Parameters from the closed-form corollaries.
#[repr(C)]
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct DlcParams {
    pub n: i64,
    pub k: i64,
    pub d_lower: i64,
    /// 1 when every hypothesis of the corollary holds.
    pub hypotheses_hold: u8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: DlcStatus, msg: impl std::fmt::Display) -> DlcStatus {
    set_error(&msg.to_string());
    status
}

/// Runs `f`, converting panics into [`DlcStatus::Panic`].
fn guard(f: impl FnOnce() -> DlcStatus) -> DlcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(DlcStatus::Panic, "internal panic"),
    }
}

fn code_status(e: &CodeError) -> DlcStatus {
    match e {
        CodeError::HypothesisViolation(_) => DlcStatus::HypothesisViolation,
        CodeError::RankDeficient { .. } => DlcStatus::RankDeficient,
        CodeError::UnsupportedTwist | CodeError::UnsupportedFamily(_) => DlcStatus::Unsupported,
        _ => DlcStatus::InvalidArgument,
    }
}

fn param_status(e: &ParamError) -> DlcStatus {
    match e {
        ParamError::HypothesisViolation(_) => DlcStatus::HypothesisViolation,
        _ => DlcStatus::InvalidArgument,
    }
}

unsafe fn cstr<'a>(s: *const c_char) -> Result<&'a str, DlcStatus> {
    if s.is_null() {
        return Err(fail(DlcStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(DlcStatus::InvalidArgument, "string is not UTF-8"))
}

unsafe fn slice<'a>(p: *const u32, len: usize) -> Result<&'a [u32], DlcStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(DlcStatus::NullPointer, "null array"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> DlcStatus {
    if out.is_null() {
        return fail(DlcStatus::NullPointer, "null output pointer");
    }
    *out = v;
    DlcStatus::Ok
}

/// Message for the last failed call on this thread; empty if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dlc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dlc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// GF(p^m) with the canonical modulus.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn dlc_field_new(p: u32, m: u32, out: *mut *mut DlcField) -> DlcStatus {
    guard(|| match Field::canonical(p, m) {
        Ok(f) => write_out(out, Box::into_raw(Box::new(DlcField(f)))),
        Err(e) => fail(DlcStatus::InvalidArgument, e),
    })
}

/// Field from a descriptor such as `2^2/111`.
///
/// # Safety
/// `descriptor` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlc_field_from_descriptor(descriptor: *const c_char, out: *mut *mut DlcField) -> DlcStatus {
    guard(|| {
        let s = match cstr(descriptor) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match Field::from_descriptor(s) {
            Ok(f) => write_out(out, Box::into_raw(Box::new(DlcField(f)))),
            Err(e) => fail(DlcStatus::Parse, e),
        }
    })
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dlc_field_order(field: *const DlcField) -> u32 {
    field.as_ref().map_or(0, |f| f.0.q())
}

/// Binary operation on element codes: 0 add, 1 subtract, 2 multiply, 3 divide.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlc_field_op(field: *const DlcField, op: u32, a: u32, b: u32, out: *mut u32) -> DlcStatus {
    guard(|| {
        let Some(f) = field.as_ref() else {
            return fail(DlcStatus::NullPointer, "null field");
        };
        let f = &f.0;
        let (a, b) = match (f.element(a), f.element(b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return fail(DlcStatus::InvalidArgument, e),
        };
        let r: Fe = match op {
            0 => f.add(a, b),
            1 => f.sub(a, b),
            2 => f.mul(a, b),
            3 => match f.div(a, b) {
                Ok(x) => x,
                Err(e) => return fail(DlcStatus::InvalidArgument, e),
            },
            _ => return fail(DlcStatus::InvalidArgument, format!("unknown operation {op}")),
        };
        write_out(out, r.0)
    })
}

/// # Safety
/// `field` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dlc_field_free(field: *mut DlcField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

fn params_out(r: &ParamReport) -> DlcParams {
    DlcParams {
        n: r.n_value() as i64,
        k: r.k.value.unwrap_or(-1) as i64,
        d_lower: r.d_value() as i64,
        hypotheses_hold: r.hypotheses_hold() as u8,
    }
}

/// A2 parameters for `V_i = O(n_i H - sum_j m_{i,j} B_j)`; the arrays give the
/// multiplicities at the first points in canonical order.
///
/// # Safety
/// `m1`/`m2` must point to `len1`/`len2` readable values (or be null with
/// length 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlc_params_a2(
    q: u64,
    b: u32,
    n1: u32,
    n2: u32,
    m1: *const u32,
    len1: usize,
    m2: *const u32,
    len2: usize,
    out: *mut DlcParams,
) -> DlcStatus {
    guard(|| {
        let (m1, m2) = match (slice(m1, len1), slice(m2, len2)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match corollary_a2_params(q, b, [n1, n2], [m1, m2]) {
            Ok(r) => write_out(out, params_out(&r)),
            Err(e) => fail(param_status(&e), e),
        }
    })
}

/// 2A4 parameters for `V_i` pulled back from `O(t_i)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlc_params_2a4(q: u64, b: u32, t1: u32, t2: u32, out: *mut DlcParams) -> DlcStatus {
    guard(|| match corollary_2a4_params(q, b, t1, t2) {
        Ok(r) => write_out(out, params_out(&r)),
        Err(e) => fail(param_status(&e), e),
    })
}

/// Builds the A2 code over GF(q) (q prime), enforcing the hypotheses.
///
/// # Safety
/// As for [`dlc_params_a2`], with `out` writable for a handle.
#[no_mangle]
pub unsafe extern "C" fn dlc_code_build_a2(
    q: u64,
    b: u32,
    n1: u32,
    n2: u32,
    m1: *const u32,
    len1: usize,
    m2: *const u32,
    len2: usize,
    out: *mut *mut DlcCode,
) -> DlcStatus {
    guard(|| {
        let (m1, m2) = match (slice(m1, len1), slice(m2, len2)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let built = (|| -> Result<LinearCode, DlcStatus> {
            let bad = |e: &dyn std::fmt::Display| fail(DlcStatus::InvalidArgument, e);
            let field = Field::of_order(q).map_err(|e| bad(&e))?;
            let v1 = LineBundleA2::with_leading(q, n1, m1).map_err(|e| bad(&e))?;
            let v2 = LineBundleA2::with_leading(q, n2, m2).map_err(|e| bad(&e))?;
            let spec = CodeSpec::new(RankTwoBundleSpec::a2(q, v1, v2).map_err(|e| bad(&e))?, b);
            build_code_a2(&spec, &field).map_err(|e| fail(code_status(&e), e))
        })();
        match built {
            Ok(c) => write_out(out, Box::into_raw(Box::new(DlcCode(c)))),
            Err(s) => s,
        }
    })
}

/// Builds the 2A4 proxy code over GF(q^2), evaluated on `Z` rather than the surface.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlc_code_build_2a4_proxy(q: u64, b: u32, t1: u32, t2: u32, out: *mut *mut DlcCode) -> DlcStatus {
    guard(|| {
        let built = (|| -> Result<LinearCode, DlcStatus> {
            let field = Field::of_order(q * q).map_err(|e| fail(DlcStatus::InvalidArgument, e))?;
            let bundle = RankTwoBundleSpec::twisted_a4(q, t1, t2).map_err(|e| fail(code_status(&e), e))?;
            build_code_2a4_proxy(&CodeSpec::new(bundle, b), &field)
                .map(|p| p.code)
                .map_err(|e| fail(code_status(&e), e))
        })();
        match built {
            Ok(c) => write_out(out, Box::into_raw(Box::new(DlcCode(c)))),
            Err(s) => s,
        }
    })
}

/// Reads a matrix file (and, if `labels_path` is non-null, its label sidecar).
///
/// # Safety
/// Paths must be NUL-terminated strings (`labels_path` may be null); `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dlc_code_read(path: *const c_char, labels_path: *const c_char, out: *mut *mut DlcCode) -> DlcStatus {
    guard(|| {
        let path = match cstr(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(DlcStatus::Io, format!("{path}: {e}")),
        };
        let parse_err = |e: FormatError| match e {
            FormatError::DependentRows { .. } => fail(DlcStatus::RankDeficient, e),
            _ => fail(DlcStatus::Parse, e),
        };
        let mut code = match LinearCode::parse_matrix(&text) {
            Ok(c) => c,
            Err(e) => return parse_err(e),
        };
        if !labels_path.is_null() {
            let lp = match cstr(labels_path) {
                Ok(p) => p,
                Err(s) => return s,
            };
            let text = match std::fs::read_to_string(lp) {
                Ok(t) => t,
                Err(e) => return fail(DlcStatus::Io, format!("{lp}: {e}")),
            };
            code = match code.with_labels_text(&text) {
                Ok(c) => c,
                Err(e) => return parse_err(e),
            };
        }
        write_out(out, Box::into_raw(Box::new(DlcCode(code))))
    })
}

/// Writes the matrix file and, if `labels_path` is non-null, the label sidecar.
///
/// # Safety
/// `code` must be a live handle; paths as in [`dlc_code_read`].
#[no_mangle]
pub unsafe extern "C" fn dlc_code_write(code: *const DlcCode, path: *const c_char, labels_path: *const c_char) -> DlcStatus {
    guard(|| {
        let Some(code) = code.as_ref() else {
            return fail(DlcStatus::NullPointer, "null code");
        };
        let path = match cstr(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        if let Err(e) = std::fs::write(path, code.0.matrix_to_text()) {
            return fail(DlcStatus::Io, format!("{path}: {e}"));
        }
        if !labels_path.is_null() {
            let lp = match cstr(labels_path) {
                Ok(p) => p,
                Err(s) => return s,
            };
            if let Err(e) = std::fs::write(lp, code.0.labels_to_text()) {
                return fail(DlcStatus::Io, format!("{lp}: {e}"));
            }
        }
        DlcStatus::Ok
    })
}

/// Code length, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dlc_code_length(code: *const DlcCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.n())
}

/// Code dimension, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dlc_code_dimension(code: *const DlcCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.k())
}

/// Generator entry `(row, col)` as an element code.
///
/// # Safety
/// `code` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dlc_code_entry(code: *const DlcCode, row: usize, col: usize, out: *mut u32) -> DlcStatus {
    guard(|| {
        let Some(code) = code.as_ref() else {
            return fail(DlcStatus::NullPointer, "null code");
        };
        let g = code.0.generator();
        if row >= g.rows() || col >= g.cols() {
            return fail(DlcStatus::InvalidArgument, format!("entry ({row}, {col}) outside {}x{}", g.rows(), g.cols()));
        }
        write_out(out, g.get(row, col).0)
    })
}

/// Exact minimum distance; fails with `BudgetExceeded` if more than `budget`
/// codewords would be enumerated (0 selects the default budget).
///
/// # Safety
/// `code` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dlc_code_min_distance(code: *const DlcCode, budget: u64, out: *mut usize) -> DlcStatus {
    guard(|| {
        let Some(code) = code.as_ref() else {
            return fail(DlcStatus::NullPointer, "null code");
        };
        let budget = if budget == 0 { mindist::budget_from_env() } else { budget };
        match mindist::exact_min_distance(&code.0, budget, false) {
            Ok(r) => write_out(out, r.min_weight),
            Err(e @ MinDistError::BudgetExceeded { .. }) => fail(DlcStatus::BudgetExceeded, e),
            Err(e) => fail(DlcStatus::InvalidArgument, e),
        }
    })
}

/// Minimum weight over `trials` seeded random codewords (an upper bound on d).
///
/// # Safety
/// `code` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dlc_code_sampled_min_weight(code: *const DlcCode, trials: u64, seed: u64, out: *mut usize) -> DlcStatus {
    guard(|| {
        let Some(code) = code.as_ref() else {
            return fail(DlcStatus::NullPointer, "null code");
        };
        match mindist::sampled_min_weight(&code.0, trials, seed) {
            Ok(r) => write_out(out, r.min_weight),
            Err(e) => fail(DlcStatus::InvalidArgument, e),
        }
    })
}

/// # Safety
/// `code` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dlc_code_free(code: *mut DlcCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

