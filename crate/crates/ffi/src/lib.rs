//! C ABI over `monoid-spectra`.
//!
//! Monoids are opaque handles created by [`ms_monoid_from_json`] and released
//! with [`ms_monoid_free`]. Every fallible call returns a status code and
//! writes its result through an out pointer; on error the message is available
//! from [`ms_last_error`] on the same thread. Strings returned by the library
//! are released with [`ms_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use monoid_spectra::ideals::enumerate_primes;
use monoid_spectra::monoid::{Element, Monoid, MonoidKind};
use monoid_spectra::suite::{default_bound, run_suite, SuiteName, SuiteSpec};
use monoid_spectra::Error;

pub const MS_OK: i32 = 0;
/// The suite ran and at least one check failed; the report is still returned.
pub const MS_CHECK_FAILED: i32 = 1;
pub const MS_PARSE_ERROR: i32 = 2;
pub const MS_UNSUPPORTED: i32 = 3;
pub const MS_INVALID_ARGUMENT: i32 = 4;
pub const MS_INTERNAL: i32 = 5;

/// Opaque monoid handle.
pub struct MsMonoid {
    inner: Monoid,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::InvalidField { .. } | Error::Io(_) => MS_PARSE_ERROR,
        Error::Unsupported(_) | Error::CarrierTooLarge { .. } => MS_UNSUPPORTED,
        _ => MS_INVALID_ARGUMENT,
    }
}

/// Runs `f`, recording its error message and turning panics into `MS_INTERNAL`.
fn guard(f: impl FnOnce() -> Result<i32, (i32, String)>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(code)) => code,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            MS_INTERNAL
        }
    }
}

fn lib_err(e: Error) -> (i32, String) {
    (status_of(&e), e.to_string())
}

fn invalid(msg: &str) -> (i32, String) {
    (MS_INVALID_ARGUMENT, msg.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (i32, String)> {
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (MS_PARSE_ERROR, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a>(m: *const MsMonoid) -> Result<&'a Monoid, (i32, String)> {
    m.as_ref().map(|m| &m.inner).ok_or_else(|| invalid("monoid handle is null"))
}

/// Parses a monoid from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer. On
/// success `*out` owns a handle that must be passed to [`ms_monoid_free`].
#[no_mangle]
pub unsafe extern "C" fn ms_monoid_from_json(json: *const c_char, out: *mut *mut MsMonoid) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        *out = ptr::null_mut();
        let text = read_str(json, "json")?;
        let inner = Monoid::from_json(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(MsMonoid { inner }));
        Ok(MS_OK)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `m` must come from [`ms_monoid_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ms_monoid_free(m: *mut MsMonoid) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Membership of an integer in a numerical monoid.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_monoid_contains_int(m: *const MsMonoid, value: i64, out: *mut bool) -> i32 {
    guard(|| {
        let h = handle(m)?;
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        if h.kind() != MonoidKind::Numerical {
            return Err((MS_UNSUPPORTED, format!("{} is not a numerical monoid", h.label())));
        }
        *out = h.contains(&Element::Int(value));
        Ok(MS_OK)
    })
}

/// Membership of an integer vector in an affine monoid.
///
/// # Safety
/// `m` must be a live handle, `coords` must point to `len` values and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_monoid_contains_vector(
    m: *const MsMonoid,
    coords: *const i64,
    len: usize,
    out: *mut bool,
) -> i32 {
    guard(|| {
        let h = handle(m)?;
        if out.is_null() || (coords.is_null() && len > 0) {
            return Err(invalid("null pointer argument"));
        }
        let dim = h.quotient_groupoid().dim();
        if h.kind() != MonoidKind::Affine || dim != len {
            return Err(invalid(&format!("expected a vector of length {dim} for {}", h.label())));
        }
        let v = if len == 0 { &[][..] } else { std::slice::from_raw_parts(coords, len) };
        *out = h.contains(&Element::vector(v));
        Ok(MS_OK)
    })
}

/// Number of prime s-ideals, certified on the window of radius `bound`
/// (`bound < 0` picks the default for the monoid).
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_monoid_prime_count(m: *const MsMonoid, bound: i64, out: *mut usize) -> i32 {
    guard(|| {
        let h = handle(m)?;
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        let b = if bound < 0 { default_bound(h) } else { bound };
        *out = enumerate_primes(h, b).map_err(lib_err)?.len();
        Ok(MS_OK)
    })
}

/// Runs a verification suite on `m` and returns the report as text, or JSON
/// when `json` is true. Returns `MS_OK` when every check passed and
/// `MS_CHECK_FAILED` otherwise; in both cases `*report` must be released with
/// [`ms_string_free`]. `bound < 0` picks the default.
///
/// # Safety
/// `m` must be a live handle, `suite` a NUL-terminated string and `report` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_run_suite(
    m: *const MsMonoid,
    suite: *const c_char,
    bound: i64,
    seed: u64,
    json: bool,
    report: *mut *mut c_char,
) -> i32 {
    guard(|| {
        if report.is_null() {
            return Err(invalid("report is null"));
        }
        *report = ptr::null_mut();
        let h = handle(m)?;
        let name: SuiteName = read_str(suite, "suite")?.parse().map_err(lib_err)?;
        let mut spec = SuiteSpec::new(name, h.clone());
        spec.bound = (bound >= 0).then_some(bound);
        spec.seed = seed;
        let out = run_suite(&spec).map_err(lib_err)?;
        let text = if json { out.report.to_json() } else { out.report.to_text() };
        let c = CString::new(text).map_err(|_| (MS_INTERNAL, "report contains NUL".to_string()))?;
        *report = c.into_raw();
        Ok(if out.report.passed() { MS_OK } else { MS_CHECK_FAILED })
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the most recent error on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ms_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
