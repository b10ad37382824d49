//! C interface to the lamination engine.
//!
//! Every function returns a [`LamStatus`]. Results come back through out
//! parameters; strings are NUL-terminated UTF-8 owned by the caller, who
//! releases them with [`lam_string_free`]. Laminations are opaque
//! [`LamLamination`] handles released with [`lam_lamination_free`]. After a
//! failure, [`lam_last_error`] describes it on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lamination::correspondence::{coroots, mac_data, mac_to_scm, scm_data, scm_to_mac};
use lamination::io::{parse_lam_json, render_svg, write_lam_json, LamDocument, RenderOptions};
use lamination::pullback::{canonical_mac_lamination, canonical_scm_lamination};
use lamination::verify::{run_suite, Suite};
use lamination::{Angle, LamError, Leaf, Polygon};

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LamStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed angle, leaf, polygon, suite name or JSON.
    Parse = 3,
    /// Well-formed input outside the domain of the operation (not MAC, not
    /// SCM, crossing leaves, bad degree, ...).
    Domain = 4,
    /// A verification suite found a violation.
    VerificationFailed = 5,
    /// Internal error; the call was abandoned.
    Panic = 6,
}

/// A lamination document: leaves with depths, polygons, and an optional
/// critical portrait.
pub struct LamLamination {
    doc: LamDocument,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(LamStatus, String);

impl From<LamError> for Fail {
    fn from(e: LamError) -> Self {
        let status = match e {
            LamError::ZeroDenominator
            | LamError::Unreduced(_)
            | LamError::OutOfRange(_)
            | LamError::Parse(_)
            | LamError::InvalidDigit { .. } => LamStatus::Parse,
            _ => LamStatus::Domain,
        };
        Fail(status, e.to_string())
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> LamStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LamStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            LamStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(LamStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(LamStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn parsed<T: std::str::FromStr<Err = LamError>>(p: *const c_char, what: &str) -> Result<T, Fail> {
    Ok(text(p, what)?.parse()?)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(LamStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(LamStatus::Panic, "interior NUL".into()))?;
    put(out, c.into_raw())
}

fn json(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Message for the last failed call on this thread, or null after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lam_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn lam_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `sigma_d(angle)`, e.g. `"1/3"` to `"2/3"` for `degree` 2.
///
/// # Safety
/// `angle` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lam_sigma(degree: u32, angle: *const c_char, out: *mut *mut c_char) -> LamStatus {
    guard(|| {
        if degree < 2 {
            return Err(LamError::InvalidDegree(degree).into());
        }
        let t: Angle = parsed(angle, "angle")?;
        put_string(out, t.sigma(degree).to_string())
    })
}

/// JSON description of the MAC leaf `major` (`"p/q,r/s"`), including its
/// co-roots.
///
/// # Safety
/// `major` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lam_mac_data(degree: u32, major: *const c_char, out: *mut *mut c_char) -> LamStatus {
    guard(|| {
        let m: Leaf = parsed(major, "major")?;
        put_string(out, json(&mac_data(degree, &m)?))
    })
}

/// Co-roots of the MAC leaf `major` as a JSON array of fractions.
///
/// # Safety
/// `major` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lam_coroots(degree: u32, major: *const c_char, out: *mut *mut c_char) -> LamStatus {
    guard(|| {
        let m: Leaf = parsed(major, "major")?;
        let mac = mac_data(degree, &m)?;
        put_string(out, json(&coroots(degree, &mac)?))
    })
}

/// The SCM polygon of a MAC leaf, as text such as `{1/8, 1/4, 3/8, 3/4}`.
///
/// # Safety
/// `major` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lam_mac_to_scm(degree: u32, major: *const c_char, out: *mut *mut c_char) -> LamStatus {
    guard(|| {
        let m: Leaf = parsed(major, "major")?;
        let scm = mac_to_scm(degree, &mac_data(degree, &m)?)?;
        put_string(out, scm.polygon.to_string())
    })
}

/// The MAC leaf of an SCM polygon (`"p/q,r/s,..."`), as text `(a, b)`.
///
/// # Safety
/// `polygon` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lam_scm_to_mac(degree: u32, polygon: *const c_char, out: *mut *mut c_char) -> LamStatus {
    guard(|| {
        let p: Polygon = parsed(polygon, "polygon")?;
        let mac = scm_to_mac(degree, &scm_data(degree, &p)?)?;
        put_string(out, mac.major.to_string())
    })
}

/// The canonical lamination of a MAC leaf, pulled back `depth` times.
///
/// # Safety
/// `major` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lam_mac_lamination(
    degree: u32,
    major: *const c_char,
    depth: usize,
    out: *mut *mut LamLamination,
) -> LamStatus {
    guard(|| {
        let m: Leaf = parsed(major, "major")?;
        let r = canonical_mac_lamination(degree, &m, depth)?;
        put(out, Box::into_raw(Box::new(LamLamination { doc: LamDocument::from_pullback(&r) })))
    })
}

/// The canonical lamination of an SCM polygon, pulled back `depth` times.
///
/// # Safety
/// `polygon` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lam_scm_lamination(
    degree: u32,
    polygon: *const c_char,
    depth: usize,
    out: *mut *mut LamLamination,
) -> LamStatus {
    guard(|| {
        let p: Polygon = parsed(polygon, "polygon")?;
        let r = canonical_scm_lamination(degree, &p, depth)?;
        put(out, Box::into_raw(Box::new(LamLamination { doc: LamDocument::from_pullback(&r) })))
    })
}

/// Parses a lamination JSON document.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lam_lamination_from_json(text_in: *const c_char, out: *mut *mut LamLamination) -> LamStatus {
    guard(|| {
        let doc = parse_lam_json(text(text_in, "json")?)?;
        put(out, Box::into_raw(Box::new(LamLamination { doc })))
    })
}

unsafe fn handle<'a>(lam: *const LamLamination) -> Result<&'a LamLamination, Fail> {
    lam.as_ref()
        .ok_or_else(|| Fail(LamStatus::NullPointer, "lamination handle is null".into()))
}

/// Canonical compact JSON for a lamination.
///
/// # Safety
/// `lam` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lam_lamination_to_json(lam: *const LamLamination, out: *mut *mut c_char) -> LamStatus {
    guard(|| put_string(out, write_lam_json(&handle(lam)?.doc)))
}

/// SVG chord diagram, `width_px` pixels square.
///
/// # Safety
/// `lam` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lam_lamination_svg(
    lam: *const LamLamination,
    width_px: u32,
    out: *mut *mut c_char,
) -> LamStatus {
    guard(|| {
        let opts = RenderOptions {
            width_px,
            ..Default::default()
        };
        put_string(out, render_svg(&handle(lam)?.doc, &opts)?)
    })
}

/// Number of leaves (polygon sides not counted).
///
/// # Safety
/// `lam` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lam_lamination_leaf_count(lam: *const LamLamination, out: *mut usize) -> LamStatus {
    guard(|| put(out, handle(lam)?.doc.leaves.len()))
}

/// Degree of the lamination.
///
/// # Safety
/// `lam` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lam_lamination_degree(lam: *const LamLamination, out: *mut u32) -> LamStatus {
    guard(|| put(out, handle(lam)?.doc.degree))
}

/// Releases a lamination handle. Null is ignored.
///
/// # Safety
/// `lam` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn lam_lamination_free(lam: *mut LamLamination) {
    if !lam.is_null() {
        drop(Box::from_raw(lam));
    }
}

/// Runs a verification suite (`"csl"`, `"coroot"`, `"roundtrip"`,
/// `"invariance"`, `"scm"`, `"kiwi"` or `"all"`) over MAC leaves of period at
/// most `max_period`. The JSON reports are written to `out` (which may be
/// null) whether or not the suite passes; a violation returns
/// `VerificationFailed`.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn lam_check(
    suite: *const c_char,
    degree: u32,
    max_period: u32,
    out: *mut *mut c_char,
) -> LamStatus {
    guard(|| {
        let s: Suite = parsed(suite, "suite")?;
        let reports = run_suite(s, degree, max_period)?;
        if !out.is_null() {
            put_string(out, json(&reports))?;
        }
        match reports.iter().find(|r| !r.ok()) {
            None => Ok(()),
            Some(r) => Err(Fail(LamStatus::VerificationFailed, r.to_string())),
        }
    })
}
