//! C ABI for `coxvar`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` style
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`CoxvarStatus`]; on failure a description is available from
//! [`coxvar_last_error_message`] on the same thread until the next call.
//! Strings returned to the caller are released with [`coxvar_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use coxvar::oracle::{auto_box, count_components, GridSpec};
use coxvar::topology::predict_with_tol;
use coxvar::{ComponentReport, Error, GeometricCharacteristic, Kind, QuarticCoefficients};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoxvarStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    ResourceLimit = 4,
    Io = 5,
    Overflow = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Predicted kind of the variety.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoxvarKind {
    MaxComponents = 0,
    AllCompact = 1,
    NestedPair = 2,
    SingleSphere = 3,
    Empty = 4,
    Undecided = 5,
}

impl From<Kind> for CoxvarKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::MaxComponents => CoxvarKind::MaxComponents,
            Kind::AllCompact => CoxvarKind::AllCompact,
            Kind::NestedPair => CoxvarKind::NestedPair,
            Kind::SingleSphere => CoxvarKind::SingleSphere,
            Kind::Empty => CoxvarKind::Empty,
            Kind::Undecided => CoxvarKind::Undecided,
        }
    }
}

/// Coefficients `(A, B, C, D)`, dimension and exponent of a quartic family
/// member.
pub struct CoxvarQuartic(QuarticCoefficients);

/// Output of the predictor.
pub struct CoxvarPrediction(GeometricCharacteristic);

/// Output of the grid oracle.
pub struct CoxvarReport(ComponentReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> CoxvarStatus {
    match e {
        Error::ResourceLimit { .. } => CoxvarStatus::ResourceLimit,
        Error::Unsupported(_) => CoxvarStatus::Unsupported,
        Error::Overflow(_) => CoxvarStatus::Overflow,
        Error::Io(_) => CoxvarStatus::Io,
        _ => CoxvarStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard<F>(f: F) -> CoxvarStatus
where
    F: FnOnce() -> Result<(), (CoxvarStatus, String)>,
{
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CoxvarStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            CoxvarStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (CoxvarStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CoxvarStatus, String) {
    (CoxvarStatus::NullPointer, format!("{what} is null"))
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next `coxvar_*` call on the same thread.
#[no_mangle]
pub extern "C" fn coxvar_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn coxvar_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a quartic handle for `A σ2 + B σ1² + C σ1 + D` in `n` variables
/// with substitution exponent `m` (degree `2^(m+1)`).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn coxvar_quartic_new(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    n: usize,
    m: u32,
    out: *mut *mut CoxvarQuartic,
) -> CoxvarStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let q = QuarticCoefficients::with_exponent(a, b, c, d, n, m).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CoxvarQuartic(q)));
        Ok(())
    })
}

/// # Safety
/// `q` must be NULL or a handle from [`coxvar_quartic_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coxvar_quartic_free(q: *mut CoxvarQuartic) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Evaluates the polynomial at `x[0..len]`.
///
/// # Safety
/// `q` must be a live handle, `x` must point to `len` readable doubles and
/// `out` to a writable double.
#[no_mangle]
pub unsafe extern "C" fn coxvar_quartic_eval(
    q: *const CoxvarQuartic,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> CoxvarStatus {
    guard(|| {
        let q = q.as_ref().ok_or_else(|| null("quartic"))?;
        if x.is_null() || out.is_null() {
            return Err(null("x or out"));
        }
        let xs = std::slice::from_raw_parts(x, len);
        *out = q.0.eval(xs).map_err(lib_err)?;
        Ok(())
    })
}

/// Runs the predictor with relative tolerance `tol` (`<= 0` selects the
/// default).
///
/// # Safety
/// `q` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn coxvar_predict(
    q: *const CoxvarQuartic,
    tol: f64,
    out: *mut *mut CoxvarPrediction,
) -> CoxvarStatus {
    guard(|| {
        let q = q.as_ref().ok_or_else(|| null("quartic"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let tol = if tol > 0.0 { tol } else { coxvar::quadric::DEFAULT_TOL };
        *out = Box::into_raw(Box::new(CoxvarPrediction(predict_with_tol(&q.0, tol))));
        Ok(())
    })
}

/// # Safety
/// `p` must be NULL or a live prediction handle.
#[no_mangle]
pub unsafe extern "C" fn coxvar_prediction_free(p: *mut CoxvarPrediction) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live prediction handle and `kind` writable.
#[no_mangle]
pub unsafe extern "C" fn coxvar_prediction_kind(p: *const CoxvarPrediction, kind: *mut CoxvarKind) -> CoxvarStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("prediction"))?;
        if kind.is_null() {
            return Err(null("kind"));
        }
        *kind = p.0.kind.into();
        Ok(())
    })
}

/// Component counts; any output pointer may be NULL to skip it.
///
/// # Safety
/// `p` must be a live prediction handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn coxvar_prediction_counts(
    p: *const CoxvarPrediction,
    total: *mut u64,
    compact: *mut u64,
    unbounded: *mut u64,
    nested: *mut bool,
) -> CoxvarStatus {
    guard(|| {
        let p = &p.as_ref().ok_or_else(|| null("prediction"))?.0;
        if let Some(t) = total.as_mut() {
            *t = p.total_components;
        }
        if let Some(c) = compact.as_mut() {
            *c = p.compact_components;
        }
        if let Some(u) = unbounded.as_mut() {
            *u = p.unbounded_components;
        }
        if let Some(nst) = nested.as_mut() {
            *nst = p.nested;
        }
        Ok(())
    })
}

/// Copies the Betti vector into `buf[0..cap]` and stores its length in
/// `len` (0 when the kind has none). Returns `BUFFER_TOO_SMALL` with `len`
/// set when `cap` is insufficient.
///
/// # Safety
/// `p` must be a live prediction handle, `len` writable and `buf` valid for
/// `cap` writes (it may be NULL when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn coxvar_prediction_betti(
    p: *const CoxvarPrediction,
    buf: *mut u64,
    cap: usize,
    len: *mut usize,
) -> CoxvarStatus {
    guard(|| {
        let p = &p.as_ref().ok_or_else(|| null("prediction"))?.0;
        if len.is_null() {
            return Err(null("len"));
        }
        let betti = p.betti.as_deref().unwrap_or(&[]);
        *len = betti.len();
        if betti.len() > cap {
            return Err((
                CoxvarStatus::BufferTooSmall,
                format!("betti vector needs {} entries, buffer holds {cap}", betti.len()),
            ));
        }
        if !betti.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            ptr::copy_nonoverlapping(betti.as_ptr(), buf, betti.len());
        }
        Ok(())
    })
}

/// Prediction as a JSON string, released with [`coxvar_string_free`].
///
/// # Safety
/// `p` must be a live prediction handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn coxvar_prediction_to_json(p: *const CoxvarPrediction, out: *mut *mut c_char) -> CoxvarStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("prediction"))?;
        write_json(&p.0, out)
    })
}

unsafe fn write_json<T: serde::Serialize>(v: &T, out: *mut *mut c_char) -> Result<(), (CoxvarStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = serde_json::to_string(v).map_err(|e| (CoxvarStatus::Io, e.to_string()))?;
    *out = CString::new(s)
        .map_err(|e| (CoxvarStatus::Io, e.to_string()))?
        .into_raw();
    Ok(())
}

/// Counts components on a grid. `half_width <= 0` or `resolution == 0`
/// selects the automatic box or default resolution.
///
/// # Safety
/// `q` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn coxvar_count_components(
    q: *const CoxvarQuartic,
    half_width: f64,
    resolution: usize,
    out: *mut *mut CoxvarReport,
) -> CoxvarStatus {
    guard(|| {
        let q = &q.as_ref().ok_or_else(|| null("quartic"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let auto = auto_box(q).map_err(lib_err)?;
        let grid = GridSpec::new(
            q.n,
            if half_width > 0.0 { half_width } else { auto.half_width },
            if resolution > 0 { resolution } else { auto.resolution },
        )
        .map_err(lib_err)?;
        let rep = count_components(q, &grid).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CoxvarReport(rep)));
        Ok(())
    })
}

/// # Safety
/// `r` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn coxvar_report_free(r: *mut CoxvarReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Totals of a report; any output pointer may be NULL.
///
/// # Safety
/// `r` must be a live report handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn coxvar_report_counts(
    r: *const CoxvarReport,
    total: *mut u64,
    compact: *mut u64,
    nesting_pairs: *mut usize,
) -> CoxvarStatus {
    guard(|| {
        let r = &r.as_ref().ok_or_else(|| null("report"))?.0;
        if let Some(t) = total.as_mut() {
            *t = r.total;
        }
        if let Some(c) = compact.as_mut() {
            *c = r.compact;
        }
        if let Some(p) = nesting_pairs.as_mut() {
            *p = r.nesting_pairs.len();
        }
        Ok(())
    })
}

/// Report as a JSON string, released with [`coxvar_string_free`].
///
/// # Safety
/// `r` must be a live report handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn coxvar_report_to_json(r: *const CoxvarReport, out: *mut *mut c_char) -> CoxvarStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("report"))?;
        write_json(&r.0, out)
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coxvar_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Name of a kind as a static string (`"max_components"`, ...).
#[no_mangle]
pub extern "C" fn coxvar_kind_name(kind: CoxvarKind) -> *const c_char {
    let s: &'static CStr = match kind {
        CoxvarKind::MaxComponents => c"max_components",
        CoxvarKind::AllCompact => c"all_compact",
        CoxvarKind::NestedPair => c"nested_pair",
        CoxvarKind::SingleSphere => c"single_sphere",
        CoxvarKind::Empty => c"empty",
        CoxvarKind::Undecided => c"undecided",
    };
    s.as_ptr()
}
