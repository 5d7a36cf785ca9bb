//! C ABI for `dgbv-core`.
//!
//! Every fallible function returns a [`DgbvStatus`]. On anything other than
//! `DGBV_STATUS_OK` or `DGBV_STATUS_CHECK_FAILED`, [`dgbv_last_error`] describes what went
//! wrong on the calling thread. Strings handed out by the library are owned by
//! the caller and must be released with [`dgbv_string_free`]; handles are
//! released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dgbv_core::algebra::{check_axioms, load_algebra, CHAlgebra};
use dgbv_core::contraction::evaluate_graph;
use dgbv_core::graded::{fmt_rational, Poly};
use dgbv_core::graph::load_graph;
use dgbv_core::potentials::{kdv_coefficient, PotentialTable};
use dgbv_core::verifier::{Relation, Verifier};
use dgbv_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgbvStatus {
    /// Success.
    Ok = 0,
    /// The call succeeded but the checked property does not hold (axioms or an equation).
    CheckFailed = 1,
    /// A required pointer argument was null.
    NullArgument = 2,
    /// A string argument was not valid UTF-8, or an enum argument was out of range.
    InvalidArgument = 3,
    /// An algebra or graph file could not be parsed.
    ParseError = 4,
    /// The input parsed but violates a structural requirement.
    MalformedInput = 5,
    /// The input is valid but outside what the engine supports.
    Unsupported = 6,
    /// The requested degree needs more leaves than the potential table holds.
    BudgetExceeded = 7,
    /// A file could not be read.
    IoError = 8,
    /// An internal panic was caught at the boundary.
    InternalError = 9,
}

/// Output encoding of polynomials.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgbvFormat {
    /// Canonical text form, e.g. `1/6*T0_1^3`.
    Text = 0,
    /// JSON form `{"terms":[{"vars":[[n,i],...],"coeff":"p/q"}]}`.
    Json = 1,
}

/// The equations the verifier can check.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgbvRelation {
    Wdvv = 0,
    Const = 1,
    String = 2,
    Dilaton = 3,
    Trr0 = 4,
    Trr1 = 5,
    Trr2 = 6,
}

/// An immutable cH-algebra.
pub struct DgbvAlgebra(CHAlgebra);

/// A cache of truncated potentials over one algebra.
pub struct DgbvTable(PotentialTable);

/// An equation checker with its own potential cache.
pub struct DgbvVerifier(Verifier);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

struct Failure(DgbvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) | Error::Json(_) => DgbvStatus::ParseError,
            Error::Unsupported(_) => DgbvStatus::Unsupported,
            Error::Budget(_) => DgbvStatus::BudgetExceeded,
            Error::Io(_) => DgbvStatus::IoError,
            _ => DgbvStatus::MalformedInput,
        };
        Failure(status, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(DgbvStatus::InternalError, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(DgbvStatus::NullArgument, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status plus last-error message.
fn guard(body: impl FnOnce() -> Result<DgbvStatus, Failure>) -> DgbvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => {
            set_last_error("");
            status
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal error: {message}"));
            DgbvStatus::InternalError
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(DgbvStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let s = CString::new(s).map_err(|_| Failure(DgbvStatus::InternalError, "output contains NUL".into()))?;
    *out = s.into_raw();
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn render(p: &Poly, format: DgbvFormat) -> Result<String, Failure> {
    Ok(match format {
        DgbvFormat::Text => p.to_string(),
        DgbvFormat::Json => serde_json::to_string(p)?,
    })
}

fn format_arg(format: u32) -> Result<DgbvFormat, Failure> {
    match format {
        0 => Ok(DgbvFormat::Text),
        1 => Ok(DgbvFormat::Json),
        _ => Err(Failure(DgbvStatus::InvalidArgument, format!("unknown format {format}"))),
    }
}

fn relation_arg(relation: u32) -> Result<Relation, Failure> {
    Relation::ALL
        .get(relation as usize)
        .copied()
        .ok_or_else(|| Failure(DgbvStatus::InvalidArgument, format!("unknown relation {relation}")))
}

/// The message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn dgbv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dgbv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn dgbv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Opens a shipped algebra (`trivial`, `frobenius2`, `p2`, `hodge10`) or an algebra file.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dgbv_algebra_open(source: *const c_char, out: *mut *mut DgbvAlgebra) -> DgbvStatus {
    guard(|| {
        let alg = CHAlgebra::open(text(source, "source")?)?;
        put_handle(out, DgbvAlgebra(alg))?;
        Ok(DgbvStatus::Ok)
    })
}

/// Parses an algebra from the JSON algebra-file text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dgbv_algebra_from_json(json: *const c_char, out: *mut *mut DgbvAlgebra) -> DgbvStatus {
    guard(|| {
        let alg = load_algebra(text(json, "json")?)?;
        put_handle(out, DgbvAlgebra(alg))?;
        Ok(DgbvStatus::Ok)
    })
}

/// Releases an algebra. Null is ignored.
///
/// # Safety
/// `alg` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn dgbv_algebra_free(alg: *mut DgbvAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Dimension of the algebra, or 0 for a null handle.
///
/// # Safety
/// `alg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgbv_algebra_dim(alg: *const DgbvAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.0.dim())
}

/// Checks the algebra axioms. Writes the JSON report to `report` when it is
/// non-null; returns `DGBV_STATUS_OK` iff every axiom holds, else `DGBV_STATUS_CHECK_FAILED`.
///
/// # Safety
/// `alg` must be a live handle; `report` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dgbv_check_axioms(alg: *const DgbvAlgebra, report: *mut *mut c_char) -> DgbvStatus {
    guard(|| {
        let alg = alg.as_ref().ok_or_else(|| null("algebra"))?;
        let r = check_axioms(&alg.0);
        if !report.is_null() {
            put_string(report, serde_json::to_string(&r)?)?;
        }
        Ok(if r.all_pass() { DgbvStatus::Ok } else { DgbvStatus::CheckFailed })
    })
}

/// Evaluates one marked graph (JSON graph-file text) over the algebra.
///
/// # Safety
/// `alg` must be a live handle, `graph_json` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dgbv_evaluate_graph(
    alg: *const DgbvAlgebra,
    graph_json: *const c_char,
    format: u32, // a DgbvFormat value
    out: *mut *mut c_char,
) -> DgbvStatus {
    guard(|| {
        let alg = alg.as_ref().ok_or_else(|| null("algebra"))?;
        let g = load_graph(text(graph_json, "graph_json")?)?;
        let value = evaluate_graph(&alg.0, &g)?;
        put_string(out, render(&value, format_arg(format)?)?)?;
        Ok(DgbvStatus::Ok)
    })
}

/// Creates a potential table holding graphs with up to `max_leaves` empty leaves.
///
/// # Safety
/// `alg` must be a live handle; `out` writable. The table does not borrow `alg`.
#[no_mangle]
pub unsafe extern "C" fn dgbv_table_new(alg: *const DgbvAlgebra, max_leaves: usize, out: *mut *mut DgbvTable) -> DgbvStatus {
    guard(|| {
        let alg = alg.as_ref().ok_or_else(|| null("algebra"))?;
        let table = PotentialTable::new(&alg.0)?.with_max_leaves(max_leaves);
        put_handle(out, DgbvTable(table))?;
        Ok(DgbvStatus::Ok)
    })
}

/// Releases a table. Null is ignored.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgbv_table_free(table: *mut DgbvTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// The potential F_{genus,n} truncated to `max_leaves` empty leaves
/// (n = 0 gives the small-phase-space potential).
///
/// # Safety
/// `table` must be a live handle not used concurrently; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dgbv_table_potential(
    table: *mut DgbvTable,
    genus: usize,
    n: u32,
    max_leaves: usize,
    format: u32, // a DgbvFormat value
    out: *mut *mut c_char,
) -> DgbvStatus {
    guard(|| {
        let table = table.as_mut().ok_or_else(|| null("table"))?;
        let value = table.0.potential(genus, n, max_leaves)?;
        put_string(out, render(&value, format_arg(format)?)?)?;
        Ok(DgbvStatus::Ok)
    })
}

/// Creates an equation checker over the algebra.
///
/// # Safety
/// `alg` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dgbv_verifier_new(alg: *const DgbvAlgebra, out: *mut *mut DgbvVerifier) -> DgbvStatus {
    guard(|| {
        let alg = alg.as_ref().ok_or_else(|| null("algebra"))?;
        put_handle(out, DgbvVerifier(Verifier::new(&alg.0)?))?;
        Ok(DgbvStatus::Ok)
    })
}

/// Releases a verifier. Null is ignored.
///
/// # Safety
/// `verifier` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgbv_verifier_free(verifier: *mut DgbvVerifier) {
    if !verifier.is_null() {
        drop(Box::from_raw(verifier));
    }
}

/// Checks one equation (a `DgbvRelation` value) up to total degree `degree`.
/// Writes the JSON residual report to `report` when non-null; returns
/// `DGBV_STATUS_OK` if the equation holds and `DGBV_STATUS_CHECK_FAILED` otherwise.
///
/// # Safety
/// `verifier` must be a live handle not used concurrently; `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn dgbv_verify(
    verifier: *mut DgbvVerifier,
    relation: u32, // a DgbvRelation value
    genus: usize,
    n: u32,
    degree: u32,
    report: *mut *mut c_char,
) -> DgbvStatus {
    guard(|| {
        let verifier = verifier.as_mut().ok_or_else(|| null("verifier"))?;
        let residual = verifier.0.check(relation_arg(relation)?, genus, n, degree)?;
        if !report.is_null() {
            put_string(report, residual.to_json().to_string())?;
        }
        Ok(if residual.pass { DgbvStatus::Ok } else { DgbvStatus::CheckFailed })
    })
}

/// The KdV one-point coefficient of T_{0}^k T_{m} in F_genus, as "p/q".
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dgbv_kdv_coefficient(genus: u32, m: u32, k: u32, out: *mut *mut c_char) -> DgbvStatus {
    guard(|| {
        put_string(out, fmt_rational(&kdv_coefficient(genus, m, k)))?;
        Ok(DgbvStatus::Ok)
    })
}
