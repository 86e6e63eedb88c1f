//! C ABI over `kkcoeff`.
//!
//! Catalogs and theories cross the boundary as opaque handles; reports cross
//! as JSON strings owned by the caller and released with [`kk_string_free`].
//! Every function returns a [`KkStatus`]; on anything but `KK_STATUS_OK`,
//! `KK_STATUS_CHECK_FAILED` or `KK_STATUS_VIOLATION` the message is available
//! from [`kk_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kkcoeff::cli::{self, Coeff, Outcome, Suite, VerifyArgs, EXIT_FAIL, EXIT_VIOLATION};
use kkcoeff::theory::{Catalog, GradedTheory, TheoryWire};
use kkcoeff::transform::TransformationSample;
use kkcoeff::Error;
use serde::Deserialize;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KkStatus {
    Ok = 0,
    /// The report was produced and at least one check failed.
    CheckFailed = 1,
    /// The report was produced and a biconditional was violated.
    Violation = 2,
    /// Null pointer, bad UTF-8, or a parameter out of range.
    InvalidArgument = 3,
    /// Malformed JSON, theory, catalog or sample data.
    InvalidInput = 4,
    /// The computation itself failed.
    ComputeError = 5,
    Panic = 6,
}

/// Opaque catalog handle.
pub struct KkCatalog {
    inner: Catalog,
}

/// Opaque theory handle.
pub struct KkTheory {
    inner: GradedTheory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(KkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidParameter(_) | Error::Divisibility { .. } => KkStatus::InvalidArgument,
            Error::InvalidGroup(_)
            | Error::Shape { .. }
            | Error::NotWellDefined(_)
            | Error::InvalidTheory(_)
            | Error::Catalog { .. }
            | Error::UnknownEntry(_)
            | Error::Sample(_)
            | Error::Json(_)
            | Error::Io(_) => KkStatus::InvalidInput,
            _ => KkStatus::ComputeError,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(KkStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<KkStatus, Failure>) -> KkStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            KkStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid(format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| invalid(format!("{what} is null")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    *out = CString::new(s).map_err(|e| Failure(KkStatus::ComputeError, e.to_string()))?.into_raw();
    Ok(())
}

unsafe fn put_report(out: *mut *mut c_char, outcome: Outcome) -> Result<KkStatus, Failure> {
    put_string(out, outcome.report.to_json())?;
    Ok(match outcome.exit_code {
        0 => KkStatus::Ok,
        EXIT_FAIL => KkStatus::CheckFailed,
        EXIT_VIOLATION => KkStatus::Violation,
        _ => KkStatus::ComputeError,
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn kk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kk_catalog_builtin(out: *mut *mut KkCatalog) -> KkStatus {
    guard(|| {
        put(out, KkCatalog { inner: Catalog::builtin() })?;
        Ok(KkStatus::Ok)
    })
}

/// Catalog from a JSON array of entries.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kk_catalog_from_json(json: *const c_char, out: *mut *mut KkCatalog) -> KkStatus {
    guard(|| {
        let inner = Catalog::from_json(text(json, "json")?)?;
        put(out, KkCatalog { inner })?;
        Ok(KkStatus::Ok)
    })
}

/// Number of entries, 0 for NULL.
///
/// # Safety
/// `catalog` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kk_catalog_len(catalog: *const KkCatalog) -> usize {
    catalog.as_ref().map_or(0, |c| c.inner.entries().len())
}

/// Name of entry `index`, as a string to release with `kk_string_free`.
///
/// # Safety
/// `catalog` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kk_catalog_name(catalog: *const KkCatalog, index: usize, out: *mut *mut c_char) -> KkStatus {
    guard(|| {
        let c = handle(catalog, "catalog")?;
        let e = c
            .inner
            .entries()
            .get(index)
            .ok_or_else(|| invalid(format!("index {index} out of range for {} entries", c.inner.entries().len())))?;
        put_string(out, e.name.clone())?;
        Ok(KkStatus::Ok)
    })
}

/// Theory for an entry name, `cuntz:N` or `C_q(N)`.
///
/// # Safety
/// `catalog` must be a live handle, `name` a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kk_catalog_resolve(
    catalog: *const KkCatalog,
    name: *const c_char,
    out: *mut *mut KkTheory,
) -> KkStatus {
    guard(|| {
        let entry = handle(catalog, "catalog")?.inner.resolve(text(name, "name")?)?;
        put(out, KkTheory { inner: entry.theory })?;
        Ok(KkStatus::Ok)
    })
}

/// # Safety
/// `catalog` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kk_catalog_free(catalog: *mut KkCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// Theory from a single catalog-entry JSON object.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kk_theory_from_json(json: *const c_char, out: *mut *mut KkTheory) -> KkStatus {
    guard(|| {
        let wire: TheoryWire = serde_json::from_str(text(json, "json")?).map_err(Error::from)?;
        put(out, KkTheory { inner: GradedTheory::from_wire(wire)? })?;
        Ok(KkStatus::Ok)
    })
}

/// # Safety
/// `theory` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kk_theory_to_json(theory: *const KkTheory, out: *mut *mut c_char) -> KkStatus {
    guard(|| {
        let wire = handle(theory, "theory")?.inner.to_wire();
        put_string(out, serde_json::to_string(&wire).map_err(Error::from)?)?;
        Ok(KkStatus::Ok)
    })
}

/// # Safety
/// `theory` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kk_theory_free(theory: *mut KkTheory) {
    if !theory.is_null() {
        drop(Box::from_raw(theory));
    }
}

/// Coefficient groups of `theory` for `coeff` (`mod:Q`, `torsion` or
/// `rational`), as a JSON report.
///
/// # Safety
/// `theory` must be a live handle, `coeff` a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kk_compute(theory: *const KkTheory, coeff: *const c_char, out: *mut *mut c_char) -> KkStatus {
    guard(|| {
        let t = &handle(theory, "theory")?.inner;
        let coeff: Coeff = text(coeff, "coeff")?.parse().map_err(invalid)?;
        put_report(out, cli::compute_theory(t, ("theory", t.name().to_string()), &coeff)?)
    })
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct VerifyOptions {
    suite: Option<String>,
    entry: String,
    q_max: u64,
    p_max: u64,
    profile_bound: u64,
    seed: u64,
    random: usize,
    samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        let d = VerifyArgs::default();
        VerifyOptions {
            suite: None,
            entry: d.entry,
            q_max: d.q_max,
            p_max: d.p_max,
            profile_bound: d.profile_bound,
            seed: d.seed,
            random: d.random,
            samples: d.samples,
        }
    }
}

impl VerifyOptions {
    fn into_args(self) -> Result<VerifyArgs, Failure> {
        let suite = match self.suite {
            None => None,
            Some(name) => Some(Suite::from_name(&name).ok_or_else(|| invalid(format!("unknown suite {name:?}")))?),
        };
        Ok(VerifyArgs {
            suite,
            entry: self.entry,
            q_max: self.q_max,
            p_max: self.p_max,
            profile_bound: self.profile_bound,
            seed: self.seed,
            random: self.random,
            samples: self.samples,
        })
    }
}

/// Run verification suites. `options` is NULL or a JSON object with any of
/// `suite`, `entry`, `q_max`, `p_max`, `profile_bound`, `seed`, `random`,
/// `samples`; omitted keys take the command-line defaults.
///
/// # Safety
/// `catalog` must be a live handle, `options` NULL or a NUL-terminated string,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kk_verify(catalog: *const KkCatalog, options: *const c_char, out: *mut *mut c_char) -> KkStatus {
    guard(|| {
        let c = handle(catalog, "catalog")?;
        let opts: VerifyOptions = if options.is_null() {
            VerifyOptions::default()
        } else {
            serde_json::from_str(text(options, "options")?).map_err(|e| invalid(format!("options: {e}")))?
        };
        put_report(out, cli::verify(&c.inner, &opts.into_args()?)?)
    })
}

/// Equivalence biconditionals for a transformation sample given as JSON.
/// Returns `KK_STATUS_VIOLATION` with the report written when one fails.
///
/// # Safety
/// `sample` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kk_check_transform(sample: *const c_char, out: *mut *mut c_char) -> KkStatus {
    guard(|| {
        let s = TransformationSample::from_json(text(sample, "sample")?)?;
        let label = s.name.clone();
        put_report(out, cli::check_sample(&s, label)?)
    })
}
