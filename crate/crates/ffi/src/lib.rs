//! C ABI over `semidirect`.
//!
//! Objects are opaque handles created by `*_from_json` constructors and
//! released with the matching `*_free`. Data crosses the boundary as UTF-8
//! JSON in the same formats the CLI reads and writes. Every fallible call
//! returns an [`SdStatus`]; on failure a message is available from
//! [`sd_last_error_message`] on the same thread.
//!
//! Strings returned through `char **` out-parameters are owned by the caller
//! and must be released with [`sd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use semidirect::endomorphism::Endomorphism;
use semidirect::group::{GroupDescriptor, GroupElement};
use semidirect::linalg::IntMatrix;
use semidirect::nilpotency::is_virtually_nilpotent;
use semidirect::scale_invariance::{
    certificate_check, fixed_point_of_square, refute_strong_scale_invariance, Certificate, Refutation,
};
use semidirect::serial::{to_canonical_json, EndoDoc, SCHEMA_VERSION};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An input document did not match its schema.
    ParseError = 3,
    /// The input parsed but is mathematically invalid (e.g. det ≠ ±1, a
    /// violated relation, a non-injective endomorphism where one is needed).
    InvalidInput = 4,
    /// Refutation does not apply (virtually nilpotent group or non-injective
    /// endomorphism).
    NotApplicable = 5,
    /// A certificate was parsed but failed verification.
    CheckFailed = 6,
    /// An internal consistency check failed or a panic was caught.
    Internal = 7,
}

/// A group `Z^n ⋊_A Z`.
pub struct SdGroup(GroupDescriptor);

/// A validated endomorphism together with its group.
pub struct SdEndo(Endomorphism);

/// A refutation certificate.
pub struct SdCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl ToString) {
    let s = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

type FfiResult<T> = Result<T, (SdStatus, String)>;

fn guard(f: impl FnOnce() -> FfiResult<SdStatus>) -> SdStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            SdStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err((SdStatus::NullPointer, "input string is NULL".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (SdStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> FfiResult<&'a T> {
    p.as_ref().ok_or((SdStatus::NullPointer, "handle is NULL".into()))
}

fn check_out<T>(p: *mut T) -> FfiResult<()> {
    if p.is_null() {
        return Err((SdStatus::NullPointer, "output pointer is NULL".into()));
    }
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    let c = CString::new(s).map_err(|e| (SdStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn parse<T: serde::de::DeserializeOwned>(s: &str) -> FfiResult<T> {
    serde_json::from_str(s).map_err(|e| (SdStatus::ParseError, format!("schema error: {e}")))
}

fn invalid(e: impl ToString) -> (SdStatus, String) {
    (SdStatus::InvalidInput, e.to_string())
}

/// Message of the last failed call on this thread, as a new string, or NULL
/// if the last call succeeded.
#[no_mangle]
pub extern "C" fn sd_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a matrix (`[["2","1"],["1","1"]]`) and builds its group.
///
/// # Safety
/// `matrix_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_group_from_json(matrix_json: *const c_char, out: *mut *mut SdGroup) -> SdStatus {
    guard(|| {
        check_out(out)?;
        let a: IntMatrix = parse(read_str(matrix_json)?)?;
        let g = GroupDescriptor::new(a).map_err(invalid)?;
        *out = Box::into_raw(Box::new(SdGroup(g)));
        Ok(SdStatus::Ok)
    })
}

/// # Safety
/// `g` must be NULL or a handle from [`sd_group_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_group_free(g: *mut SdGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Rank `n` of the translation subgroup, or 0 for a NULL handle.
///
/// # Safety
/// `g` must be NULL or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn sd_group_dim(g: *const SdGroup) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Decides virtual nilpotency. Writes the verdict document to
/// `verdict_json` (may be NULL) and the boolean answer to
/// `virtually_nilpotent` (may be NULL).
///
/// # Safety
/// `g` must be a live group handle; non-NULL out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_group_classify(
    g: *const SdGroup,
    verdict_json: *mut *mut c_char,
    virtually_nilpotent: *mut bool,
) -> SdStatus {
    guard(|| {
        let g = handle(g)?;
        let v = is_virtually_nilpotent(g.0.matrix()).map_err(|e| (SdStatus::Internal, e.to_string()))?;
        if !virtually_nilpotent.is_null() {
            *virtually_nilpotent = v.virtually_nilpotent;
        }
        if !verdict_json.is_null() {
            write_string(verdict_json, to_canonical_json(&v))?;
        }
        Ok(SdStatus::Ok)
    })
}

/// Parses an endomorphism document (`schema_version`, `matrix`, `x`, `t`) and
/// checks the defining relations.
///
/// # Safety
/// `endo_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_endo_from_json(endo_json: *const c_char, out: *mut *mut SdEndo) -> SdStatus {
    guard(|| {
        check_out(out)?;
        let doc: EndoDoc = parse(read_str(endo_json)?)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err((
                SdStatus::ParseError,
                format!("schema error: unsupported schema_version {}", doc.schema_version),
            ));
        }
        let f = doc.into_endomorphism().map_err(invalid)?;
        *out = Box::into_raw(Box::new(SdEndo(f)));
        Ok(SdStatus::Ok)
    })
}

/// # Safety
/// `f` must be NULL or a handle from [`sd_endo_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_endo_free(f: *mut SdEndo) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `[G : f(G)]` as a decimal string; `SD_STATUS_INVALID_INPUT` if `f` is not
/// injective and structured.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_endo_image_index(f: *const SdEndo, out: *mut *mut c_char) -> SdStatus {
    guard(|| {
        check_out(out)?;
        let index = handle(f)?.0.image_index().map_err(invalid)?;
        write_string(out, index.to_string())?;
        Ok(SdStatus::Ok)
    })
}

/// Applies `f` to an element `{"v": [...], "z": "..."}`.
///
/// # Safety
/// `f` must be a live handle, `element_json` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sd_endo_apply(
    f: *const SdEndo,
    element_json: *const c_char,
    out: *mut *mut c_char,
) -> SdStatus {
    guard(|| {
        check_out(out)?;
        let f = handle(f)?;
        let x: GroupElement = parse(read_str(element_json)?)?;
        let y = f.0.apply(&x).map_err(invalid)?;
        write_string(out, to_canonical_json(&y))?;
        Ok(SdStatus::Ok)
    })
}

/// Non-trivial fixed point of `f²` with the data used to construct it.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_endo_fixed_point(f: *const SdEndo, out: *mut *mut c_char) -> SdStatus {
    guard(|| {
        check_out(out)?;
        let r = fixed_point_of_square(&handle(f)?.0).map_err(invalid)?;
        write_string(out, to_canonical_json(&r))?;
        Ok(SdStatus::Ok)
    })
}

/// Builds a certificate following `depth` preimages of the fixed point.
/// Returns `SD_STATUS_NOT_APPLICABLE` (and leaves `out` untouched) for
/// virtually nilpotent groups and non-injective endomorphisms.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_endo_refute(f: *const SdEndo, depth: usize, out: *mut *mut SdCertificate) -> SdStatus {
    guard(|| {
        check_out(out)?;
        let f = &handle(f)?.0;
        match refute_strong_scale_invariance(f.descriptor(), f, depth).map_err(invalid)? {
            Refutation::Certificate(c) => {
                *out = Box::into_raw(Box::new(SdCertificate(*c)));
                Ok(SdStatus::Ok)
            }
            Refutation::NotApplicable(na) => Err((SdStatus::NotApplicable, format!("not applicable: {na:?}"))),
        }
    })
}

/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_certificate_from_json(json: *const c_char, out: *mut *mut SdCertificate) -> SdStatus {
    guard(|| {
        check_out(out)?;
        let c: Certificate = parse(read_str(json)?)?;
        *out = Box::into_raw(Box::new(SdCertificate(c)));
        Ok(SdStatus::Ok)
    })
}

/// # Safety
/// `c` must be a live certificate handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_certificate_to_json(c: *const SdCertificate, out: *mut *mut c_char) -> SdStatus {
    guard(|| {
        check_out(out)?;
        write_string(out, to_canonical_json(&handle(c)?.0))?;
        Ok(SdStatus::Ok)
    })
}

/// Verifies a certificate. Returns `SD_STATUS_OK` or `SD_STATUS_CHECK_FAILED`;
/// the report (`ok`, `diagnoses`) goes to `report_json` unless it is NULL.
///
/// # Safety
/// `c` must be a live certificate handle; `report_json` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn sd_certificate_check(c: *const SdCertificate, report_json: *mut *mut c_char) -> SdStatus {
    guard(|| {
        let report = certificate_check(&handle(c)?.0);
        if !report_json.is_null() {
            write_string(report_json, to_canonical_json(&report))?;
        }
        if report.ok {
            Ok(SdStatus::Ok)
        } else {
            Err((SdStatus::CheckFailed, report.diagnoses.join("; ")))
        }
    })
}

/// # Safety
/// `c` must be NULL or a certificate handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_certificate_free(c: *mut SdCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}
