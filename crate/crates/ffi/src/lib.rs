//! C ABI over `cyclic-core`.
//!
//! Documents and reports are opaque handles. Every fallible call returns a
//! [`CyclicStatus`]; the message of the most recent failure on the calling
//! thread is available from [`cyclic_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cyclic_core::cli::{run, Options, Report};
use cyclic_core::io::InputDocument;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CyclicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The document or arguments were rejected.
    InvalidInput = 3,
    Panic = 4,
}

/// A parsed input document.
pub struct CyclicDocument(InputDocument);

/// The result of running a command on a document.
pub struct CyclicReport {
    report: Report,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn guard(f: impl FnOnce() -> Result<(), (CyclicStatus, String)>) -> CyclicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CyclicStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CyclicStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CyclicStatus, String)> {
    if p.is_null() {
        return Err((CyclicStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (CyclicStatus::InvalidUtf8, format!("{what}: {e}")))
}

/// Message of the last failure on this thread. Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cyclic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a JSON input document. On success `*out` owns a handle to free with [`cyclic_document_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cyclic_document_parse(json: *const c_char, out: *mut *mut CyclicDocument) -> CyclicStatus {
    guard(|| {
        if out.is_null() {
            return Err((CyclicStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let text = str_arg(json, "json")?;
        let doc = InputDocument::from_json(text).map_err(|e| (CyclicStatus::InvalidInput, e.to_string()))?;
        *out = Box::into_raw(Box::new(CyclicDocument(doc)));
        Ok(())
    })
}

/// # Safety
/// `doc` must come from [`cyclic_document_parse`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cyclic_document_free(doc: *mut CyclicDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Run `command` (`validate`, `hh`, `hc`, `equiv`, `enhance`, `ss` or `cy`) on a document.
///
/// `variant` may be null. It selects the flavor for `hc` and `equiv` and the mode for `cy`;
/// other parameters come from the document's `job` section.
///
/// # Safety
/// `doc` must be a live document handle, `command` a NUL-terminated string, `variant` null or
/// NUL-terminated, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyclic_run(
    doc: *const CyclicDocument,
    command: *const c_char,
    variant: *const c_char,
    out: *mut *mut CyclicReport,
) -> CyclicStatus {
    guard(|| {
        if out.is_null() || doc.is_null() {
            return Err((CyclicStatus::NullPointer, "doc or out is null".into()));
        }
        *out = ptr::null_mut();
        let command = str_arg(command, "command")?;
        let variant = if variant.is_null() { None } else { Some(str_arg(variant, "variant")?.to_string()) };
        let mut opts = Options::default();
        match command {
            "cy" => opts.mode = variant,
            _ => opts.flavor = variant,
        }
        let report = run(command, &(*doc).0, "", &opts).map_err(|e| (CyclicStatus::InvalidInput, e.to_string()))?;
        let json = CString::new(report.canonical()).map_err(|e| (CyclicStatus::Panic, e.to_string()))?;
        *out = Box::into_raw(Box::new(CyclicReport { report, json }));
        Ok(())
    })
}

/// Canonical JSON of a report, owned by the handle.
///
/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cyclic_report_json(report: *const CyclicReport) -> *const c_char {
    if report.is_null() {
        return ptr::null();
    }
    (*report).json.as_ptr()
}

/// The exit code the `cyclic` binary would return for this report: 0 pass, 1 fail, 3 uncertified.
///
/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cyclic_report_exit_code(report: *const CyclicReport, require_certified: bool) -> i32 {
    if report.is_null() {
        return -1;
    }
    (*report).report.exit_code(require_certified)
}

/// # Safety
/// `report` must come from [`cyclic_run`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cyclic_report_free(report: *mut CyclicReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
