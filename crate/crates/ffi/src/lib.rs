//! C interface to `gerbe-core`.
//!
//! Objects cross the boundary as opaque handles released with their `_free`
//! function. Strings returned to the caller are owned by the library and
//! released with [`gerbe_string_free`]. Every fallible call returns a
//! [`GerbeStatus`]; on failure [`gerbe_last_error_message`] describes the
//! last error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use gerbe_core::cochain::{cohomology_group, Cochain, Limits};
use gerbe_core::commands::{self, Options};
use gerbe_core::json::{cochain_to_json, group_to_json, parse_cochain, parse_group, DEFAULT_MAX_ORDER};
use gerbe_core::{Error, ErrorKind, FiniteGroup};
use serde_json::{json, Value};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GerbeStatus {
    Ok = 0,
    /// A well-formed question with a negative answer.
    Mathematical = 1,
    /// Malformed or inconsistent input.
    Input = 2,
    /// A size or order cap was hit.
    Resource = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// A finite group.
pub struct GerbeGroup {
    inner: Arc<FiniteGroup>,
}

/// A Q/Z-valued cochain on a group or an action groupoid.
pub struct GerbeCochain {
    inner: Cochain,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GerbeStatus {
    set_error(e.to_string());
    match e.kind() {
        ErrorKind::Mathematical => GerbeStatus::Mathematical,
        ErrorKind::Input => GerbeStatus::Input,
        ErrorKind::Resource => GerbeStatus::Resource,
    }
}

fn guard(f: impl FnOnce() -> GerbeStatus) -> GerbeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            GerbeStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, GerbeStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(GerbeStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        GerbeStatus::InvalidUtf8
    })
}

fn read_json(text: &str) -> Result<Value, GerbeStatus> {
    serde_json::from_str(text).map_err(|e| status_of(&Error::Malformed(e.to_string())))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> GerbeStatus {
    if out.is_null() {
        set_error("null output pointer");
        return GerbeStatus::NullPointer;
    }
    *out = CString::new(s).expect("JSON has no interior nul").into_raw();
    GerbeStatus::Ok
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Parses a group description (`table`, `perm` or `abelian` JSON).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gerbe_group_from_json(json: *const c_char, out: *mut *mut GerbeGroup) -> GerbeStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return GerbeStatus::NullPointer;
        }
        let v = tri!(read_json(tri!(read_str(json))));
        match parse_group(&v, DEFAULT_MAX_ORDER) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(GerbeGroup { inner: g.group }));
                GerbeStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Order of the group, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a handle from [`gerbe_group_from_json`].
#[no_mangle]
pub unsafe extern "C" fn gerbe_group_order(g: *const GerbeGroup) -> usize {
    g.as_ref().map_or(0, |g| g.inner.order())
}

/// Canonical table JSON of the group.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gerbe_group_to_json(g: *const GerbeGroup, out: *mut *mut c_char) -> GerbeStatus {
    guard(|| {
        let Some(g) = g.as_ref() else {
            set_error("null group handle");
            return GerbeStatus::NullPointer;
        };
        write_string(out, group_to_json(&g.inner).to_string())
    })
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gerbe_group_free(g: *mut GerbeGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// `H^degree(G, Q/Z)` as `{"factors": [...], "generators": [...]}`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gerbe_cohomology_json(g: *const GerbeGroup, degree: usize, out: *mut *mut c_char) -> GerbeStatus {
    guard(|| {
        let Some(g) = g.as_ref() else {
            set_error("null group handle");
            return GerbeStatus::NullPointer;
        };
        if degree == 0 {
            return status_of(&Error::Malformed("degree must be at least 1".into()));
        }
        match cohomology_group(&g.inner, degree, &Limits::default()) {
            Ok(h) => {
                let gens: Vec<Value> = h.representatives.iter().map(cochain_to_json).collect();
                write_string(out, json!({ "factors": h.factors, "generators": gens }).to_string())
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Parses a cochain carrying its own `base`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gerbe_cochain_from_json(json: *const c_char, out: *mut *mut GerbeCochain) -> GerbeStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return GerbeStatus::NullPointer;
        }
        let v = tri!(read_json(tri!(read_str(json))));
        match parse_cochain(&v, None, DEFAULT_MAX_ORDER) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(GerbeCochain { inner: c }));
                GerbeStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gerbe_cochain_degree(c: *const GerbeCochain) -> usize {
    c.as_ref().map_or(0, |c| c.inner.degree())
}

/// Writes 1 to `out` when the cochain is a cocycle, else 0.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gerbe_cochain_is_cocycle(c: *const GerbeCochain, out: *mut i32) -> GerbeStatus {
    guard(|| {
        let (Some(c), false) = (c.as_ref(), out.is_null()) else {
            set_error("null pointer argument");
            return GerbeStatus::NullPointer;
        };
        *out = c.inner.is_cocycle() as i32;
        GerbeStatus::Ok
    })
}

/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gerbe_cochain_to_json(c: *const GerbeCochain, out: *mut *mut c_char) -> GerbeStatus {
    guard(|| {
        let Some(c) = c.as_ref() else {
            set_error("null cochain handle");
            return GerbeStatus::NullPointer;
        };
        write_string(out, cochain_to_json(&c.inner).to_string())
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gerbe_cochain_free(c: *mut GerbeCochain) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Runs a command such as `"dual"` or `"gerbe.rep.count"` and writes the
/// JSON report to `report`. `options` may be null or a JSON object with
/// `level_multiplier`, `max_order`, `max_matrix_dim` and `emit_witness`.
/// The returned status mirrors the report: `Ok` exactly when its status is
/// `"ok"`.
///
/// # Safety
/// String arguments must be nul-terminated; `report` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gerbe_run_command(
    command: *const c_char,
    payload: *const c_char,
    options: *const c_char,
    report: *mut *mut c_char,
) -> GerbeStatus {
    guard(|| {
        let command = tri!(read_str(command));
        let payload = tri!(read_str(payload));
        let mut opts = Options::default();
        if !options.is_null() {
            let v = tri!(read_json(tri!(read_str(options))));
            let get = |k: &str| v.get(k).and_then(Value::as_u64);
            if let Some(m) = get("level_multiplier") {
                opts.limits.level_multiplier = m.max(1);
            }
            if let Some(m) = get("max_order") {
                opts.max_order = m as usize;
            }
            if let Some(m) = get("max_matrix_dim") {
                opts.limits.max_matrix_dim = m as usize;
            }
            opts.emit_witness = v.get("emit_witness").and_then(Value::as_bool).unwrap_or(false);
        }
        let r = commands::run_str(command, payload, &opts);
        let status = match r.exit_code {
            0 => GerbeStatus::Ok,
            1 => GerbeStatus::Mathematical,
            3 => GerbeStatus::Resource,
            _ => GerbeStatus::Input,
        };
        if status != GerbeStatus::Ok {
            let msg = r.json["error"]["message"].as_str().unwrap_or("command failed").to_string();
            set_error(msg);
        }
        match write_string(report, r.json.to_string()) {
            GerbeStatus::Ok => status,
            s => s,
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gerbe_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gerbe_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
