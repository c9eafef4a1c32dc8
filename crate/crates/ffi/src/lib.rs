//! C ABI over the ultradyn core.
//!
//! Maps live behind the opaque `UdMap` handle. Reports come back as JSON
//! strings owned by the caller and released with `ud_string_free`. Every
//! entry point returns a `UdStatus`; the message for the last failure on
//! the calling thread is available from `ud_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ultradyn::dynamics::{epsilon, fixed_points, pcf_check, EpsilonKind, PcfConfig};
use ultradyn::exactnum::Prime;
use ultradyn::ratfunc::{parse_map, RatMap};
use ultradyn::Error;

/// Result codes shared by all functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Precondition = 4,
    Resource = 5,
    Indeterminate = 6,
    Panic = 7,
    Other = 8,
}

/// A rational map over Q.
pub struct UdMap(RatMap);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> UdStatus {
    match e {
        Error::Parse { .. } | Error::DivisionByZero { .. } => UdStatus::Parse,
        Error::DegreeCap { .. } | Error::Precision(_) | Error::Io(_) => UdStatus::Resource,
        Error::Indeterminate(_) => UdStatus::Indeterminate,
        Error::Precondition(_)
        | Error::NotPrime(_)
        | Error::DegenerateMap { .. }
        | Error::Degenerate(_)
        | Error::Hensel(_)
        | Error::Invalid(_)
        | Error::ZeroPolynomial(_) => UdStatus::Precondition,
        Error::Unsupported(_) => UdStatus::Other,
    }
}

fn guard(f: impl FnOnce() -> Result<(), UdStatus>) -> UdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UdStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            UdStatus::Panic
        }
    }
}

fn fail(e: Error) -> UdStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, UdStatus> {
    if s.is_null() {
        set_error("null string".into());
        return Err(UdStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not UTF-8".into());
        UdStatus::InvalidUtf8
    })
}

unsafe fn read_map<'a>(m: *const UdMap) -> Result<&'a RatMap, UdStatus> {
    if m.is_null() {
        set_error("null map handle".into());
        return Err(UdStatus::NullPointer);
    }
    Ok(&(*m).0)
}

unsafe fn emit(out: *mut *mut c_char, s: String) -> Result<(), UdStatus> {
    if out.is_null() {
        set_error("null output pointer".into());
        return Err(UdStatus::NullPointer);
    }
    *out = CString::new(s).unwrap().into_raw();
    Ok(())
}

fn prime(p: u64) -> Result<Prime, UdStatus> {
    Prime::new(p).map_err(fail)
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, UdStatus> {
    serde_json::to_string(v).map_err(|e| fail(e.into()))
}

/// Parses a map such as `"z^2 - 3/4"` into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ud_map_parse(text: *const c_char, out: *mut *mut UdMap) -> UdStatus {
    guard(|| {
        let s = read_str(text)?;
        if out.is_null() {
            set_error("null output pointer".into());
            return Err(UdStatus::NullPointer);
        }
        let m = parse_map(s).map_err(fail)?;
        *out = Box::into_raw(Box::new(UdMap(m)));
        Ok(())
    })
}

/// Releases a handle from `ud_map_parse`. Null is ignored.
///
/// # Safety
/// `map` must come from `ud_map_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ud_map_free(map: *mut UdMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Degree of the map, or -1 for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ud_map_degree(map: *const UdMap) -> i64 {
    match read_map(map) {
        Ok(m) => m.degree() as i64,
        Err(_) => -1,
    }
}

/// Canonical text of the map.
///
/// # Safety
/// `map` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ud_map_render(map: *const UdMap, out: *mut *mut c_char) -> UdStatus {
    guard(|| {
        let m = read_map(map)?;
        emit(out, m.to_string())
    })
}

/// Fixed points with multipliers and classes at `p`, as JSON.
///
/// # Safety
/// `map` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ud_analyze(map: *const UdMap, p: u64, out: *mut *mut c_char) -> UdStatus {
    guard(|| {
        let m = read_map(map)?;
        let fps = fixed_points(m, prime(p)?).map_err(fail)?;
        emit(out, to_json(&fps)?)
    })
}

/// PCF certificate as JSON; `max_steps == 0` uses the default budget.
///
/// # Safety
/// `map` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ud_pcf_check(map: *const UdMap, max_steps: usize, out: *mut *mut c_char) -> UdStatus {
    guard(|| {
        let m = read_map(map)?;
        let mut cfg = PcfConfig::default();
        if max_steps > 0 {
            cfg.max_steps = max_steps;
        }
        let cert = pcf_check(m, &cfg).map_err(fail)?;
        emit(out, to_json(&cert)?)
    })
}

/// General threshold T for (p, d), with ε = p^-T.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ud_epsilon_threshold(p: u64, d: usize, out: *mut i64) -> UdStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return Err(UdStatus::NullPointer);
        }
        let e = epsilon(prime(p)?, d, EpsilonKind::General).map_err(fail)?;
        *out = e.threshold.to_integer().try_into().unwrap_or(i64::MAX);
        Ok(())
    })
}

/// Runs a command-line invocation (`argv[0]` is the program name) and
/// returns its standard output. `exit_code` receives the CLI exit code.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ud_cli_run(
    argc: c_int,
    argv: *const *const c_char,
    out: *mut *mut c_char,
    exit_code: *mut c_int,
) -> UdStatus {
    guard(|| {
        if argv.is_null() || exit_code.is_null() || argc < 0 {
            set_error("null argument vector".into());
            return Err(UdStatus::NullPointer);
        }
        let mut args = Vec::with_capacity(argc as usize);
        for i in 0..argc as usize {
            args.push(read_str(*argv.add(i))?.to_owned());
        }
        let mut stdout = Vec::new();
        let mut stderr = Vec::new();
        let code = ultradyn::cli::run(args, &mut stdout, &mut stderr);
        *exit_code = code;
        if code != 0 {
            set_error(String::from_utf8_lossy(&stderr).trim().to_owned());
        }
        emit(out, String::from_utf8_lossy(&stdout).into_owned())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ud_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ud_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
