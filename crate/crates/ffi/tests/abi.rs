use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use ultradyn_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ud_string_free(s) };
    out
}

fn parse(text: &str) -> *mut UdMap {
    let c = CString::new(text).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ud_map_parse(c.as_ptr(), &mut m) }, UdStatus::Ok);
    m
}

#[test]
fn handle_lifecycle() {
    let m = parse("(z^2 - 3/4)");
    assert_eq!(unsafe { ud_map_degree(m) }, 2);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ud_map_render(m, &mut s) }, UdStatus::Ok);
    assert_eq!(take(s), "z^2 - 3/4");
    unsafe { ud_map_free(m) };
    unsafe { ud_map_free(ptr::null_mut()) };
    assert_eq!(unsafe { ud_map_degree(ptr::null()) }, -1);
}

#[test]
fn parse_errors_carry_messages() {
    let c = CString::new("z^2 +* 1").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ud_map_parse(c.as_ptr(), &mut m) }, UdStatus::Parse);
    assert!(m.is_null());
    let msg = unsafe { CStr::from_ptr(ud_last_error()) }.to_str().unwrap();
    assert!(msg.contains("position"), "{msg}");
    assert_eq!(unsafe { ud_map_parse(ptr::null(), &mut m) }, UdStatus::NullPointer);
}

#[test]
fn json_reports() {
    let m = parse("z^2-3/4");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ud_analyze(m, 3, &mut s) }, UdStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[1]["class"], "attracting");
    assert_eq!(unsafe { ud_analyze(m, 4, &mut s) }, UdStatus::Precondition);
    unsafe { ud_map_free(m) };

    let m = parse("-45*(3*z+5)/(z^2*(z-9))");
    assert_eq!(unsafe { ud_pcf_check(m, 0, &mut s) }, UdStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["verdict"], "pcf");
    unsafe { ud_map_free(m) };
}

#[test]
fn thresholds() {
    let mut t = -1i64;
    assert_eq!(unsafe { ud_epsilon_threshold(2, 2, &mut t) }, UdStatus::Ok);
    assert_eq!(t, 2);
    assert_eq!(unsafe { ud_epsilon_threshold(5, 2, &mut t) }, UdStatus::Ok);
    assert_eq!(t, 0);
    assert_eq!(unsafe { ud_epsilon_threshold(5, 1, &mut t) }, UdStatus::Precondition);
}

#[test]
fn cli_passthrough() {
    let args: Vec<CString> = ["ultradyn", "epsilon", "--degree", "2", "--primes", "2"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let mut s = ptr::null_mut();
    let mut code: c_int = -1;
    assert_eq!(unsafe { ud_cli_run(ptrs.len() as c_int, ptrs.as_ptr(), &mut s, &mut code) }, UdStatus::Ok);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["thresholds"][0]["epsilon"], "1/4");
}

#[test]
fn cli_search_hits_are_captured() {
    let args: Vec<CString> = ["ultradyn", "search", "--family", "poly_slice", "--height-bound", "2"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let mut s = ptr::null_mut();
    let mut code: c_int = -1;
    assert_eq!(unsafe { ud_cli_run(ptrs.len() as c_int, ptrs.as_ptr(), &mut s, &mut code) }, UdStatus::Ok);
    assert_eq!(code, 0);
    let text = take(s);
    let hits: Vec<serde_json::Value> = text
        .lines()
        .take_while(|l| l.starts_with('{') && l.ends_with('}'))
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let cs: Vec<&str> = hits.iter().map(|h| h["parameters"][0].as_str().unwrap()).collect();
    assert_eq!(cs, ["-2", "-1", "0"]);
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ultradyn.h")).unwrap();
    for name in ["ud_map_parse", "ud_map_free", "ud_string_free", "ud_last_error", "UD_STATUS_OK", "typedef struct UdMap UdMap"] {
        assert!(h.contains(name), "{name} missing from header");
    }
}
