use std::ffi::{c_char, CString};
use std::ptr;

use topogroup_ffi::*;

fn lattice(d: &str) -> *mut TgLattice {
    let d = CString::new(d).unwrap();
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { tg_lattice_new(d.as_ptr(), &mut l) }, TgStatus::Ok);
    l
}

fn system(l: *const TgLattice, d: &str) -> *mut TgSystem {
    let d = CString::new(d).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { tg_system_new(l, d.as_ptr(), &mut t) }, TgStatus::Ok);
    t
}

fn last_error() -> String {
    unsafe {
        let n = tg_last_error_message(ptr::null_mut(), 0);
        let mut buf = vec![0 as c_char; n + 1];
        tg_last_error_message(buf.as_mut_ptr(), buf.len());
        std::ffi::CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn lattice_queries() {
    let l = lattice("sym:3");
    let (mut order, mut len, mut members, mut ultra) = (0, 0, 0u64, 0);
    unsafe {
        assert_eq!(tg_lattice_group_order(l, &mut order), TgStatus::Ok);
        assert_eq!(tg_lattice_len(l, &mut len), TgStatus::Ok);
        assert_eq!(tg_lattice_members(l, 4, &mut members), TgStatus::Ok);
        assert_eq!(tg_ultrafilter_count(l, &mut ultra), TgStatus::Ok);
        assert_eq!(tg_lattice_members(l, 6, &mut members), TgStatus::OutOfRange);
        tg_lattice_free(l);
    }
    assert_eq!((order, len, ultra), (6, 6, 4));
}

#[test]
fn system_outlives_lattice_handle() {
    let l = lattice("sym:3");
    let t = system(l, "normal");
    unsafe { tg_lattice_free(l) };
    let (mut h, mut topen, mut interior, mut closure, mut limits) = (true, true, 0, 0, 0u64);
    unsafe {
        assert_eq!(tg_system_is_hausdorff(t, &mut h), TgStatus::Ok);
        assert_eq!(tg_system_contains(t, 1, &mut topen), TgStatus::Ok);
        assert_eq!(tg_system_interior(t, 1, &mut interior), TgStatus::Ok);
        assert_eq!(tg_system_closure(t, 4, &mut closure, &mut limits), TgStatus::Ok);
        tg_system_free(t);
    }
    assert!(!h && !topen);
    assert_eq!(interior, 0);
    assert_eq!(closure, 5);
    // every transposition is a limit point of A3
    assert_eq!(limits & 0b100110, 0b100110);
}

#[test]
fn convergence() {
    let l = lattice("sym:3");
    let t = system(l, "normal");
    let mut c = false;
    unsafe {
        // F_(1 2 3) converges to (2 3) under the normal system, but not under discrete
        assert_eq!(tg_principal_converges(t, 3, 1, &mut c), TgStatus::Ok);
        assert!(c);
        let d = system(l, "discrete");
        assert_eq!(tg_principal_converges(d, 3, 1, &mut c), TgStatus::Ok);
        assert!(!c);
        assert_eq!(tg_principal_converges(d, 0, 1, &mut c), TgStatus::Failed);
        assert_eq!(tg_principal_converges(d, 7, 1, &mut c), TgStatus::OutOfRange);
        tg_system_free(d);
        tg_system_free(t);
        tg_lattice_free(l);
    }
}

#[test]
fn errors_set_message() {
    let mut l = ptr::null_mut();
    let bad = CString::new("bogus:3").unwrap();
    assert_eq!(unsafe { tg_lattice_new(bad.as_ptr(), &mut l) }, TgStatus::InvalidDescriptor);
    assert!(l.is_null());
    assert!(last_error().contains("bogus"));

    assert_eq!(unsafe { tg_lattice_new(ptr::null(), &mut l) }, TgStatus::NullArgument);
    let l = lattice("cyclic:4");
    assert!(last_error().is_empty());
    let d = CString::new("principal:#9").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { tg_system_new(l, d.as_ptr(), &mut t) }, TgStatus::InvalidDescriptor);
    assert_eq!(unsafe { tg_lattice_len(l, ptr::null_mut()) }, TgStatus::NullArgument);

    // truncation keeps the NUL terminator
    let mut buf = [0 as c_char; 4];
    let n = unsafe { tg_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 3 && buf[3] == 0);
    unsafe { tg_lattice_free(l) };
}

#[test]
fn header_is_current_and_compiles() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/topogroup.h")).unwrap();
    for f in ["tg_lattice_new", "tg_system_closure", "tg_principal_converges", "tg_last_error_message"] {
        assert!(header.contains(f), "{f} missing from header");
    }
    // syntax check with the system C compiler when there is one
    let out = std::env::temp_dir().join(format!("topogroup-h-{}.o", std::process::id()));
    if let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99", "-Wall", "-Werror"])
        .arg(dir.join("include/topogroup.h"))
        .arg("-o")
        .arg(&out)
        .status()
    {
        assert!(status.success());
    }
}
