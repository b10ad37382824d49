use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use lamination_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

/// Takes ownership of a returned string.
unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    lam_string_free(s);
    out
}

fn last_error() -> Option<String> {
    let p = lam_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned())
}

#[test]
fn strings_and_statuses() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(lam_sigma(2, c("1/3").as_ptr(), &mut out), LamStatus::Ok);
        assert_eq!(take(out), "2/3");
        assert_eq!(last_error(), None);

        assert_eq!(lam_mac_to_scm(3, c("1/8,3/8").as_ptr(), &mut out), LamStatus::Ok);
        assert_eq!(take(out), "{1/8, 1/4, 3/8, 3/4}");
        assert_eq!(lam_scm_to_mac(3, c("1/8,1/4,3/8,3/4").as_ptr(), &mut out), LamStatus::Ok);
        assert_eq!(take(out), "(1/8, 3/8)");
        assert_eq!(lam_coroots(3, c("1/8,3/8").as_ptr(), &mut out), LamStatus::Ok);
        assert_eq!(take(out), r#"["3/4"]"#);
        assert_eq!(lam_mac_data(2, c("2/7,5/7").as_ptr(), &mut out), LamStatus::Ok);
        assert!(take(out).contains(r#""tag":"IdentityReturn""#));

        assert_eq!(lam_sigma(2, c("2/4").as_ptr(), &mut out), LamStatus::Parse);
        assert!(last_error().unwrap().contains("lowest terms"));
        assert_eq!(lam_sigma(1, c("1/3").as_ptr(), &mut out), LamStatus::Domain);
        assert_eq!(lam_coroots(3, c("1/3,2/3").as_ptr(), &mut out), LamStatus::Domain);
        assert_eq!(lam_sigma(2, ptr::null(), &mut out), LamStatus::NullPointer);
        assert_eq!(lam_sigma(2, c("1/3").as_ptr(), ptr::null_mut()), LamStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(lam_sigma(2, bad.as_ptr().cast(), &mut out), LamStatus::InvalidUtf8);
        lam_string_free(ptr::null_mut());
    }
}

#[test]
fn lamination_handles() {
    unsafe {
        let mut lam = ptr::null_mut();
        assert_eq!(lam_mac_lamination(2, c("1/3,2/3").as_ptr(), 2, &mut lam), LamStatus::Ok);
        let (mut n, mut d) = (0usize, 0u32);
        assert_eq!(lam_lamination_leaf_count(lam, &mut n), LamStatus::Ok);
        assert_eq!(lam_lamination_degree(lam, &mut d), LamStatus::Ok);
        assert_eq!((n, d), (4, 2));
        let mut json = ptr::null_mut();
        assert_eq!(lam_lamination_to_json(lam, &mut json), LamStatus::Ok);
        let json = take(json);
        lam_lamination_free(lam);

        let mut back = ptr::null_mut();
        assert_eq!(lam_lamination_from_json(c(&json).as_ptr(), &mut back), LamStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(lam_lamination_to_json(back, &mut again), LamStatus::Ok);
        assert_eq!(take(again), json);
        let mut svg = ptr::null_mut();
        assert_eq!(lam_lamination_svg(back, 0, &mut svg), LamStatus::Domain);
        assert_eq!(lam_lamination_svg(back, 200, &mut svg), LamStatus::Ok);
        assert!(take(svg).contains(r#"width="200""#));
        lam_lamination_free(back);
        lam_lamination_free(ptr::null_mut());

        let mut tri = ptr::null_mut();
        assert_eq!(lam_scm_lamination(2, c("1/7,2/7,4/7").as_ptr(), 3, &mut tri), LamStatus::Ok);
        lam_lamination_free(tri);

        let mut none = ptr::null_mut();
        assert_eq!(lam_lamination_from_json(c("{\"degree\":2,\"x\":1}").as_ptr(), &mut none), LamStatus::Parse);
        assert!(none.is_null());
        let crossing = r#"{"degree":2,"leaves":[["0","1/2"],["1/4","3/4"]]}"#;
        assert_eq!(lam_lamination_from_json(c(crossing).as_ptr(), &mut none), LamStatus::Domain);
        assert_eq!(lam_lamination_leaf_count(ptr::null(), &mut 0), LamStatus::NullPointer);
    }
}

#[test]
fn check_suite() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(lam_check(c("coroot").as_ptr(), 3, 4, &mut out), LamStatus::Ok);
        assert!(take(out).contains(r#""check":"coroot""#));
        assert_eq!(lam_check(c("kiwi").as_ptr(), 3, 3, ptr::null_mut()), LamStatus::Ok);
        assert_eq!(lam_check(c("everything").as_ptr(), 3, 3, &mut out), LamStatus::Parse);
    }
}

fn target_dir() -> PathBuf {
    // CARGO_TARGET_TMPDIR is <target>/tmp.
    Path::new(env!("CARGO_TARGET_TMPDIR")).parent().unwrap().to_path_buf()
}

/// Compiles the C smoke test against the generated header and the static
/// library, then runs it.
#[test]
fn c_smoke_test() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/lamination.h");
    assert!(header.exists(), "header not generated");
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = [profile_dir.join("liblamination_ffi.a"), target_dir().join("debug/liblamination_ffi.a")]
        .into_iter()
        .find(|p| p.exists())
        .expect("static library not built");
    let exe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("lamination_smoke");
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success(), "C smoke test failed to compile");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
