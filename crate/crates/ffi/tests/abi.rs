use std::ffi::{c_char, CStr, CString};
use std::ptr;

use kkcoeff_ffi::*;
use serde_json::Value;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    kk_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = kk_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

unsafe fn builtin() -> *mut KkCatalog {
    let mut cat = ptr::null_mut();
    assert_eq!(kk_catalog_builtin(&mut cat), KkStatus::Ok);
    cat
}

#[test]
fn compute_through_handles() {
    unsafe {
        let cat = builtin();
        assert!(kk_catalog_len(cat) > 5);
        let mut name = ptr::null_mut();
        assert_eq!(kk_catalog_name(cat, 0, &mut name), KkStatus::Ok);
        assert!(!take(name).is_empty());

        let mut t = ptr::null_mut();
        assert_eq!(kk_catalog_resolve(cat, c("cuntz:4").as_ptr(), &mut t), KkStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(kk_compute(t, c("torsion").as_ptr(), &mut out), KkStatus::Ok);
        let r: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(r["items"][1]["data"]["summary"], "Z/3");

        assert_eq!(kk_compute(t, c("mod:6").as_ptr(), &mut out), KkStatus::Ok);
        let r: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(r["items"][0]["data"]["group"]["torsion"][0], 3);

        kk_theory_free(t);
        kk_catalog_free(cat);
    }
}

#[test]
fn theory_json_round_trip() {
    unsafe {
        let json = c(r#"{"name": "z6", "period": 2, "groups": {"0": {"rank": 0, "torsion": [6]}, "1": {"rank": 1}}}"#);
        let mut t = ptr::null_mut();
        assert_eq!(kk_theory_from_json(json.as_ptr(), &mut t), KkStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(kk_theory_to_json(t, &mut out), KkStatus::Ok);
        let back = take(out);
        let mut t2 = ptr::null_mut();
        assert_eq!(kk_theory_from_json(c(&back).as_ptr(), &mut t2), KkStatus::Ok);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        kk_compute(t, c("rational").as_ptr(), &mut a);
        kk_compute(t2, c("rational").as_ptr(), &mut b);
        assert_eq!(take(a), take(b));
        kk_theory_free(t);
        kk_theory_free(t2);
    }
}

#[test]
fn verify_matches_the_library() {
    unsafe {
        let cat = builtin();
        let mut out = ptr::null_mut();
        let opts = c(r#"{"suite": "mod-q", "q_max": 12}"#);
        assert_eq!(kk_verify(cat, opts.as_ptr(), &mut out), KkStatus::Ok);
        let via_ffi = take(out);
        let args = kkcoeff::cli::VerifyArgs {
            suite: Some(kkcoeff::cli::Suite::ModQ),
            q_max: 12,
            ..Default::default()
        };
        let direct = kkcoeff::cli::verify(&kkcoeff::theory::Catalog::builtin(), &args).unwrap();
        assert_eq!(via_ffi, direct.report.to_json());
        kk_catalog_free(cat);
    }
}

#[test]
fn check_transform_statuses() {
    unsafe {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures/");
        let read = |n: &str| c(&std::fs::read_to_string(format!("{dir}{n}.json")).unwrap());
        let mut out = ptr::null_mut();
        assert_eq!(kk_check_transform(read("times_two").as_ptr(), &mut out), KkStatus::Ok);
        let r: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(r["items"][0]["data"]["summary"], "integral NO, rational YES, torsion NO, mod-p NO");

        out = ptr::null_mut();
        assert_eq!(kk_check_transform(read("corrupted").as_ptr(), &mut out), KkStatus::InvalidInput);
        assert!(out.is_null());
        assert!(last_error().contains("generator 0"));
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let cat = builtin();
        let mut t = ptr::null_mut();
        assert_eq!(kk_catalog_resolve(cat, c("nope").as_ptr(), &mut t), KkStatus::InvalidInput);
        assert!(last_error().contains("nope"));
        assert!(t.is_null());

        assert_eq!(kk_catalog_resolve(ptr::null(), c("point").as_ptr(), &mut t), KkStatus::InvalidArgument);
        assert_eq!(kk_catalog_resolve(cat, ptr::null(), &mut t), KkStatus::InvalidArgument);
        assert_eq!(kk_catalog_resolve(cat, c("point").as_ptr(), ptr::null_mut()), KkStatus::InvalidArgument);

        let mut out = ptr::null_mut();
        assert_eq!(kk_verify(cat, c(r#"{"q_max": 1}"#).as_ptr(), &mut out), KkStatus::InvalidArgument);
        assert!(last_error().contains("q-max"));
        assert_eq!(kk_verify(cat, c(r#"{"suite": "bogus"}"#).as_ptr(), &mut out), KkStatus::InvalidArgument);
        assert_eq!(kk_verify(cat, c(r#"{"qmax": 3}"#).as_ptr(), &mut out), KkStatus::InvalidArgument);

        assert_eq!(kk_catalog_resolve(cat, c("point").as_ptr(), &mut t), KkStatus::Ok);
        assert!(kk_last_error().is_null());
        assert_eq!(kk_compute(t, c("mod:1").as_ptr(), &mut out), KkStatus::InvalidArgument);
        let bad = [0xffu8, 0];
        assert_eq!(kk_compute(t, bad.as_ptr().cast(), &mut out), KkStatus::InvalidArgument);
        assert!(last_error().contains("UTF-8"));

        let mut c2 = ptr::null_mut();
        assert_eq!(kk_catalog_from_json(c("[{").as_ptr(), &mut c2), KkStatus::InvalidInput);
        assert_eq!(kk_catalog_len(ptr::null()), 0);
        assert_eq!(kk_catalog_name(cat, 10_000, &mut out), KkStatus::InvalidArgument);

        kk_theory_free(t);
        kk_catalog_free(cat);
        kk_catalog_free(ptr::null_mut());
        kk_string_free(ptr::null_mut());
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut t = ptr::null_mut();
        kk_theory_from_json(c("{}").as_ptr(), &mut t);
        assert!(!kk_last_error().is_null());
        std::thread::spawn(|| assert!(kk_last_error().is_null())).join().unwrap();
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(kk_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
