use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use frontal_kit_ffi::*;

fn parse(text: &str) -> *mut FkGerm {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { fk_germ_parse(c.as_ptr(), &mut g) }, FkStatus::Ok);
    g
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(fk_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { fk_string_free(p) };
    s
}

#[test]
fn parse_and_print() {
    let g = parse("curve R->R^3: t, t^2,t^3");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fk_germ_to_string(g, &mut s) }, FkStatus::Ok);
    assert_eq!(take_string(s), "curve R->R^3: t, t^2, t^3");
    unsafe { fk_germ_free(g) };
}

#[test]
fn parse_error_sets_message() {
    let c = CString::new("curve R->R^2: t").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { fk_germ_parse(c.as_ptr(), &mut g) },
        FkStatus::Parse
    );
    assert!(g.is_null());
    assert!(last_error().contains("declared R^2"), "{}", last_error());
}

#[test]
fn null_arguments() {
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { fk_germ_parse(ptr::null(), &mut g) },
        FkStatus::InvalidArgument
    );
    let c = CString::new("curve R->R^1: t").unwrap();
    assert_eq!(
        unsafe { fk_germ_parse(c.as_ptr(), ptr::null_mut()) },
        FkStatus::InvalidArgument
    );
    let mut cls = FkSingularity::Regular;
    assert_eq!(
        unsafe { fk_classify_surface(ptr::null(), &mut cls) },
        FkStatus::InvalidArgument
    );
    unsafe {
        fk_germ_free(ptr::null_mut());
        fk_string_free(ptr::null_mut());
    }
}

#[test]
fn normal_forms_classify() {
    let cases = [
        (FkNormalForm::CuspidalEdge, 3, FkSingularity::CuspidalEdge),
        (FkNormalForm::Swallowtail, 3, FkSingularity::Swallowtail),
        (
            FkNormalForm::FoldedUmbrella,
            3,
            FkSingularity::FoldedUmbrella,
        ),
        (
            FkNormalForm::OpenSwallowtail,
            4,
            FkSingularity::OpenSwallowtail,
        ),
        (FkNormalForm::WhitneyCusp, 2, FkSingularity::WhitneyCusp),
        (FkNormalForm::Fold, 2, FkSingularity::Fold),
        (FkNormalForm::MondSurface, 3, FkSingularity::Degenerate),
    ];
    for (form, m, want) in cases {
        let mut g = ptr::null_mut();
        assert_eq!(unsafe { fk_normal_form(form, m, &mut g) }, FkStatus::Ok);
        let mut cls = FkSingularity::Regular;
        assert_eq!(unsafe { fk_classify_surface(g, &mut cls) }, FkStatus::Ok);
        assert_eq!(cls, want, "{form:?}");
        unsafe { fk_germ_free(g) };
    }
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { fk_normal_form(FkNormalForm::OpenSwallowtail, 3, &mut g) },
        FkStatus::Precondition
    );
}

#[test]
fn curve_type_buffer() {
    let g = parse("curve R->R^3: t, t^2, t^4");
    let mut buf = [0u32; 3];
    let mut len = 0;
    assert_eq!(
        unsafe { fk_curve_type(g, 8, buf.as_mut_ptr(), 3, &mut len) },
        FkStatus::Ok
    );
    assert_eq!((len, buf), (3, [1, 2, 4]));
    assert_eq!(
        unsafe { fk_curve_type(g, 8, buf.as_mut_ptr(), 2, &mut len) },
        FkStatus::InvalidArgument
    );
    assert_eq!(len, 3);
    unsafe { fk_germ_free(g) };

    let flat = parse("curve R->R^3: t, t^2, 0");
    assert_eq!(
        unsafe { fk_curve_type(flat, 8, buf.as_mut_ptr(), 3, &mut len) },
        FkStatus::Precondition
    );
    unsafe { fk_germ_free(flat) };
}

#[test]
fn tangent_and_analyze() {
    let g = parse("curve R->R^3: t, t^2, t^3");
    let mut tan = ptr::null_mut();
    assert_eq!(unsafe { fk_tangent_surface(g, &mut tan) }, FkStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fk_analyze_json(tan, &mut s) }, FkStatus::Ok);
    let json = take_string(s);
    assert!(json.contains("\"schema\": 1"));
    assert!(json.contains("\"class\": \"CuspidalEdge\""));
    let mut surf = ptr::null_mut();
    assert_eq!(
        unsafe { fk_tangent_surface(tan, &mut surf) },
        FkStatus::Precondition
    );
    unsafe {
        fk_germ_free(tan);
        fk_germ_free(g);
    }
}

#[test]
fn openings_member() {
    let g = parse("curve R->R^1: t^3");
    for (h, want) in [("t^5", true), ("t^2", false), ("1", true)] {
        let h = CString::new(h).unwrap();
        let mut out = false;
        assert_eq!(
            unsafe { fk_openings_member(g, h.as_ptr(), 12, &mut out) },
            FkStatus::Ok
        );
        assert_eq!(out, want);
    }
    let h = CString::new("s").unwrap();
    let mut out = false;
    assert_eq!(
        unsafe { fk_openings_member(g, h.as_ptr(), 12, &mut out) },
        FkStatus::Parse
    );
    unsafe { fk_germ_free(g) };
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn cc() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
}

#[test]
fn c_program_links_against_staticlib() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler on PATH; C smoke test not run");
        return;
    };
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libfrontal_kit_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
