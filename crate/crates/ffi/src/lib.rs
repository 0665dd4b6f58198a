//! C ABI for frontal-kit.
//!
//! Germs cross the boundary as opaque `FkGerm` handles. Every call returns an
//! `FkStatus`; on failure `fk_last_error_message` describes the error for the
//! calling thread. Strings handed out by the library are released with
//! `fk_string_free`, germs with `fk_germ_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use frontal_kit::classifier::{classify_surface, SingularityTag};
use frontal_kit::cli::report;
use frontal_kit::curve_analysis::{curve_type, CurveType};
use frontal_kit::germs::{normal_form, parse_germ, parse_poly, MapGerm, NormalFormTag};
use frontal_kit::openings::ramification_member;
use frontal_kit::scalar::zero;
use frontal_kit::tangent_surfaces::{tangent_surface_affine, Connection};
use frontal_kit::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FkStatus {
    Ok = 0,
    /// Null pointer, invalid UTF-8 or a buffer that is too small.
    InvalidArgument = 1,
    Parse = 2,
    /// The input does not satisfy the operation's preconditions.
    Precondition = 3,
    Internal = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FkNormalForm {
    CuspidalEdge = 0,
    Swallowtail = 1,
    FoldedUmbrella = 2,
    OpenSwallowtail = 3,
    OpenFoldedUmbrella = 4,
    WhitneyCusp = 5,
    Fold = 6,
    MondSurface = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FkSingularity {
    Regular = 0,
    Fold = 1,
    CuspidalEdge = 2,
    FoldedUmbrella = 3,
    WhitneyCusp = 4,
    Swallowtail = 5,
    OpenSwallowtail = 6,
    OpeningOfFold = 7,
    OpeningOfWhitneyCusp = 8,
    Degenerate = 9,
    Unrecognized = 10,
}

/// Opaque germ handle.
pub struct FkGerm {
    germ: MapGerm,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(FkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_code() {
            2 => FkStatus::Parse,
            3 => FkStatus::Precondition,
            _ => FkStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: &str) -> Failure {
    Failure(FkStatus::InvalidArgument, msg.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FkStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            FkStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(&format!("{what} is not UTF-8")))
}

unsafe fn germ_arg<'a>(p: *const FkGerm) -> Result<&'a MapGerm, Failure> {
    p.as_ref()
        .map(|g| &g.germ)
        .ok_or_else(|| invalid("germ is null"))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| invalid("output pointer is null"))
}

fn new_germ(germ: MapGerm) -> *mut FkGerm {
    Box::into_raw(Box::new(FkGerm { germ }))
}

fn new_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(FkStatus::Internal, "string contains NUL".into()))
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn fk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses germ DSL text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fk_germ_parse(text: *const c_char, out: *mut *mut FkGerm) -> FkStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        let g = parse_germ(str_arg(text, "text")?)?;
        *out = new_germ(g);
        Ok(())
    })
}

/// # Safety
/// `germ` must be null or a handle from this library that was not freed.
#[no_mangle]
pub unsafe extern "C" fn fk_germ_free(germ: *mut FkGerm) {
    if !germ.is_null() {
        drop(Box::from_raw(germ));
    }
}

/// Canonical DSL text of a germ.
///
/// # Safety
/// `germ` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fk_germ_to_string(germ: *const FkGerm, out: *mut *mut c_char) -> FkStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        *out = new_string(germ_arg(germ)?.to_canonical())?;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library that was not freed.
#[no_mangle]
pub unsafe extern "C" fn fk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Catalog normal form in `R^m`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fk_normal_form(
    form: FkNormalForm,
    m: usize,
    out: *mut *mut FkGerm,
) -> FkStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        let tag = match form {
            FkNormalForm::CuspidalEdge => NormalFormTag::CuspidalEdge,
            FkNormalForm::Swallowtail => NormalFormTag::Swallowtail,
            FkNormalForm::FoldedUmbrella => NormalFormTag::FoldedUmbrella,
            FkNormalForm::OpenSwallowtail => NormalFormTag::OpenSwallowtail,
            FkNormalForm::OpenFoldedUmbrella => NormalFormTag::OpenFoldedUmbrella,
            FkNormalForm::WhitneyCusp => NormalFormTag::WhitneyCusp,
            FkNormalForm::Fold => NormalFormTag::Fold,
            FkNormalForm::MondSurface => NormalFormTag::MondSurface,
        };
        *out = new_germ(normal_form(tag, m)?);
        Ok(())
    })
}

/// Tangent surface of a curve germ.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fk_tangent_surface(
    curve: *const FkGerm,
    out: *mut *mut FkGerm,
) -> FkStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        *out = new_germ(tangent_surface_affine(germ_arg(curve)?)?);
        Ok(())
    })
}

fn singularity(tag: SingularityTag) -> FkSingularity {
    match tag {
        SingularityTag::Regular => FkSingularity::Regular,
        SingularityTag::Fold => FkSingularity::Fold,
        SingularityTag::CuspidalEdge => FkSingularity::CuspidalEdge,
        SingularityTag::FoldedUmbrella => FkSingularity::FoldedUmbrella,
        SingularityTag::WhitneyCusp => FkSingularity::WhitneyCusp,
        SingularityTag::Swallowtail => FkSingularity::Swallowtail,
        SingularityTag::OpenSwallowtail => FkSingularity::OpenSwallowtail,
        SingularityTag::OpeningOfFold => FkSingularity::OpeningOfFold,
        SingularityTag::OpeningOfWhitneyCusp => FkSingularity::OpeningOfWhitneyCusp,
        SingularityTag::Degenerate => FkSingularity::Degenerate,
        SingularityTag::Unrecognized => FkSingularity::Unrecognized,
    }
}

/// Class of a surface germ at its base point, flat ambient connection.
///
/// # Safety
/// `germ` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fk_classify_surface(
    germ: *const FkGerm,
    out: *mut FkSingularity,
) -> FkStatus {
    guard(|| {
        let out = out_arg(out)?;
        let g = germ_arg(germ)?;
        *out = singularity(classify_surface(g, &Connection::flat(g.target_dim()))?.tag);
        Ok(())
    })
}

/// Type `(a_1, ..., a_m)` of a curve germ at 0, derivatives up to `cutoff`.
/// Writes up to `cap` entries to `out` and the full length to `len`; a
/// buffer shorter than the type gives `InvalidArgument` with `len` set.
///
/// # Safety
/// `out` must hold `cap` entries (or be null when `cap` is 0), `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fk_curve_type(
    curve: *const FkGerm,
    cutoff: u32,
    out: *mut u32,
    cap: usize,
    len: *mut usize,
) -> FkStatus {
    guard(|| {
        let len = out_arg(len)?;
        *len = 0;
        let g = germ_arg(curve)?;
        let a = match curve_type(g, &zero(), cutoff)? {
            CurveType::Finite(a) => a,
            CurveType::NotFiniteType { cutoff } => return Err(Error::NotFiniteType(cutoff).into()),
        };
        *len = a.len();
        if a.len() > cap || out.is_null() {
            return Err(invalid(&format!(
                "type has {} entries, buffer holds {cap}",
                a.len()
            )));
        }
        std::slice::from_raw_parts_mut(out, a.len()).copy_from_slice(&a);
        Ok(())
    })
}

/// JSON report (schema 1) as produced by `frontal-kit analyze`.
///
/// # Safety
/// `germ` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fk_analyze_json(germ: *const FkGerm, out: *mut *mut c_char) -> FkStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        *out = new_string(report::analyze(germ_arg(germ)?, None, false)?.to_json())?;
        Ok(())
    })
}

/// Whether `h` (text over the germ's source variables) lies in the
/// ramification module of `f`, truncated at degree `k`.
///
/// # Safety
/// `f` must be a live handle, `h` a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fk_openings_member(
    f: *const FkGerm,
    h: *const c_char,
    k: u32,
    out: *mut bool,
) -> FkStatus {
    guard(|| {
        let out = out_arg(out)?;
        let g = germ_arg(f)?;
        let h = parse_poly(str_arg(h, "h")?, g.kind().var_names())?;
        *out = ramification_member(&h, g, k)?;
        Ok(())
    })
}
