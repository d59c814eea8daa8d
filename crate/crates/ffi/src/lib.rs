//! C ABI over `nilreg`.
//!
//! Every function returns a [`NilregStatus`]; on failure the message is kept per thread and
//! read with [`nilreg_last_error`]. Handles are opaque and owned by the caller, who frees
//! them with the matching `*_free` function. Strings returned through `char **` are freed
//! with [`nilreg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nilreg::catalog::{self, Catalog};
use nilreg::critreg::{crit_interval, CritValue};
use nilreg::group::GroupError;
use nilreg::growth::{bass_guivarch, relative_degree, schreier_degree};
use nilreg::realize::{self, auto_system_min_j, holder_constant, Realization, SysPoint};
use nilreg::wordmetric::{ball_with, BallOptions, GenSet};
use nilreg::Error;
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NilregStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Unknown name or malformed catalog data.
    Catalog = 3,
    Budget = 4,
    Domain = 5,
    Config = 6,
    Truncation = 7,
    Verification = 8,
    Numerical = 9,
    /// The output buffer is too small.
    BufferTooSmall = 10,
    Io = 11,
    /// Any other library error, or a caught panic.
    Internal = 12,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: NilregStatus, msg: impl Into<String>) -> NilregStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &Error) -> NilregStatus {
    match e {
        Error::Group(_) => NilregStatus::Catalog,
        Error::Budget { .. } => NilregStatus::Budget,
        Error::Domain(_) => NilregStatus::Domain,
        Error::Config(_) | Error::InsufficientData(_) => NilregStatus::Config,
        Error::Truncation(_) => NilregStatus::Truncation,
        Error::Verification { .. } => NilregStatus::Verification,
        Error::Numerical(_) => NilregStatus::Numerical,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => NilregStatus::Io,
        _ => NilregStatus::Internal,
    }
}

/// Runs `f`, recording errors and caught panics.
fn guard(f: impl FnOnce() -> Result<(), (NilregStatus, String)>) -> NilregStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NilregStatus::Ok
        }
        Ok(Err((s, m))) => fail(s, m),
        Err(_) => fail(NilregStatus::Internal, "panic inside nilreg"),
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (NilregStatus, String)>;
}

impl<T> IntoFfi<T> for Result<T, Error> {
    fn ffi(self) -> Result<T, (NilregStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

impl<T> IntoFfi<T> for Result<T, GroupError> {
    fn ffi(self) -> Result<T, (NilregStatus, String)> {
        self.map_err(|e| (NilregStatus::Catalog, e.to_string()))
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (NilregStatus, String)> {
    if p.is_null() {
        return Err((NilregStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (NilregStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (NilregStatus, String)> {
    p.as_mut().ok_or_else(|| (NilregStatus::NullPointer, format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, (NilregStatus, String)> {
    p.as_ref().ok_or_else(|| (NilregStatus::NullPointer, format!("{what} is null")))
}

/// A group catalog.
pub struct NilregCatalog {
    inner: CatalogRef,
}

enum CatalogRef {
    Builtin(&'static Catalog),
    Owned(Catalog),
}

impl NilregCatalog {
    fn get(&self) -> &Catalog {
        match &self.inner {
            CatalogRef::Builtin(c) => c,
            CatalogRef::Owned(c) => c,
        }
    }
}

/// An interval realization.
pub struct NilregSystem {
    inner: Realization,
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn nilreg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn nilreg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The shipped catalog.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nilreg_catalog_builtin(out: *mut *mut NilregCatalog) -> NilregStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(NilregCatalog {
            inner: CatalogRef::Builtin(catalog::builtin()),
        }));
        Ok(())
    })
}

/// Parses a catalog JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nilreg_catalog_from_json(json: *const c_char, out: *mut *mut NilregCatalog) -> NilregStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let out = out_arg(out, "out")?;
        let cat = Catalog::from_json(text).ffi()?;
        *out = Box::into_raw(Box::new(NilregCatalog {
            inner: CatalogRef::Owned(cat),
        }));
        Ok(())
    })
}

/// # Safety
/// `cat` must come from a `nilreg_catalog_*` constructor or be null.
#[no_mangle]
pub unsafe extern "C" fn nilreg_catalog_free(cat: *mut NilregCatalog) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Hex SHA-256 of the catalog source, as a string to free with `nilreg_string_free`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nilreg_catalog_hash(cat: *const NilregCatalog, out: *mut *mut c_char) -> NilregStatus {
    guard(|| {
        let cat = handle(cat, "catalog")?;
        let out = out_arg(out, "out")?;
        *out = CString::new(cat.get().content_hash()).expect("hex").into_raw();
        Ok(())
    })
}

/// `D_G` of a catalog group.
///
/// # Safety
/// Pointers must be valid and `group` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn nilreg_bass_guivarch(cat: *const NilregCatalog, group: *const c_char, out: *mut usize) -> NilregStatus {
    guard(|| {
        let g = handle(cat, "catalog")?.get().group(str_arg(group, "group")?).ffi()?;
        *out_arg(out, "out")? = bass_guivarch(g);
        Ok(())
    })
}

/// `D_{H;G}` and `gr(G/H)` for a catalog subgroup.
///
/// # Safety
/// Pointers must be valid and names nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn nilreg_subgroup_degrees(
    cat: *const NilregCatalog,
    group: *const c_char,
    subgroup: *const c_char,
    relative: *mut usize,
    schreier: *mut usize,
) -> NilregStatus {
    guard(|| {
        let g = handle(cat, "catalog")?.get().group(str_arg(group, "group")?).ffi()?;
        let s = g.subgroup(str_arg(subgroup, "subgroup")?).ffi()?;
        let (r, q) = (relative_degree(g, s).ffi()?, schreier_degree(g, s).ffi()?);
        *out_arg(relative, "relative")? = r;
        *out_arg(schreier, "schreier")? = q;
        Ok(())
    })
}

/// Critical regularity as `num/den`; `den = 0` means unbounded.
///
/// # Safety
/// Pointers must be valid and `group` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn nilreg_crit(
    cat: *const NilregCatalog,
    group: *const c_char,
    num: *mut i64,
    den: *mut i64,
) -> NilregStatus {
    guard(|| {
        let g = handle(cat, "catalog")?.get().group(str_arg(group, "group")?).ffi()?;
        let (p, q) = match crit_interval(g).ffi()?.value {
            CritValue::Finite(r) => (
                r.numer().to_i64().ok_or((NilregStatus::Numerical, "numerator overflow".to_string()))?,
                r.denom().to_i64().ok_or((NilregStatus::Numerical, "denominator overflow".to_string()))?,
            ),
            CritValue::Unbounded => (1, 0),
        };
        *out_arg(num, "num")? = p;
        *out_arg(den, "den")? = q;
        Ok(())
    })
}

/// Cumulative ball counts `#B_0 .. #B_radius` into `buf`, which must hold `radius + 1` entries.
/// `max_elements = 0` means no cap.
///
/// # Safety
/// `buf` must point to `len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn nilreg_ball_counts(
    cat: *const NilregCatalog,
    group: *const c_char,
    radius: usize,
    max_elements: usize,
    buf: *mut u64,
    len: usize,
) -> NilregStatus {
    guard(|| {
        let g = handle(cat, "catalog")?.get().group(str_arg(group, "group")?).ffi()?;
        if len < radius + 1 {
            return Err((NilregStatus::BufferTooSmall, format!("need {} entries, got {len}", radius + 1)));
        }
        if buf.is_null() {
            return Err((NilregStatus::NullPointer, "buf is null".into()));
        }
        let opts = BallOptions {
            max_elements: (max_elements > 0).then_some(max_elements),
            workers: None,
        };
        let b = ball_with(&GenSet::from_spec(g).ffi()?, radius, &opts).ffi()?;
        let out = std::slice::from_raw_parts_mut(buf, len);
        for (o, &c) in out.iter_mut().zip(b.counts()) {
            *o = c as u64;
        }
        Ok(())
    })
}

/// Time-`t` map of the flow of `x(1-x)^2` and its derivative.
///
/// # Safety
/// `value` and `derivative` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn nilreg_flow(t: f64, x: f64, value: *mut f64, derivative: *mut f64) -> NilregStatus {
    guard(|| {
        let (y, d) = realize::flow::flow_with_derivative(t, x).ffi()?;
        *out_arg(value, "value")? = y;
        *out_arg(derivative, "derivative")? = d;
        Ok(())
    })
}

/// Builds a realization with automatic parameters and `J >= min_j`.
///
/// # Safety
/// Pointers must be valid and names nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn nilreg_system_build(
    cat: *const NilregCatalog,
    group: *const c_char,
    witness: *const c_char,
    radius: usize,
    alpha: f64,
    min_j: i64,
    out: *mut *mut NilregSystem,
) -> NilregStatus {
    guard(|| {
        let g = handle(cat, "catalog")?.get().group(str_arg(group, "group")?).ffi()?;
        let w = str_arg(witness, "witness")?;
        let out = out_arg(out, "out")?;
        let sys = auto_system_min_j(g, w, radius, alpha, min_j).ffi()?;
        *out = Box::into_raw(Box::new(NilregSystem { inner: sys }));
        Ok(())
    })
}

/// # Safety
/// `sys` must come from `nilreg_system_build` or be null.
#[no_mangle]
pub unsafe extern "C" fn nilreg_system_free(sys: *mut NilregSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of cosets, `J`, and the identity coset.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nilreg_system_shape(
    sys: *const NilregSystem,
    cosets: *mut usize,
    j_max: *mut i64,
    identity: *mut usize,
) -> NilregStatus {
    guard(|| {
        let s = &handle(sys, "system")?.inner;
        *out_arg(cosets, "cosets")? = s.cosets();
        *out_arg(j_max, "j_max")? = s.j_max();
        *out_arg(identity, "identity")? = s.identity_coset();
        Ok(())
    })
}

/// Index of a letter by name (`e`, `a`, `a^-1`, ...).
///
/// # Safety
/// Pointers must be valid and `name` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn nilreg_system_letter(sys: *const NilregSystem, name: *const c_char, out: *mut usize) -> NilregStatus {
    guard(|| {
        let s = &handle(sys, "system")?.inner;
        let name = str_arg(name, "name")?;
        let k = s
            .letters()
            .index_of(name)
            .ok_or_else(|| (NilregStatus::Catalog, format!("unknown letter {name}; available: {}", s.letters().names().join(", "))))?;
        *out_arg(out, "out")? = k;
        Ok(())
    })
}

fn point(s: &Realization, v: usize, j: i64, u: f64) -> Result<SysPoint, (NilregStatus, String)> {
    if v >= s.cosets() || j.abs() > s.j_max() || !(0.0..=1.0).contains(&u) {
        return Err((NilregStatus::Domain, format!("point (v={v}, j={j}, u={u}) is outside the system")));
    }
    Ok(SysPoint { v, j, u })
}

/// Applies letter `k` to the point `(v, j, u)` and returns the image and the derivative there.
/// Edges leaving the truncation are an error.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nilreg_system_apply(
    sys: *const NilregSystem,
    k: usize,
    v: usize,
    j: i64,
    u: f64,
    out_v: *mut usize,
    out_j: *mut i64,
    out_u: *mut f64,
    derivative: *mut f64,
) -> NilregStatus {
    guard(|| {
        let s = &handle(sys, "system")?.inner;
        if k >= s.letters().len() {
            return Err((NilregStatus::Domain, format!("letter index {k} out of range")));
        }
        let (q, d) = s.apply_letter_strict(k, &point(s, v, j, u)?).ffi()?;
        *out_arg(out_v, "out_v")? = q.v;
        *out_arg(out_j, "out_j")? = q.j;
        *out_arg(out_u, "out_u")? = q.u;
        *out_arg(derivative, "derivative")? = d;
        Ok(())
    })
}

/// Position of `(v, j, u)` in `[0, total length]`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nilreg_system_position(sys: *const NilregSystem, v: usize, j: i64, u: f64, out: *mut f64) -> NilregStatus {
    guard(|| {
        let s = &handle(sys, "system")?.inner;
        *out_arg(out, "out")? = s.global_x(&point(s, v, j, u)?);
        Ok(())
    })
}

/// Estimated Hölder constant of `Dk` on `I_v`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nilreg_system_holder(
    sys: *const NilregSystem,
    k: usize,
    v: usize,
    alpha: f64,
    nodes: usize,
    out: *mut f64,
) -> NilregStatus {
    guard(|| {
        let s = &handle(sys, "system")?.inner;
        if k >= s.letters().len() || v >= s.cosets() {
            return Err((NilregStatus::Domain, format!("letter {k} or coset {v} out of range")));
        }
        *out_arg(out, "out")? = holder_constant(s, k, v, alpha, nodes).ffi()?.kappa;
        Ok(())
    })
}

/// The system layout as JSON, to free with `nilreg_string_free`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nilreg_system_json(sys: *const NilregSystem, out: *mut *mut c_char) -> NilregStatus {
    guard(|| {
        let s = &handle(sys, "system")?.inner;
        let degree = realize::fit_cocycle_degree(s.cocycle()).ffi()?.degree;
        let text = serde_json::to_string(&s.to_file(degree)).map_err(|e| (NilregStatus::Internal, e.to_string()))?;
        *out_arg(out, "out")? = CString::new(text).expect("json has no nul").into_raw();
        Ok(())
    })
}
