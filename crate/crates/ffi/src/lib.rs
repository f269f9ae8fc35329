//! C ABI for `conequant`.
//!
//! Samples, cones and regions cross the boundary as opaque handles that the
//! caller frees with the matching `cq_*_free`. Every function returns a
//! [`CqStatus`]; on failure [`cq_last_error`] describes the problem.
//! Results are written through out-pointers only on success.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conequant::dominance::fsd_dominates;
use conequant::empirical::{cone_cdf, joint_cdf, tukey_depth};
use conequant::io::{parse_cone_json, quantile_region_json, read_sample_csv, to_canonical_json};
use conequant::quantile::{lower_quantile_region, upper_quantile_region, QuantileRegion};
use conequant::risk::var_region;
use conequant::{Error, OrderingCone, ProbabilityLevel, Sample};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Parse = 3,
    InvalidCone = 4,
    LevelDomain = 5,
    Dimension = 6,
    Unsupported = 7,
    Io = 8,
    Panic = 9,
}

/// Weighted point cloud.
pub struct CqSample(Sample);

/// Ordering cone.
pub struct CqCone(OrderingCone);

/// Quantile or VaR region.
pub struct CqRegion(QuantileRegion);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CqStatus {
    match e {
        Error::InvalidCone(_) => CqStatus::InvalidCone,
        Error::LevelDomain(_) => CqStatus::LevelDomain,
        Error::Dimension { .. } => CqStatus::Dimension,
        Error::Parse { .. } | Error::Json(_) => CqStatus::Parse,
        Error::Unsupported(_) => CqStatus::Unsupported,
        Error::Io(_) => CqStatus::Io,
        _ => CqStatus::InvalidInput,
    }
}

struct Fail(CqStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type Out<T> = std::result::Result<T, Fail>;

fn null(what: &str) -> Fail {
    Fail(CqStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `f`, records any error or panic, and maps it to a status.
fn guard(f: impl FnOnce() -> Out<()>) -> CqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CqStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            CqStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Out<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Out<&'a [f64]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Out<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(CqStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Out<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failed call on this thread, or NULL after a
/// success. Valid until the next `cq_*` call on the same thread.
#[no_mangle]
pub extern "C" fn cq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a sample from `n` row-major points of dimension `dim`.
/// `weights` may be NULL for uniform weights; otherwise it holds `n`
/// nonnegative values summing to one.
#[no_mangle]
pub unsafe extern "C" fn cq_sample_new(
    coords: *const f64,
    n: usize,
    dim: usize,
    weights: *const f64,
    out: *mut *mut CqSample,
) -> CqStatus {
    guard(|| {
        let len = n.checked_mul(dim).ok_or_else(|| Fail(CqStatus::InvalidInput, "n * dim overflows".into()))?;
        let c = slice(coords, len, "coords")?.to_vec();
        let w = if weights.is_null() { None } else { Some(slice(weights, n, "weights")?.to_vec()) };
        let s = Sample::from_flat(dim, c, w)?;
        put(out, boxed(CqSample(s)), "out")
    })
}

/// Reads a sample CSV file with header `x1,...,xd[,weight]`.
#[no_mangle]
pub unsafe extern "C" fn cq_sample_read_csv(path: *const c_char, out: *mut *mut CqSample) -> CqStatus {
    guard(|| {
        let file = std::fs::File::open(text(path, "path")?).map_err(Error::from)?;
        put(out, boxed(CqSample(read_sample_csv(file)?)), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn cq_sample_dim(s: *const CqSample) -> usize {
    s.as_ref().map_or(0, |s| s.0.dim())
}

#[no_mangle]
pub unsafe extern "C" fn cq_sample_len(s: *const CqSample) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn cq_sample_free(s: *mut CqSample) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// The nonnegative orthant in dimension `dim`.
#[no_mangle]
pub unsafe extern "C" fn cq_cone_orthant(dim: usize, out: *mut *mut CqCone) -> CqStatus {
    guard(|| put(out, boxed(CqCone(OrderingCone::orthant(dim)?)), "out"))
}

/// Parses a cone JSON document such as `{"kind":"generators2d",
/// "vectors":[[1,0],[1,2]]}` for samples of dimension `dim`.
#[no_mangle]
pub unsafe extern "C" fn cq_cone_from_json(json: *const c_char, dim: usize, out: *mut *mut CqCone) -> CqStatus {
    guard(|| put(out, boxed(CqCone(parse_cone_json(text(json, "json")?, dim)?)), "out"))
}

#[no_mangle]
pub unsafe extern "C" fn cq_cone_free(c: *mut CqCone) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Cone distribution function of `s` at the point `z` of length `dim`.
#[no_mangle]
pub unsafe extern "C" fn cq_cone_cdf(
    s: *const CqSample,
    c: *const CqCone,
    z: *const f64,
    dim: usize,
    out: *mut f64,
) -> CqStatus {
    guard(|| {
        let v = cone_cdf(&get(s, "sample")?.0, &get(c, "cone")?.0, slice(z, dim, "z")?)?;
        put(out, v, "out")
    })
}

/// Halfspace (Tukey) depth of `z`.
#[no_mangle]
pub unsafe extern "C" fn cq_tukey_depth(s: *const CqSample, z: *const f64, dim: usize, out: *mut f64) -> CqStatus {
    guard(|| put(out, tukey_depth(&get(s, "sample")?.0, slice(z, dim, "z")?)?, "out"))
}

/// Componentwise joint distribution function at `z`.
#[no_mangle]
pub unsafe extern "C" fn cq_joint_cdf(s: *const CqSample, z: *const f64, dim: usize, out: *mut f64) -> CqStatus {
    guard(|| put(out, joint_cdf(&get(s, "sample")?.0, slice(z, dim, "z")?)?, "out"))
}

fn level(p: f64) -> Out<ProbabilityLevel> {
    Ok(ProbabilityLevel::new(p)?)
}

/// Lower quantile region `{z : F(z) >= p}`.
#[no_mangle]
pub unsafe extern "C" fn cq_lower_quantile_region(
    s: *const CqSample,
    c: *const CqCone,
    p: f64,
    out: *mut *mut CqRegion,
) -> CqStatus {
    guard(|| {
        let r = lower_quantile_region(&get(s, "sample")?.0, &get(c, "cone")?.0, level(p)?)?;
        put(out, boxed(CqRegion(r)), "out")
    })
}

/// Upper quantile region at level `p`.
#[no_mangle]
pub unsafe extern "C" fn cq_upper_quantile_region(
    s: *const CqSample,
    c: *const CqCone,
    p: f64,
    out: *mut *mut CqRegion,
) -> CqStatus {
    guard(|| {
        let r = upper_quantile_region(&get(s, "sample")?.0, &get(c, "cone")?.0, level(p)?)?;
        put(out, boxed(CqRegion(r)), "out")
    })
}

/// Set-valued Value at Risk at level `alpha` in `(0, 1]`.
#[no_mangle]
pub unsafe extern "C" fn cq_var_region(
    s: *const CqSample,
    c: *const CqCone,
    alpha: f64,
    out: *mut *mut CqRegion,
) -> CqStatus {
    guard(|| {
        let r = var_region(&get(s, "sample")?.0, &get(c, "cone")?.0, level(alpha)?)?;
        put(out, boxed(CqRegion(r.region)), "out")
    })
}

/// Writes whether `z` lies in the region.
#[no_mangle]
pub unsafe extern "C" fn cq_region_contains(r: *const CqRegion, z: *const f64, dim: usize, out: *mut bool) -> CqStatus {
    guard(|| {
        let r = &get(r, "region")?.0;
        if dim != r.dim() {
            return Err(Error::Dimension { expected: r.dim(), found: dim }.into());
        }
        put(out, r.contains(slice(z, dim, "z")?), "out")
    })
}

/// Canonical JSON of the region. Free the string with [`cq_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cq_region_to_json(r: *const CqRegion, out: *mut *mut c_char) -> CqStatus {
    guard(|| {
        let json = to_canonical_json(&quantile_region_json(&get(r, "region")?.0)?)?;
        let c = CString::new(json).expect("JSON has no NUL bytes");
        put(out, c.into_raw(), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn cq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn cq_region_free(r: *mut CqRegion) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// First-order dominance of `y` over `x` in the cone order. `exact` is
/// false for the grid check used in dimension three and up. When `z_out`
/// is not NULL and dominance fails, the counterexample point is written to
/// its first `dim` entries.
#[no_mangle]
pub unsafe extern "C" fn cq_fsd(
    y: *const CqSample,
    x: *const CqSample,
    c: *const CqCone,
    dominates: *mut bool,
    exact: *mut bool,
    z_out: *mut f64,
) -> CqStatus {
    guard(|| {
        let v = fsd_dominates(&get(y, "y")?.0, &get(x, "x")?.0, &get(c, "cone")?.0)?;
        put(dominates, v.dominates, "dominates")?;
        if !exact.is_null() {
            exact.write(v.exact);
        }
        if let (false, Some(ce)) = (z_out.is_null(), &v.counterexample) {
            ptr::copy_nonoverlapping(ce.z.as_ptr(), z_out, ce.z.len());
        }
        Ok(())
    })
}
