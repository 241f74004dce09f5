//! C ABI over the mkdv library.
//!
//! Scattering data lives behind the opaque `MkdvScatteringData` handle. Every
//! fallible call returns an `MkdvStatus`; on failure the message is available
//! from `mkdv_last_error_message` on the same thread. Output arrays are
//! caller-allocated.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use mkdv::asymptotics::{region1_generic, RegionOptions};
use mkdv::cli::{asymptote, FrameSelector};
use mkdv::evolve::{init_state, run, RunParams};
use mkdv::reflectionless::reconstruct_profile;
use mkdv::scattering::{scatter, DiscreteEigenpair, PotentialSample, ScatteringData, ZGrid};
use mkdv::{Complex64, Error};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MkdvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    Numerical = 5,
    Panic = 6,
}

/// Opaque scattering data handle.
pub struct MkdvScatteringData {
    inner: ScatteringData,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> MkdvStatus {
    match err {
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => MkdvStatus::Parse,
        Error::Io(_) => MkdvStatus::Io,
        e if e.is_input_error() => MkdvStatus::InvalidArgument,
        _ => MkdvStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (MkdvStatus, String)>) -> MkdvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MkdvStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside mkdv".into());
            MkdvStatus::Panic
        }
    }
}

fn lib(err: Error) -> (MkdvStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (MkdvStatus, String) {
    (MkdvStatus::NullPointer, format!("{what} is null"))
}

unsafe fn input<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], (MkdvStatus, String)> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, n))
}

unsafe fn output<'a>(p: *mut f64, n: usize, what: &str) -> Result<&'a mut [f64], (MkdvStatus, String)> {
    if n == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, n))
}

unsafe fn handle<'a>(data: *const MkdvScatteringData) -> Result<&'a ScatteringData, (MkdvStatus, String)> {
    data.as_ref().map(|d| &d.inner).ok_or_else(|| null("data"))
}

unsafe fn give(out: *mut *mut MkdvScatteringData, inner: ScatteringData) {
    *out = Box::into_raw(Box::new(MkdvScatteringData { inner }));
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mkdv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mkdv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Empty reflectionless data (no modes, r ≡ 0) at t = 0.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn mkdv_data_new_reflectionless(out: *mut *mut MkdvScatteringData) -> MkdvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        give(out, ScatteringData::reflectionless(vec![], vec![]));
        Ok(())
    })
}

/// Adds a soliton with eigenvalue iζ and norming constant c.
///
/// # Safety
/// `data` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mkdv_data_add_soliton(data: *mut MkdvScatteringData, zeta: f64, c_re: f64, c_im: f64) -> MkdvStatus {
    guard(|| {
        let d = data.as_mut().ok_or_else(|| null("data"))?;
        if !(zeta > 0.0 && zeta.is_finite()) {
            return Err((MkdvStatus::InvalidArgument, format!("zeta = {zeta} must be positive")));
        }
        d.inner.solitons.push(DiscreteEigenpair::soliton(zeta, Complex64::new(c_re, c_im)));
        d.inner.sort();
        Ok(())
    })
}

/// Adds a breather with eigenvalue ξ + iη (ξ, η > 0) and norming constant c.
///
/// # Safety
/// `data` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mkdv_data_add_breather(
    data: *mut MkdvScatteringData,
    xi: f64,
    eta: f64,
    c_re: f64,
    c_im: f64,
) -> MkdvStatus {
    guard(|| {
        let d = data.as_mut().ok_or_else(|| null("data"))?;
        if !(xi > 0.0 && eta > 0.0 && xi.is_finite() && eta.is_finite()) {
            return Err((MkdvStatus::InvalidArgument, format!("breather ({xi}, {eta}) must have xi, eta > 0")));
        }
        d.inner.breathers.push(DiscreteEigenpair::breather(xi, eta, Complex64::new(c_re, c_im)));
        d.inner.sort();
        Ok(())
    })
}

/// Direct scattering of u sampled on the uniform grid x (n points) with a
/// reflection grid of `nz` nodes on [−zmax, zmax].
///
/// # Safety
/// `x` and `u` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mkdv_scatter(
    x: *const f64,
    u: *const f64,
    n: usize,
    zmax: f64,
    nz: usize,
    out: *mut *mut MkdvScatteringData,
) -> MkdvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let x = input(x, n, "x")?;
        let u = input(u, n, "u")?;
        let pot = PotentialSample::new(x, u.to_vec()).map_err(lib)?;
        let d = scatter(&pot, &ZGrid::symmetric(zmax, nz)).map_err(lib)?;
        give(out, d);
        Ok(())
    })
}

/// Parses scattering data JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mkdv_data_from_json(json: *const c_char, out: *mut *mut MkdvScatteringData) -> MkdvStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(json).to_str().map_err(|e| (MkdvStatus::Parse, e.to_string()))?;
        give(out, mkdv::io::data_from_json(s).map_err(lib)?);
        Ok(())
    })
}

/// Serializes to JSON. Free the string with `mkdv_string_free`.
///
/// # Safety
/// `data` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mkdv_data_to_json(data: *const MkdvScatteringData, out: *mut *mut c_char) -> MkdvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = mkdv::io::data_to_json(handle(data)?).map_err(lib)?;
        *out = CString::new(s).map_err(|e| (MkdvStatus::Parse, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mkdv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `data` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mkdv_data_free(data: *mut MkdvScatteringData) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

/// Mode counts and the largest reflection-coefficient modulus.
///
/// # Safety
/// `data` must be a live handle; output pointers may be NULL.
#[no_mangle]
pub unsafe extern "C" fn mkdv_data_summary(
    data: *const MkdvScatteringData,
    n_solitons: *mut usize,
    n_breathers: *mut usize,
    max_abs_r: *mut f64,
) -> MkdvStatus {
    guard(|| {
        let d = handle(data)?;
        if let Some(p) = n_solitons.as_mut() {
            *p = d.solitons.len();
        }
        if let Some(p) = n_breathers.as_mut() {
            *p = d.breathers.len();
        }
        if let Some(p) = max_abs_r.as_mut() {
            *p = d.max_abs_r();
        }
        Ok(())
    })
}

/// Eigenvalue and norming constant of mode `k` (solitons first, then breathers).
///
/// # Safety
/// `data` must be a live handle; `out` must point to 4 doubles
/// (Re z, Im z, Re c, Im c).
#[no_mangle]
pub unsafe extern "C" fn mkdv_data_mode(data: *const MkdvScatteringData, k: usize, out: *mut f64) -> MkdvStatus {
    guard(|| {
        let d = handle(data)?;
        let o = output(out, 4, "out")?;
        let p = d
            .modes()
            .nth(k)
            .ok_or_else(|| (MkdvStatus::InvalidArgument, format!("no mode with index {k}")))?;
        o.copy_from_slice(&[p.z.re, p.z.im, p.c.re, p.c.im]);
        Ok(())
    })
}

/// Reflectionless profile u(x_i, t) for the discrete part of the data.
///
/// # Safety
/// `xs` and `out` must point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn mkdv_reconstruct(
    data: *const MkdvScatteringData,
    t: f64,
    xs: *const f64,
    n: usize,
    out: *mut f64,
) -> MkdvStatus {
    guard(|| {
        let d = handle(data)?;
        let xs = input(xs, n, "xs")?;
        let o = output(out, n, "out")?;
        o.copy_from_slice(&reconstruct_profile(d, xs, t).map_err(lib)?);
        Ok(())
    })
}

/// Region I radiation value at (x, t), x < 0.
///
/// # Safety
/// `data` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mkdv_region1_generic(data: *const MkdvScatteringData, x: f64, t: f64, out: *mut f64) -> MkdvStatus {
    guard(|| {
        let d = handle(data)?;
        let o = out.as_mut().ok_or_else(|| null("out"))?;
        *o = region1_generic(x, t, d).map_err(lib)?;
        Ok(())
    })
}

/// Full long-time asymptotic profile with default region thresholds
/// scaled by `c2` and `frame_tol`.
///
/// # Safety
/// `xs` and `out` must point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn mkdv_asymptotic_profile(
    data: *const MkdvScatteringData,
    t: f64,
    xs: *const f64,
    n: usize,
    c2: f64,
    frame_tol: f64,
    out: *mut f64,
) -> MkdvStatus {
    guard(|| {
        let d = handle(data)?;
        let xs = input(xs, n, "xs")?;
        let o = output(out, n, "out")?;
        let (u, _) = asymptote(d, t, xs, FrameSelector::Auto, RegionOptions { c2, frame_tol }, None).map_err(lib)?;
        o.copy_from_slice(&u);
        Ok(())
    })
}

/// Evolves u0 (sampled at n uniform points x) with the spectral integrator on
/// a periodic box of length `l` with `nodes` Fourier modes up to `t_end`.
/// `out` receives the `nodes` samples on [−l/2, l/2) at t_end in the frame
/// moving with `velocity`.
///
/// # Safety
/// `x` and `u` must point to `n` doubles and `out` to `nodes` doubles.
#[no_mangle]
pub unsafe extern "C" fn mkdv_evolve(
    x: *const f64,
    u: *const f64,
    n: usize,
    l: f64,
    nodes: usize,
    dt: f64,
    t_end: f64,
    velocity: f64,
    out: *mut f64,
) -> MkdvStatus {
    guard(|| {
        let x = input(x, n, "x")?;
        let u = input(u, n, "u")?;
        let o = output(out, nodes, "out")?;
        let pot = PotentialSample::new(x, u.to_vec()).map_err(lib)?;
        let state = init_state(&pot, l, nodes).map_err(lib)?;
        let res = run(state, &[t_end], RunParams { dt, frame_velocity: velocity }).map_err(lib)?;
        o.copy_from_slice(&res.checkpoints[0].u);
        Ok(())
    })
}
