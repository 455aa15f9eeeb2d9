//! C ABI over `uwoc-core`.
//!
//! Fallible calls return a [`UwocStatus`] and write their result through an
//! out-pointer. On failure a message is kept per thread and read back with
//! [`uwoc_last_error`]. Aperture arrays are opaque; free them with
//! [`uwoc_array_free`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use uwoc_core::channel::{snr_cdf_single, ChannelError, EggParams, LinkBudget, PointingParams};
use uwoc_core::diversity::{mrc_outage, sc_cdf, ApertureArray, DiversityError, MrcBoundConvention};
use uwoc_core::montecarlo::{simulate, Scheme, SimConfig, SimError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UwocStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    Simulation = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UwocScheme {
    MrcExactSum = 0,
    ScMax = 1,
    GeometricMean = 2,
    NTimesGeometricMean = 3,
    Single = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UwocEggParams {
    pub omega: f64,
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UwocPointing {
    pub a0: f64,
    pub rho: f64,
}

/// Monte Carlo outage estimate with its 99% Wilson interval.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UwocEstimate {
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub count: u64,
}

/// Identically distributed apertures sharing one average SNR.
pub struct UwocArray {
    inner: ApertureArray,
}

type Failure = (UwocStatus, String);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> UwocStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UwocStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            UwocStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    (UwocStatus::NullPointer, format!("{name} is null"))
}

fn channel_failure(e: ChannelError) -> Failure {
    let status = match e {
        ChannelError::InvalidParameter { .. } => UwocStatus::InvalidArgument,
        ChannelError::SpecFun(_) => UwocStatus::Numerical,
    };
    (status, e.to_string())
}

fn diversity_failure(e: DiversityError) -> Failure {
    match e {
        DiversityError::Channel(c) => channel_failure(c),
        DiversityError::SpecFun(_) | DiversityError::Term { .. } => (UwocStatus::Numerical, e.to_string()),
        _ => (UwocStatus::InvalidArgument, e.to_string()),
    }
}

fn sim_failure(e: SimError) -> Failure {
    let status = match e {
        SimError::Pool(_) => UwocStatus::Simulation,
        _ => UwocStatus::InvalidArgument,
    };
    (status, e.to_string())
}

unsafe fn read<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write<T>(p: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(value);
    Ok(())
}

fn egg(p: &UwocEggParams) -> Result<EggParams, Failure> {
    EggParams::new(p.omega, p.lambda, p.a, p.b, p.c).map_err(channel_failure)
}

fn pointing(p: &UwocPointing) -> Result<PointingParams, Failure> {
    PointingParams::new(p.a0, p.rho).map_err(channel_failure)
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn uwoc_version() -> *const c_char {
    static V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    V.as_ptr().cast()
}

/// Message of the last failed call on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn uwoc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Reference turbulence parameters.
#[no_mangle]
pub extern "C" fn uwoc_egg_reference() -> UwocEggParams {
    let p = EggParams::reference();
    UwocEggParams {
        omega: p.omega(),
        lambda: p.lambda(),
        a: p.a(),
        b: p.b(),
        c: p.c(),
    }
}

/// Named pointing preset: "significant", "strong" or "negligible".
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uwoc_pointing_preset(name: *const c_char, out: *mut UwocPointing) -> UwocStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        let pe = match CStr::from_ptr(name).to_str() {
            Ok("significant") => PointingParams::significant(),
            Ok("strong") => PointingParams::strong(),
            Ok("negligible") => PointingParams::negligible(),
            other => {
                return Err((
                    UwocStatus::InvalidArgument,
                    format!("unknown pointing preset {other:?}"),
                ));
            }
        };
        write(
            out,
            "out",
            UwocPointing {
                a0: pe.a0(),
                rho: pe.rho(),
            },
        )
    })
}

/// Average SNR γ₀ of the reference link at transmit power `pt_dbm`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uwoc_reference_gamma0(pt_dbm: f64, out: *mut f64) -> UwocStatus {
    guard(|| {
        if !pt_dbm.is_finite() {
            return Err((
                UwocStatus::InvalidArgument,
                format!("power must be finite, got {pt_dbm}"),
            ));
        }
        write(out, "out", LinkBudget::reference(pt_dbm).gamma0())
    })
}

/// Single-aperture SNR CDF at `gamma` for average SNR `g0`.
///
/// # Safety
/// `egg_params` and `pe` must be readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uwoc_single_cdf(
    gamma: f64,
    egg_params: *const UwocEggParams,
    pe: *const UwocPointing,
    g0: f64,
    out: *mut f64,
) -> UwocStatus {
    guard(|| {
        let p = egg(read(egg_params, "egg_params")?)?;
        let pe = pointing(read(pe, "pe")?)?;
        let v = snr_cdf_single(gamma, &p, &pe, g0).map_err(channel_failure)?;
        write(out, "out", v)
    })
}

/// New array of `n` identical apertures at average SNR `g0`.
///
/// # Safety
/// `egg_params` and `pe` must be readable, `out` writable. On success `*out` owns a
/// handle to be released with [`uwoc_array_free`].
#[no_mangle]
pub unsafe extern "C" fn uwoc_array_new_iid(
    n: usize,
    egg_params: *const UwocEggParams,
    pe: *const UwocPointing,
    g0: f64,
    out: *mut *mut UwocArray,
) -> UwocStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = egg(read(egg_params, "egg_params")?)?;
        let pe = pointing(read(pe, "pe")?)?;
        let inner = ApertureArray::iid(n, p, pe, g0).map_err(diversity_failure)?;
        write(out, "out", Box::into_raw(Box::new(UwocArray { inner })))
    })
}

/// Changes the array's average SNR.
///
/// # Safety
/// `arr` must be a live handle from [`uwoc_array_new_iid`].
#[no_mangle]
pub unsafe extern "C" fn uwoc_array_set_g0(arr: *mut UwocArray, g0: f64) -> UwocStatus {
    guard(|| {
        let a = arr.as_mut().ok_or_else(|| null("arr"))?;
        a.inner = a.inner.with_g0(g0).map_err(diversity_failure)?;
        Ok(())
    })
}

/// Number of apertures, or 0 for a null handle.
///
/// # Safety
/// `arr` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uwoc_array_len(arr: *const UwocArray) -> usize {
    arr.as_ref().map_or(0, |a| a.inner.n())
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `arr` must be null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn uwoc_array_free(arr: *mut UwocArray) {
    if !arr.is_null() {
        drop(Box::from_raw(arr));
    }
}

/// MRC outage bound `P(N γ_N ≤ γ_th)` under the default convention.
///
/// # Safety
/// `arr` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uwoc_mrc_outage(arr: *const UwocArray, gamma_th: f64, out: *mut f64) -> UwocStatus {
    guard(|| {
        let a = read(arr, "arr")?;
        let v = mrc_outage(gamma_th, &a.inner, &MrcBoundConvention::default()).map_err(diversity_failure)?;
        write(out, "out", v)
    })
}

/// Exact selection-combining outage at `gamma_th`.
///
/// # Safety
/// `arr` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uwoc_sc_outage(arr: *const UwocArray, gamma_th: f64, out: *mut f64) -> UwocStatus {
    guard(|| {
        let a = read(arr, "arr")?;
        if !(gamma_th > 0.0) {
            return Err((
                UwocStatus::InvalidArgument,
                format!("threshold must be positive, got {gamma_th}"),
            ));
        }
        let v = sc_cdf(gamma_th, &a.inner).map_err(diversity_failure)?;
        write(out, "out", v)
    })
}

/// Monte Carlo outage of `scheme` at `gamma_th`. Results depend only on
/// `seed` and `trials`, not on `workers`.
///
/// # Safety
/// `arr` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uwoc_simulate_outage(
    arr: *const UwocArray,
    scheme: UwocScheme,
    gamma_th: f64,
    trials: u64,
    seed: u64,
    workers: usize,
    out: *mut UwocEstimate,
) -> UwocStatus {
    guard(|| {
        let a = read(arr, "arr")?;
        let scheme = match scheme {
            UwocScheme::MrcExactSum => Scheme::MrcExactSum,
            UwocScheme::ScMax => Scheme::ScMax,
            UwocScheme::GeometricMean => Scheme::GeometricMean,
            UwocScheme::NTimesGeometricMean => Scheme::NTimesGeometricMean,
            UwocScheme::Single => Scheme::Single,
        };
        let cfg = SimConfig::new(trials, seed, workers, scheme, a.inner.clone(), gamma_th).map_err(sim_failure)?;
        let e = simulate(&cfg).map_err(sim_failure)?;
        write(
            out,
            "out",
            UwocEstimate {
                p_hat: e.p_hat,
                ci_low: e.ci_low,
                ci_high: e.ci_high,
                trials: e.trials,
                count: e.count,
            },
        )
    })
}
