use std::ffi::{CStr, CString};
use std::ptr;

use uwoc_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(uwoc_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn significant() -> UwocPointing {
    let mut pe = UwocPointing { a0: 0.0, rho: 0.0 };
    let name = CString::new("significant").unwrap();
    assert_eq!(unsafe { uwoc_pointing_preset(name.as_ptr(), &mut pe) }, UwocStatus::Ok);
    pe
}

fn array(n: usize, g0: f64) -> *mut UwocArray {
    let egg = uwoc_egg_reference();
    let pe = significant();
    let mut arr = ptr::null_mut();
    assert_eq!(
        unsafe { uwoc_array_new_iid(n, &egg, &pe, g0, &mut arr) },
        UwocStatus::Ok
    );
    assert!(!arr.is_null());
    arr
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(uwoc_version()) }.to_str().unwrap();
    assert_eq!(v, uwoc_core::VERSION);
}

#[test]
fn reference_gamma0_is_linear_in_power() {
    let (mut a, mut b) = (0.0, 0.0);
    unsafe {
        assert_eq!(uwoc_reference_gamma0(0.0, &mut a), UwocStatus::Ok);
        assert_eq!(uwoc_reference_gamma0(10.0, &mut b), UwocStatus::Ok);
        assert_eq!(uwoc_reference_gamma0(f64::NAN, &mut b), UwocStatus::InvalidArgument);
    }
    // γ₀ ∝ P_t², so +10 dBm is a factor 100
    assert!((b / a - 100.0).abs() < 1e-9);
}

#[test]
fn single_cdf_agrees_with_core() {
    let egg = uwoc_egg_reference();
    let pe = significant();
    let mut v = f64::NAN;
    assert_eq!(unsafe { uwoc_single_cdf(0.5, &egg, &pe, 2.0, &mut v) }, UwocStatus::Ok);
    let core = uwoc_core::channel::snr_cdf_single(
        0.5,
        &uwoc_core::channel::EggParams::reference(),
        &uwoc_core::channel::PointingParams::significant(),
        2.0,
    )
    .unwrap();
    assert_eq!(v, core);
}

#[test]
fn one_aperture_bound_equals_selection() {
    let arr = array(1, 1.0);
    let (mut mrc, mut sc) = (f64::NAN, f64::NAN);
    unsafe {
        assert_eq!(uwoc_array_len(arr), 1);
        assert_eq!(uwoc_mrc_outage(arr, 0.3, &mut mrc), UwocStatus::Ok);
        assert_eq!(uwoc_sc_outage(arr, 0.3, &mut sc), UwocStatus::Ok);
        uwoc_array_free(arr);
    }
    assert!((mrc - sc).abs() <= 1e-9 * sc, "{mrc} vs {sc}");
}

#[test]
fn simulation_brackets_selection_outage() {
    let arr = array(3, 1.0);
    let mut sc = f64::NAN;
    let mut e = UwocEstimate {
        p_hat: 0.0,
        ci_low: 0.0,
        ci_high: 0.0,
        trials: 0,
        count: 0,
    };
    unsafe {
        assert_eq!(uwoc_sc_outage(arr, 0.5, &mut sc), UwocStatus::Ok);
        assert_eq!(
            uwoc_simulate_outage(arr, UwocScheme::ScMax, 0.5, 400_000, 1, 2, &mut e),
            UwocStatus::Ok
        );
        uwoc_array_free(arr);
    }
    assert_eq!(e.trials, 400_000);
    // 5σ of a binomial proportion
    let sigma = (sc * (1.0 - sc) / e.trials as f64).sqrt();
    assert!((e.p_hat - sc).abs() < 5.0 * sigma, "{} vs {sc}", e.p_hat);
}

#[test]
fn g0_update_lowers_outage() {
    let arr = array(2, 1.0);
    let (mut before, mut after) = (f64::NAN, f64::NAN);
    unsafe {
        assert_eq!(uwoc_sc_outage(arr, 0.5, &mut before), UwocStatus::Ok);
        assert_eq!(uwoc_array_set_g0(arr, 10.0), UwocStatus::Ok);
        assert_eq!(uwoc_sc_outage(arr, 0.5, &mut after), UwocStatus::Ok);
        uwoc_array_free(arr);
    }
    assert!(after < before);
}

#[test]
fn errors_are_reported() {
    let egg = uwoc_egg_reference();
    let mut bad = egg;
    bad.lambda = -1.0;
    let pe = significant();
    let mut arr = ptr::null_mut();
    let mut v = 0.0;
    unsafe {
        assert_eq!(
            uwoc_array_new_iid(2, &bad, &pe, 1.0, &mut arr),
            UwocStatus::InvalidArgument
        );
        assert!(arr.is_null());
        assert!(last_error().contains("lambda"), "{}", last_error());

        assert_eq!(
            uwoc_array_new_iid(2, ptr::null(), &pe, 1.0, &mut arr),
            UwocStatus::NullPointer
        );
        assert_eq!(uwoc_mrc_outage(ptr::null(), 1.0, &mut v), UwocStatus::NullPointer);

        let name = CString::new("sideways").unwrap();
        let mut p = pe;
        assert_eq!(uwoc_pointing_preset(name.as_ptr(), &mut p), UwocStatus::InvalidArgument);
        assert!(last_error().contains("sideways"));

        let arr = array(2, 1.0);
        assert_eq!(uwoc_sc_outage(arr, -1.0, &mut v), UwocStatus::InvalidArgument);
        assert_eq!(uwoc_array_set_g0(arr, 0.0), UwocStatus::InvalidArgument);
        let mut e = std::mem::zeroed();
        assert_eq!(
            uwoc_simulate_outage(arr, UwocScheme::Single, 1.0, 10, 1, 1, &mut e),
            UwocStatus::InvalidArgument
        );
        assert_eq!(
            uwoc_simulate_outage(arr, UwocScheme::Single, 1.0, 100_000, 1, 0, &mut e),
            UwocStatus::InvalidArgument
        );
        uwoc_array_free(arr);
        uwoc_array_free(ptr::null_mut());
        assert_eq!(uwoc_array_len(ptr::null()), 0);
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let dir = tempfile::tempdir().unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"uwoc.h\"\nint main(void) { UwocArray *a = 0; double v; return uwoc_mrc_outage(a, 1.0, &v) == UWOC_STATUS_NULL_POINTER ? 0 : 1; }\n",
    )
    .unwrap();
    for (cc, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = std::process::Command::new(cc)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I", include])
            .arg(&src)
            .status()
            .unwrap();
        assert!(status.success(), "{cc}");
    }
}
