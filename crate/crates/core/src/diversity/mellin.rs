//! Fractional moments and direct Mellin inversion of the geometric mean.

use num_complex::Complex64;

use super::{ApertureArray, DiversityError};
use crate::channel::{EggParams, PointingParams};
use crate::quad;
use crate::specfun::{gamma_real, ln_gamma_real, ln_gamma_unchecked};

/// `E[γ^q]` for one aperture at complex `q`, without domain checks.
pub fn moment_fractional_complex(q: Complex64, p: &EggParams, pe: &PointingParams, g0: f64) -> Complex64 {
    let rho2 = pe.rho2();
    let c = p.c();
    let two_q = 2.0 * q;
    let ln_exp =
        (two_q * (p.lambda() * pe.a0()).ln()) + ln_gamma_unchecked(1.0 + two_q) + ln_gamma_unchecked(rho2 + two_q)
            - ln_gamma_unchecked(rho2 + 1.0 + two_q);
    let ln_gg = (two_q * (p.b() * pe.a0()).ln())
        + ln_gamma_unchecked(p.a() + two_q / c)
        + ln_gamma_unchecked((rho2 + two_q) / c)
        - ln_gamma_unchecked((rho2 + two_q) / c + 1.0);
    let w_exp = p.omega() * rho2;
    let w_gg = (1.0 - p.omega()) * rho2 / (c * ln_gamma_unchecked(Complex64::new(p.a(), 0.0)).re.exp());
    (q * g0.ln()).exp() * (w_exp * ln_exp.exp() + w_gg * ln_gg.exp())
}

/// Lower bound on `q` for which `E[γ^q]` is finite: `−min{1, ac, ρ²}/2`.
pub fn moment_lower_bound(p: &EggParams, pe: &PointingParams) -> f64 {
    -(1.0f64).min(p.a() * p.c()).min(pe.rho2()) / 2.0
}

/// `E[γ^q]` of the single-aperture SNR (`q = r/N` for the geometric mean of
/// `N` apertures).
///
/// ```text
/// E[γ^q] = ω ρ² (γ₀ λ²A₀²)^q Γ(1+2q) Γ(ρ²+2q) / Γ(ρ²+1+2q)
///        + (1−ω) ρ²/(c Γ(a)) (γ₀ b²A₀²)^q Γ(a+2q/c) Γ((ρ²+2q)/c) / Γ((ρ²+2q)/c+1)
/// ```
pub fn moment_fractional(q: f64, p: &EggParams, pe: &PointingParams, g0: f64) -> Result<f64, DiversityError> {
    let lower = moment_lower_bound(p, pe);
    if !(q > lower) || !q.is_finite() {
        return Err(DiversityError::Domain(format!(
            "moment order {q} must exceed {lower} for the gamma arguments to stay positive"
        )));
    }
    let rho2 = pe.rho2();
    let c = p.c();
    let exp_part = p.omega()
        * rho2
        * (g0 * (p.lambda() * pe.a0()).powi(2)).powf(q)
        * (ln_gamma_real(1.0 + 2.0 * q)? + ln_gamma_real(rho2 + 2.0 * q)? - ln_gamma_real(rho2 + 1.0 + 2.0 * q)?).exp();
    let r = (rho2 + 2.0 * q) / c;
    let gg_part = (1.0 - p.omega()) * rho2 / (c * gamma_real(p.a())?)
        * (g0 * (p.b() * pe.a0()).powi(2)).powf(q)
        * (ln_gamma_real(p.a() + 2.0 * q / c)? + ln_gamma_real(r)? - ln_gamma_real(r + 1.0)?).exp();
    Ok(exp_part + gg_part)
}

/// CDF of the geometric mean `(Π γ_i)^{1/N}` at `x`, by numerically
/// inverting `E[γ_N^s] = Π E[γ_i^{s/N}]` along a vertical line. Uses no
/// Fox-H assembly, so it serves as an independent check on the closed form.
pub fn geometric_mean_cdf_by_inversion(x: f64, arr: &ApertureArray) -> Result<f64, DiversityError> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let n = arr.n() as f64;
    let min_bound = arr
        .apertures()
        .iter()
        .map(|ap| moment_lower_bound(&ap.egg, &ap.pointing))
        .fold(f64::NEG_INFINITY, f64::max);
    // abscissa inside (N·bound, 0)
    let c = 0.5 * n * min_bound;
    let ln_x = x.ln();
    let integrand = |t: f64| {
        let s = Complex64::new(c, t);
        let mut m = Complex64::new(1.0, 0.0);
        for ap in arr.apertures() {
            m *= moment_fractional_complex(s / n, &ap.egg, &ap.pointing, arr.g0());
        }
        (-(m / s) * (-s * ln_x).exp()).re
    };
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut width = 1.0;
    for _ in 0..200 {
        let chunk = quad::adaptive(integrand, lo, lo + width, 1e-12, 1e-17).value;
        total += chunk;
        lo += width;
        if lo > 10.0 && chunk.abs() <= 1e-15 * total.abs().max(1e-300) {
            break;
        }
        width = (width * 1.25).min(20.0);
    }
    Ok(total / std::f64::consts::PI)
}
