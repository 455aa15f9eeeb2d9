//! Complex log-gamma on the principal branch.
//!
//! Stirling's series is evaluated once the argument has been shifted into the
//! half-plane `Re(w) >= 0` with `|w| >= 10`; the shift is undone with the
//! recurrence `lnΓ(z) = lnΓ(z + n) - Σ ln(z + k)`, which preserves the
//! principal branch (the same convention as `scipy.special.loggamma`).

use num_complex::Complex64;

use super::SpecFunError;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2k} / (2k (2k - 1))` for k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_MIN_MODULUS: f64 = 10.0;

/// Principal-branch `ln Γ(z)`.
///
/// Non-positive integers are poles and yield [`SpecFunError::Pole`].
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64, SpecFunError> {
    if is_pole(z) {
        return Err(SpecFunError::Pole { at: z.re });
    }
    Ok(ln_gamma_unchecked(z))
}

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln Γ(z)` without the pole check. Callers guarantee `z` is off the poles;
/// at a pole the result is non-finite.
pub(crate) fn ln_gamma_unchecked(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < 0.0 || w.norm_sqr() < STIRLING_MIN_MODULUS * STIRLING_MIN_MODULUS {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series
}

/// Real gamma function, including negative non-integer arguments.
pub fn gamma_real(x: f64) -> Result<f64, SpecFunError> {
    let lg = log_gamma_complex(Complex64::new(x, 0.0))?;
    // Im(lnΓ) is a multiple of π on the real axis; it carries the sign.
    Ok(lg.re.exp() * lg.im.cos().signum())
}

/// `ln |Γ(x)|` for real `x` off the poles.
pub fn ln_gamma_real(x: f64) -> Result<f64, SpecFunError> {
    Ok(log_gamma_complex(Complex64::new(x, 0.0))?.re)
}

/// `1 / Γ(x)`, an entire function: zero at the poles of Γ.
pub fn recip_gamma_real(x: f64) -> f64 {
    match gamma_real(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// Distance from `x` to the nearest pole of Γ, or `None` when `x > 0`.
pub(crate) fn pole_distance(x: f64) -> Option<f64> {
    if x > 0.5 {
        return None;
    }
    let nearest = x.round().min(0.0);
    Some((x - nearest).abs())
}
