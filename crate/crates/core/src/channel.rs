//! Single-aperture link statistics: path loss, average SNR, the EGG irradiance
//! law and the SNR distribution with pointing errors.
//!
//! With `u = √(γ/γ₀)` the composite gain is `h_t·h_p`; its CDF is a mixture of
//! two Meijer-G kernels, one per EGG component:
//!
//! ```text
//! F(γ) = ω ρ² G^{2,1}_{2,3}(1, ρ²+1; 1, ρ², 0 | u/(λA₀))
//!      + (1−ω) ρ²/(c Γ(a)) G^{2,1}_{2,3}(1, ρ²/c+1; a, ρ²/c, 0 | (u/(bA₀))^c)
//! ```

use statrs::function::{erf::erf, gamma::gamma_lr};
use thiserror::Error;

use crate::specfun::{self, gamma_real, meijer_g, pole_distance, SpecFunError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

fn check(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<(), ChannelError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ChannelError::InvalidParameter { name, value, reason })
    }
}

/// Exponential–generalized-gamma mixture parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EggParams {
    omega: f64,
    lambda: f64,
    a: f64,
    b: f64,
    c: f64,
}

impl EggParams {
    pub fn new(omega: f64, lambda: f64, a: f64, b: f64, c: f64) -> Result<Self, ChannelError> {
        check(
            "omega",
            omega,
            omega > 0.0 && omega < 1.0,
            "mixture weight must lie in (0, 1)",
        )?;
        check("lambda", lambda, lambda > 0.0, "must be positive")?;
        check("a", a, a > 0.0, "must be positive")?;
        check("b", b, b > 0.0, "must be positive")?;
        check("c", c, c > 0.0, "must be positive")?;
        Ok(Self { omega, lambda, a, b, c })
    }

    /// Laboratory fit used throughout the reference scenario.
    pub fn reference() -> Self {
        Self {
            omega: 0.1770,
            lambda: 0.4687,
            a: 0.6302,
            b: 1.1780,
            c: 0.8444,
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Mean irradiance `ωλ + (1−ω) b Γ(a+1/c)/Γ(a)`.
    pub fn mean(&self) -> f64 {
        let gg = self.b * (gamma_real(self.a + 1.0 / self.c).unwrap() / gamma_real(self.a).unwrap());
        self.omega * self.lambda + (1.0 - self.omega) * gg
    }
}

/// Pointing-error parameters: peak collected fraction `A₀` and the ratio
/// `ρ = w_zeq / (2σ_s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointingParams {
    a0: f64,
    rho: f64,
}

impl PointingParams {
    pub fn new(a0: f64, rho: f64) -> Result<Self, ChannelError> {
        check("a0", a0, a0 > 0.0 && a0 <= 1.0, "must lie in (0, 1]")?;
        check("rho", rho, rho > 0.0, "must be positive")?;
        Ok(Self { a0, rho })
    }

    /// From aperture radius `r`, beam width `w_z`, equivalent beam width
    /// `w_zeq` and jitter standard deviation `sigma_s` (all in metres):
    /// `A₀ = erf(υ)²` with `υ = √(π/2)·r/w_z`.
    pub fn from_geometry(r: f64, w_z: f64, w_z_eq: f64, sigma_s: f64) -> Result<Self, ChannelError> {
        check("r", r, r > 0.0, "must be positive")?;
        check("w_z", w_z, w_z > 0.0, "must be positive")?;
        check("w_z_eq", w_z_eq, w_z_eq > 0.0, "must be positive")?;
        check("sigma_s", sigma_s, sigma_s > 0.0, "must be positive")?;
        let upsilon = (std::f64::consts::PI / 2.0).sqrt() * r / w_z;
        Self::new(erf(upsilon).powi(2), w_z_eq / (2.0 * sigma_s))
    }

    pub fn significant() -> Self {
        Self {
            a0: 0.8532,
            rho: 0.8863,
        }
    }

    pub fn strong() -> Self {
        Self {
            a0: 0.3900,
            rho: 0.5718,
        }
    }

    pub fn negligible() -> Self {
        Self { a0: 1.0, rho: 8.0 }
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn rho2(&self) -> f64 {
        self.rho * self.rho
    }
}

/// Transmit power (dBm), noise variance, link length (m) and extinction (1/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub pt_dbm: f64,
    pub sigma_w2: f64,
    pub length_m: f64,
    pub alpha: f64,
}

impl LinkBudget {
    pub fn new(pt_dbm: f64, sigma_w2: f64, length_m: f64, alpha: f64) -> Result<Self, ChannelError> {
        check("pt_dbm", pt_dbm, true, "must be finite")?;
        check("sigma_w2", sigma_w2, sigma_w2 > 0.0, "must be positive")?;
        check("length_m", length_m, length_m >= 0.0, "must be non-negative")?;
        check("alpha", alpha, alpha >= 0.0, "must be non-negative")?;
        Ok(Self {
            pt_dbm,
            sigma_w2,
            length_m,
            alpha,
        })
    }

    /// 50 m link, α = 0.056 /m, σ_w² = 1e-14.
    pub fn reference(pt_dbm: f64) -> Self {
        Self {
            pt_dbm,
            sigma_w2: 1e-14,
            length_m: 50.0,
            alpha: 0.056,
        }
    }

    pub fn with_power(self, pt_dbm: f64) -> Self {
        Self { pt_dbm, ..self }
    }

    pub fn pt_watts(&self) -> f64 {
        dbm_to_watts(self.pt_dbm)
    }

    /// `γ₀ = P_t² h_l² / σ_w²` with unit responsivity.
    pub fn gamma0(&self) -> f64 {
        let h_l = (-self.alpha * self.length_m).exp();
        (self.pt_watts() * h_l).powi(2) / self.sigma_w2
    }

    pub fn gamma0_db(&self) -> f64 {
        to_db(self.gamma0())
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Oceanic path loss `e^{−αl}`.
pub fn path_loss(length_m: f64, alpha: f64) -> Result<f64, ChannelError> {
    check("length_m", length_m, length_m >= 0.0, "must be non-negative")?;
    check("alpha", alpha, alpha >= 0.0, "must be non-negative")?;
    Ok((-alpha * length_m).exp())
}

/// EGG irradiance density.
pub fn egg_pdf(h: f64, p: &EggParams) -> Result<f64, ChannelError> {
    check("h", h, h > 0.0, "irradiance must be positive")?;
    let exp_part = p.omega / p.lambda * (-h / p.lambda).exp();
    let ac = p.a * p.c;
    let ln_gg = p.c.ln() + (ac - 1.0) * h.ln() - ac * p.b.ln() - (h / p.b).powf(p.c) - specfun::ln_gamma_real(p.a)?;
    Ok(exp_part + (1.0 - p.omega) * ln_gg.exp())
}

/// EGG irradiance CDF, `ω(1−e^{−h/λ}) + (1−ω) P(a, (h/b)^c)`.
pub fn egg_cdf(h: f64, p: &EggParams) -> f64 {
    if h <= 0.0 {
        return 0.0;
    }
    let exp_part = -(-h / p.lambda).exp_m1();
    let gg_part = gamma_lr(p.a, (h / p.b).powf(p.c));
    p.omega * exp_part + (1.0 - p.omega) * gg_part
}

/// SNR CDF without pointing errors (`A₀ = 1`, `ρ → ∞`).
pub fn egg_cdf_no_pointing(gamma: f64, p: &EggParams, g0: f64) -> f64 {
    if gamma <= 0.0 {
        return 0.0;
    }
    if gamma.is_infinite() {
        return 1.0;
    }
    egg_cdf((gamma / g0).sqrt(), p)
}

/// SNR density without pointing errors.
pub fn egg_pdf_no_pointing(gamma: f64, p: &EggParams, g0: f64) -> Result<f64, ChannelError> {
    check("gamma", gamma, gamma > 0.0, "SNR must be positive")?;
    let u = (gamma / g0).sqrt();
    Ok(egg_pdf(u, p)? / (2.0 * (gamma * g0).sqrt()))
}

/// The two Meijer-G arguments `u/(λA₀)` and `(u/(bA₀))^c`.
fn kernel_args(gamma: f64, p: &EggParams, pe: &PointingParams, g0: f64) -> (f64, f64) {
    let u = (gamma / g0).sqrt();
    (u / (p.lambda * pe.a0), (u / (p.b * pe.a0)).powf(p.c))
}

/// SNR density with pointing errors.
pub fn snr_pdf_single(gamma: f64, p: &EggParams, pe: &PointingParams, g0: f64) -> Result<f64, ChannelError> {
    check("gamma", gamma, gamma > 0.0, "SNR must be positive")?;
    let rho2 = pe.rho2();
    let rc = rho2 / p.c;
    let (z1, z2) = kernel_args(gamma, p, pe, g0);
    let g1 = meijer_g(2, 0, &[rho2 + 1.0], &[1.0, rho2], z1)?;
    let g2 = meijer_g(2, 0, &[rc + 1.0], &[p.a, rc], z2)?;
    let t1 = p.omega * rho2 / (2.0 * gamma) * g1;
    let t2 = (1.0 - p.omega) * rho2 / (2.0 * gamma_real(p.a)? * gamma) * g2;
    Ok(t1 + t2)
}

/// Largest tolerated excursion of a CDF outside [0, 1] before clamping.
pub const CDF_EXCURSION_TOL: f64 = 1e-6;

pub(crate) fn clamp_probability(v: f64) -> f64 {
    debug_assert!(
        v > -CDF_EXCURSION_TOL && v < 1.0 + CDF_EXCURSION_TOL,
        "probability {v} outside [0, 1] beyond tolerance"
    );
    v.clamp(0.0, 1.0)
}

/// SNR CDF with pointing errors, clamped to [0, 1].
pub fn snr_cdf_single(gamma: f64, p: &EggParams, pe: &PointingParams, g0: f64) -> Result<f64, ChannelError> {
    check("gamma", gamma, gamma >= 0.0, "SNR must be non-negative")?;
    if gamma == 0.0 {
        return Ok(0.0);
    }
    if gamma.is_infinite() {
        return Ok(1.0);
    }
    let rho2 = pe.rho2();
    let rc = rho2 / p.c;
    let (z1, z2) = kernel_args(gamma, p, pe, g0);
    let g1 = meijer_g(2, 1, &[1.0, rho2 + 1.0], &[1.0, rho2, 0.0], z1)?;
    let g2 = meijer_g(2, 1, &[1.0, rc + 1.0], &[p.a, rc, 0.0], z2)?;
    let v = p.omega * rho2 * g1 + (1.0 - p.omega) * rho2 / (p.c * gamma_real(p.a)?) * g2;
    Ok(clamp_probability(v))
}

/// Offset applied to ρ² when a closed-form asymptotic coefficient would sit
/// on a gamma pole.
pub const POLE_PERTURBATION: f64 = 1e-6;

/// The four small-argument terms of the single-aperture CDF:
/// `[u, u^{ρ²}]` from the exponential branch and `[u_b^{ac}, u_b^{ρ²}]` from
/// the generalized-gamma branch, each with its coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticTerms {
    pub values: [f64; 4],
    /// Exponents of `√(γ/γ₀)` for each term: `[1, ρ², ac, ρ²]`.
    pub exponents: [f64; 4],
    /// True when ρ² was nudged off a gamma pole.
    pub perturbed: bool,
}

impl AsymptoticTerms {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

fn needs_perturbation(rho2: f64, p: &EggParams) -> bool {
    let rc = rho2 / p.c;
    [rho2 - 1.0, 1.0 - rho2, rc - p.a, p.a - rc]
        .iter()
        .any(|&arg| pole_distance(arg).is_some_and(|d| d < 1e-9))
}

/// Small-argument expansion terms of [`snr_cdf_single`].
pub fn single_asymptotic_terms(
    gamma: f64,
    p: &EggParams,
    pe: &PointingParams,
    g0: f64,
) -> Result<AsymptoticTerms, ChannelError> {
    check("gamma", gamma, gamma >= 0.0, "SNR must be non-negative")?;
    let mut rho2 = pe.rho2();
    let perturbed = needs_perturbation(rho2, p);
    if perturbed {
        log::warn!("rho^2 = {rho2} puts an asymptotic coefficient on a gamma pole; perturbing by {POLE_PERTURBATION}");
        rho2 += POLE_PERTURBATION;
    }
    let (omega, a, c) = (p.omega, p.a, p.c);
    let rc = rho2 / c;
    let u = (gamma / g0).sqrt();
    let ul = u / (p.lambda * pe.a0);
    let ub = u / (p.b * pe.a0);
    let gamma_a = gamma_real(a)?;
    // ω ρ² [Γ(ρ²−1)/Γ(ρ²) · ul + Γ(1−ρ²)/ρ² · ul^{ρ²}]
    let t1 = omega * rho2 * gamma_real(rho2 - 1.0)? / gamma_real(rho2)? * ul;
    let t2 = omega * gamma_real(1.0 - rho2)? * ul.powf(rho2);
    // (1−ω) ρ²/(cΓ(a)) [Γ(ρ²/c−a)/(a Γ(ρ²/c+1−a)) · ub^{ac} + Γ(a−ρ²/c) c/ρ² · ub^{ρ²}]
    let t3 = (1.0 - omega) * rho2 / (c * gamma_a) * gamma_real(rc - a)? * specfun::recip_gamma_real(rc + 1.0 - a) / a
        * ub.powf(a * c);
    let t4 = (1.0 - omega) / gamma_a * gamma_real(a - rc)? * ub.powf(rho2);
    Ok(AsymptoticTerms {
        values: [t1, t2, t3, t4],
        exponents: [1.0, rho2, a * c, rho2],
        perturbed,
    })
}

/// Four-term small-argument approximation of the single-aperture CDF.
pub fn snr_cdf_single_asymptotic(gamma: f64, p: &EggParams, pe: &PointingParams, g0: f64) -> Result<f64, ChannelError> {
    Ok(single_asymptotic_terms(gamma, p, pe, g0)?.sum())
}
