//! Special-function kernel: complex log-gamma, Fox-H and Meijer-G by
//! Mellin–Barnes contour quadrature, and small-argument residue series.
//!
//! The Fox-H function is
//!
//! ```text
//!                1   ⌠  Π_{j≤m} Γ(b_j + B_j s) Π_{j≤n} Γ(1 - a_j - A_j s)
//! H(x)  =  ───── │  ─────────────────────────────────────────────────  x^{-s} ds
//!           2πi  ⌡  Π_{j>n} Γ(a_j + A_j s)   Π_{j>m} Γ(1 - b_j - B_j s)
//! ```
//!
//! taken along a vertical line that separates the left poles of the `b` family
//! from the right poles of the `a` family. Meijer-G is the case where every
//! scale `A_j`, `B_j` equals one.

mod contour;
mod gamma;
mod residue;

use num_complex::Complex64;
use thiserror::Error;

pub use contour::{
    fox_h, fox_h_auto, fox_h_detailed, meijer_g, ContourConfig, ContourResult, CANCELLATION_LIMIT, SERIES_FIRST_BELOW,
};
pub use gamma::{gamma_real, ln_gamma_real, log_gamma_complex, recip_gamma_real};
pub(crate) use gamma::{ln_gamma_unchecked, pole_distance};
pub use residue::{residue_series, ResidueSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("gamma function pole at {at}")]
    Pole { at: f64 },
    #[error("invalid Mellin-Barnes parameters: {0}")]
    InvalidSpec(String),
    #[error("contour cannot separate pole families (left bound {left}, right bound {right})")]
    Degenerate { left: f64, right: f64 },
    #[error("contour quadrature did not converge: last iterates {last} and {previous}")]
    Accuracy { last: f64, previous: f64 },
    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),
}

/// One gamma-factor parameter `(value, scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParam {
    pub value: f64,
    pub scale: f64,
}

impl GammaParam {
    pub const fn new(value: f64, scale: f64) -> Self {
        Self { value, scale }
    }

    pub const fn unit(value: f64) -> Self {
        Self { value, scale: 1.0 }
    }
}

impl From<(f64, f64)> for GammaParam {
    fn from((value, scale): (f64, f64)) -> Self {
        Self { value, scale }
    }
}

/// Orders and parameter lists of a Fox-H integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinBarnesSpec {
    m: usize,
    n: usize,
    upper: Vec<GammaParam>,
    lower: Vec<GammaParam>,
}

impl MellinBarnesSpec {
    /// Validates orders, scales and the convergence exponent.
    pub fn new(
        m: usize,
        n: usize,
        upper: impl IntoIterator<Item = GammaParam>,
        lower: impl IntoIterator<Item = GammaParam>,
    ) -> Result<Self, SpecFunError> {
        let upper: Vec<_> = upper.into_iter().collect();
        let lower: Vec<_> = lower.into_iter().collect();
        if m > lower.len() || n > upper.len() {
            return Err(SpecFunError::InvalidSpec(format!(
                "orders m={m}, n={n} exceed list lengths q={}, p={}",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(bad) = upper
            .iter()
            .chain(&lower)
            .find(|g| !(g.scale > 0.0) || !g.value.is_finite())
        {
            return Err(SpecFunError::InvalidSpec(format!(
                "parameter ({}, {}) needs a finite value and a positive scale",
                bad.value, bad.scale
            )));
        }
        let spec = Self { m, n, upper, lower };
        let delta = spec.delta();
        if !(delta > 0.0) {
            return Err(SpecFunError::InvalidSpec(format!(
                "convergence exponent must be positive, got {delta}"
            )));
        }
        Ok(spec)
    }

    /// Meijer-G spec: all scales one.
    pub fn meijer(m: usize, n: usize, a: &[f64], b: &[f64]) -> Result<Self, SpecFunError> {
        Self::new(
            m,
            n,
            a.iter().copied().map(GammaParam::unit),
            b.iter().copied().map(GammaParam::unit),
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    pub fn upper(&self) -> &[GammaParam] {
        &self.upper
    }

    pub fn lower(&self) -> &[GammaParam] {
        &self.lower
    }

    pub fn is_meijer(&self) -> bool {
        self.upper.iter().chain(&self.lower).all(|g| g.scale == 1.0)
    }

    /// Σ_{j≤m} B_j + Σ_{j≤n} A_j − Σ_{j>n} A_j − Σ_{j>m} B_j.
    pub fn delta(&self) -> f64 {
        let (lo_in, lo_out) = self.lower.split_at(self.m);
        let (up_in, up_out) = self.upper.split_at(self.n);
        lo_in.iter().map(|g| g.scale).sum::<f64>() + up_in.iter().map(|g| g.scale).sum::<f64>()
            - up_out.iter().map(|g| g.scale).sum::<f64>()
            - lo_out.iter().map(|g| g.scale).sum::<f64>()
    }

    /// Open interval `(left, right)` of admissible contour abscissas.
    ///
    /// `left = max_{j≤m} (−b_j/B_j)` bounds the left pole family and
    /// `right = min_{j≤n} (1 − a_j)/A_j` the right one; either may be infinite.
    pub fn admissible_strip(&self) -> (f64, f64) {
        let left = self.lower[..self.m]
            .iter()
            .map(|g| -g.value / g.scale)
            .fold(f64::NEG_INFINITY, f64::max);
        let right = self.upper[..self.n]
            .iter()
            .map(|g| (1.0 - g.value) / g.scale)
            .fold(f64::INFINITY, f64::min);
        (left, right)
    }

    /// Midpoint of the admissible strip (one unit inside when a side is open).
    pub fn default_abscissa(&self) -> Result<f64, SpecFunError> {
        let (left, right) = self.admissible_strip();
        if !(left < right) {
            return Err(SpecFunError::Degenerate { left, right });
        }
        Ok(match (left.is_finite(), right.is_finite()) {
            (true, true) => 0.5 * (left + right),
            (true, false) => left + 0.5,
            (false, true) => right - 0.5,
            (false, false) => 0.0,
        })
    }

    /// `ln` of the gamma ratio at `s` (no `x^{-s}` factor).
    pub fn log_kernel(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, g) in self.lower.iter().enumerate() {
            if j < self.m {
                acc += ln_gamma_unchecked(g.value + g.scale * s);
            } else {
                acc -= ln_gamma_unchecked(1.0 - g.value - g.scale * s);
            }
        }
        for (j, g) in self.upper.iter().enumerate() {
            if j < self.n {
                acc += ln_gamma_unchecked(1.0 - g.value - g.scale * s);
            } else {
                acc -= ln_gamma_unchecked(g.value + g.scale * s);
            }
        }
        acc
    }

    /// The gamma ratio at real `s`; this is the Mellin transform
    /// `∫₀^∞ x^{s-1} H(x) dx` inside the admissible strip.
    pub fn mellin_transform(&self, s: f64) -> f64 {
        let lk = self.log_kernel(Complex64::new(s, 0.0));
        lk.re.exp() * lk.im.cos().signum()
    }
}
