use num_complex::Complex64;

use super::{residue_series, MellinBarnesSpec, SpecFunError};
use crate::quad::GaussLegendre;

/// Vertical-contour quadrature settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourConfig {
    /// Real part of the integration line.
    pub abscissa: f64,
    /// Initial truncation of the imaginary range.
    pub half_height: f64,
    /// Initial panel count on `[0, half_height]`.
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Two successive refinements must agree to this relative tolerance.
    pub rel_tol: f64,
    pub max_doublings: u32,
}

impl ContourConfig {
    pub const DEFAULT_REL_TOL: f64 = 1e-10;
    pub const DEFAULT_NODES: usize = 32;
    pub const DEFAULT_DOUBLINGS: u32 = 6;

    /// Midpoint abscissa, half-height `50/δ`, 32-node panels.
    pub fn for_spec(spec: &MellinBarnesSpec) -> Result<Self, SpecFunError> {
        Ok(Self {
            abscissa: spec.default_abscissa()?,
            half_height: 50.0 / spec.delta(),
            panels: 8,
            nodes_per_panel: Self::DEFAULT_NODES,
            rel_tol: Self::DEFAULT_REL_TOL,
            max_doublings: Self::DEFAULT_DOUBLINGS,
        })
    }

    /// Like [`for_spec`](Self::for_spec) but with the abscissa moved to the
    /// minimum of `|Φ(c) x^{−c}|` on the real axis, kept clear of both pole
    /// families. Near that saddle the integrand does not cancel, so the
    /// result keeps its relative accuracy far out in either tail.
    pub fn for_argument(spec: &MellinBarnesSpec, x: f64) -> Result<Self, SpecFunError> {
        let mut cfg = Self::for_spec(spec)?;
        if x > 0.0 && x.is_finite() {
            cfg.abscissa = saddle_abscissa(spec, x, cfg.abscissa);
        }
        Ok(cfg)
    }

    fn validate(&self, spec: &MellinBarnesSpec) -> Result<(), SpecFunError> {
        let (left, right) = spec.admissible_strip();
        if !(left < right) || !(self.abscissa > left && self.abscissa < right) {
            return Err(SpecFunError::Degenerate { left, right });
        }
        if !(self.half_height > 0.0) || self.panels == 0 || self.nodes_per_panel == 0 {
            return Err(SpecFunError::InvalidSpec(format!(
                "invalid contour configuration {self:?}"
            )));
        }
        Ok(())
    }
}

/// Golden-section minimum of `Re ln Φ(c) − c ln x` over the admissible strip
/// shrunk by a margin (a quarter of its width, at most one half). Open sides
/// are searched up to 50 units from `start`.
fn saddle_abscissa(spec: &MellinBarnesSpec, x: f64, start: f64) -> f64 {
    const REACH: f64 = 50.0;
    let (left, right) = spec.admissible_strip();
    let margin = if left.is_finite() && right.is_finite() {
        (0.25 * (right - left)).min(0.5)
    } else {
        0.5
    };
    let lo = if left.is_finite() { left + margin } else { start - REACH };
    let hi = if right.is_finite() {
        right - margin
    } else {
        start + REACH
    };
    if !(lo < hi) {
        return start;
    }
    let ln_x = x.ln();
    let phi = |c: f64| {
        let v = spec.log_kernel(Complex64::new(c, 0.0)).re - c * ln_x;
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c1 = b - g * (b - a);
    let mut c2 = a + g * (b - a);
    let (mut f1, mut f2) = (phi(c1), phi(c2));
    while b - a > 1e-3 {
        if f1 <= f2 {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - g * (b - a);
            f1 = phi(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + g * (b - a);
            f2 = phi(c2);
        }
    }
    let best = 0.5 * (a + b);
    // keep the midpoint unless the saddle is clearly better
    if phi(best) < phi(start) - 1.0 {
        best
    } else {
        start
    }
}

/// Converged contour integral plus the iterate it was checked against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourResult {
    pub value: f64,
    pub previous: f64,
    pub panels: usize,
    pub half_height: f64,
    /// ∫|integrand| dt / π, the scale against which cancellation is judged.
    pub magnitude: f64,
}

struct Pass {
    value: f64,
    magnitude: f64,
    tail: f64,
}

fn integrate_pass(
    spec: &MellinBarnesSpec,
    ln_x: f64,
    c: f64,
    half_height: f64,
    panels: usize,
    rule: &GaussLegendre,
) -> Pass {
    let integrand = |t: f64| {
        let s = Complex64::new(c, t);
        (spec.log_kernel(s) - s * ln_x).exp().re
    };
    let width = half_height / panels as f64;
    let mut value = 0.0;
    let mut magnitude = 0.0;
    for k in 0..panels {
        let lo = k as f64 * width;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        for (&node, &w) in rule.nodes.iter().zip(&rule.weights) {
            let g = integrand(mid + half * node);
            value += w * half * g;
            magnitude += w * half * g.abs();
        }
    }
    let tail = integrand(half_height).abs() * half_height.max(1.0);
    Pass {
        value: value / std::f64::consts::PI,
        magnitude: magnitude / std::f64::consts::PI,
        tail: tail / std::f64::consts::PI,
    }
}

/// Fox-H at `x > 0` with convergence diagnostics.
///
/// The integrand is conjugate-symmetric in `t`, so the line integral reduces
/// to `(1/π) ∫₀^T Re[Φ(c+it) x^{−c−it}] dt`. Panels are doubled until two
/// successive passes agree; the half-height doubles alongside whenever the
/// integrand at `T` is not negligible.
pub fn fox_h_detailed(spec: &MellinBarnesSpec, x: f64, cfg: &ContourConfig) -> Result<ContourResult, SpecFunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecFunError::NonPositiveArgument(x));
    }
    cfg.validate(spec)?;
    let owned;
    let rule = if cfg.nodes_per_panel == ContourConfig::DEFAULT_NODES {
        GaussLegendre::order32()
    } else {
        owned = GaussLegendre::new(cfg.nodes_per_panel);
        &owned
    };
    let ln_x = x.ln();
    let c = cfg.abscissa;
    let mut half_height = cfg.half_height;

    // Oscillation rate of the integrand: |ln x| from x^{-it}, plus the phase
    // growth of each gamma factor (~ B ln|B t|).
    let phase_rate = ln_x.abs()
        + spec
            .upper()
            .iter()
            .chain(spec.lower())
            .map(|g| g.scale * (1.0 + g.scale * half_height).ln())
            .sum::<f64>();
    let per_nodes = cfg.nodes_per_panel as f64 / 32.0;
    let needed = (half_height * phase_rate / (2.0 * std::f64::consts::PI * 5.0 * per_nodes)).ceil() as usize;
    let mut panels = cfg.panels.max(needed);

    let mut prev = integrate_pass(spec, ln_x, c, half_height, panels, rule);
    for _ in 0..cfg.max_doublings {
        panels *= 2;
        if prev.tail > 1e-16 * prev.magnitude {
            half_height *= 2.0;
            panels *= 2;
        }
        let cur = integrate_pass(spec, ln_x, c, half_height, panels, rule);
        let floor = 1e-14 * cur.magnitude;
        if (cur.value - prev.value).abs() <= cfg.rel_tol * cur.value.abs() + floor && cur.tail <= 1e-14 * cur.magnitude
        {
            return Ok(ContourResult {
                value: cur.value,
                previous: prev.value,
                panels,
                half_height,
                magnitude: cur.magnitude,
            });
        }
        prev = cur;
        if !prev.value.is_finite() {
            break;
        }
    }
    let last = integrate_pass(spec, ln_x, c, half_height, panels * 2, rule);
    Err(SpecFunError::Accuracy {
        last: last.value,
        previous: prev.value,
    })
}

/// Fox-H function `H^{m,n}_{p,q}(x)` by vertical-contour quadrature.
pub fn fox_h(spec: &MellinBarnesSpec, x: f64, cfg: &ContourConfig) -> Result<f64, SpecFunError> {
    fox_h_detailed(spec, x, cfg).map(|r| r.value)
}

/// Cancellation ratio `∫|integrand| / |value|` above which the contour result
/// is cross-checked against the residue series.
pub const CANCELLATION_LIMIT: f64 = 1e3;

/// Below this argument the left-residue series is tried before the contour.
pub const SERIES_FIRST_BELOW: f64 = 1e-2;

/// Fox-H with an argument-dependent contour. Small arguments go to the
/// left-residue series first, which converges in a few terms there; the
/// contour is the fallback, and the series is also consulted when the
/// contour integral cancels heavily. A series value is used only if it has
/// visibly converged without internal cancellation.
pub fn fox_h_auto(spec: &MellinBarnesSpec, x: f64) -> Result<f64, SpecFunError> {
    if x > 0.0 && x < SERIES_FIRST_BELOW {
        if let Some(v) = converged_series(spec, x) {
            return Ok(v);
        }
    }
    let cfg = ContourConfig::for_argument(spec, x)?;
    let res = match fox_h_detailed(spec, x, &cfg) {
        Ok(res) => res,
        Err(e @ SpecFunError::Accuracy { .. }) if (SERIES_FIRST_BELOW..1.0).contains(&x) => {
            return converged_series(spec, x).ok_or(e);
        }
        Err(e) => return Err(e),
    };
    if !(SERIES_FIRST_BELOW..1.0).contains(&x) || res.magnitude <= CANCELLATION_LIMIT * res.value.abs() {
        return Ok(res.value);
    }
    Ok(converged_series(spec, x).unwrap_or(res.value))
}

/// Left-residue sum, if it converges to full precision within 128 terms.
fn converged_series(spec: &MellinBarnesSpec, x: f64) -> Option<f64> {
    let mut terms = 8;
    while terms <= 128 {
        let series = residue_series(spec, x, terms).ok()?;
        let k = series.terms.len();
        if k < 2 || series.diverging {
            break;
        }
        let tail = series.terms[k - 2..].iter().map(|t| t.value.abs()).fold(0.0, f64::max);
        let largest = series.terms.iter().map(|t| t.value.abs()).fold(0.0, f64::max);
        if tail <= 1e-15 * series.sum.abs() && largest <= CANCELLATION_LIMIT * series.sum.abs() {
            return Some(series.sum);
        }
        // not shrinking: more terms will not help
        if k < terms || tail >= series.terms[0].value.abs() {
            break;
        }
        terms *= 2;
    }
    None
}

/// Meijer-G `G^{m,n}_{p,q}(a; b | x)`: the unit-scale Fox-H.
pub fn meijer_g(m: usize, n: usize, a: &[f64], b: &[f64], x: f64) -> Result<f64, SpecFunError> {
    let spec = MellinBarnesSpec::meijer(m, n, a, b)?;
    fox_h_auto(&spec, x)
}
