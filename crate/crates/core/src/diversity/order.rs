//! Analytic diversity orders and empirical slope fits.

use super::{Combining, DiversityError};
use crate::channel::{EggParams, PointingParams};
use crate::curve::OutageCurve;

/// Which exponent sets the high-SNR slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BindingTerm {
    /// `N/2`, from the exponential branch.
    NHalf,
    /// `Nac/2`, from the generalized-gamma branch.
    NacHalf,
    /// `Nρ²/2`, from pointing error.
    NRho2Half,
}

impl BindingTerm {
    pub fn as_str(self) -> &'static str {
        match self {
            BindingTerm::NHalf => "N/2",
            BindingTerm::NacHalf => "Nac/2",
            BindingTerm::NRho2Half => "Nrho^2/2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityOrderReport {
    pub n: usize,
    pub scheme: Combining,
    pub analytic: f64,
    pub binding_term: BindingTerm,
    pub fitted: Option<f64>,
}

/// `min{N/2, Nac/2, Nρ²/2}`, identical for MRC and SC. Ties go to the
/// earlier term in that list.
pub fn diversity_order(n: usize, p: &EggParams, pe: &PointingParams, scheme: Combining) -> DiversityOrderReport {
    let nf = n as f64;
    let candidates = [
        (nf / 2.0, BindingTerm::NHalf),
        (nf * p.a() * p.c() / 2.0, BindingTerm::NacHalf),
        (nf * pe.rho2() / 2.0, BindingTerm::NRho2Half),
    ];
    let (analytic, binding_term) = candidates
        .into_iter()
        .fold(candidates[0], |best, c| if c.0 < best.0 { c } else { best });
    DiversityOrderReport {
        n,
        scheme,
        analytic,
        binding_term,
        fitted: None,
    }
}

/// Window for slope fitting: the top `span_db` of γ₀ among points whose
/// outage lies strictly inside `(p_min, p_max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeWindow {
    pub span_db: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl Default for SlopeWindow {
    fn default() -> Self {
        Self {
            span_db: 15.0,
            p_min: 1e-6,
            p_max: 1e-1,
        }
    }
}

pub const MIN_FIT_POINTS: usize = 3;

/// Least-squares slope of `log₁₀ P` against `γ₀(dB)/10`, negated.
pub fn fit_slope(curve: &OutageCurve, window: &SlopeWindow) -> Result<f64, DiversityError> {
    let inside: Vec<(f64, f64)> = curve
        .points()
        .iter()
        .filter(|p| p.value > window.p_min && p.value < window.p_max)
        .map(|p| (p.gamma0_db / 10.0, p.value.log10()))
        .collect();
    let top = inside.iter().map(|&(x, _)| x).fold(f64::NEG_INFINITY, f64::max);
    let pts: Vec<(f64, f64)> = inside
        .into_iter()
        .filter(|&(x, _)| x >= top - window.span_db / 10.0 - 1e-12)
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(DiversityError::InsufficientPoints {
            found: pts.len(),
            needed: MIN_FIT_POINTS,
        });
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(DiversityError::InsufficientPoints {
            found: 1,
            needed: MIN_FIT_POINTS,
        });
    }
    Ok(-sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Source;

    #[test]
    fn binding_terms_for_reference_parameters() {
        let p = EggParams::reference();
        let r = diversity_order(1, &p, &PointingParams::significant(), Combining::Mrc);
        assert_eq!(r.binding_term, BindingTerm::NacHalf);
        assert!((r.analytic - 0.266_070_44).abs() < 1e-12);
        let r = diversity_order(4, &p, &PointingParams::strong(), Combining::Sc);
        assert_eq!(r.binding_term, BindingTerm::NRho2Half);
        assert!((r.analytic - 4.0 * 0.5718f64.powi(2) / 2.0).abs() < 1e-12);
        let r = diversity_order(2, &p, &PointingParams::negligible(), Combining::Mrc);
        assert_eq!(r.binding_term, BindingTerm::NacHalf);
    }

    #[test]
    fn order_scales_linearly() {
        let p = EggParams::reference();
        let pe = PointingParams::strong();
        let one = diversity_order(1, &p, &pe, Combining::Mrc).analytic;
        for n in 2..6 {
            let r = diversity_order(n, &p, &pe, Combining::Mrc);
            assert!((r.analytic - n as f64 * one).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_power_law_slope() {
        let d = 0.8;
        let curve = OutageCurve::from_gamma0(
            Source::Analytic,
            (0..40).map(|i| {
                let g0_db = 20.0 + i as f64;
                (g0_db, 10f64.powf(-d * g0_db / 10.0))
            }),
        )
        .unwrap();
        assert!((fit_slope(&curve, &SlopeWindow::default()).unwrap() - d).abs() < 1e-12);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let curve = OutageCurve::from_gamma0(Source::Analytic, [(10.0, 0.5), (20.0, 0.05), (30.0, 0.2)]).unwrap();
        assert!(matches!(
            fit_slope(&curve, &SlopeWindow::default()),
            Err(DiversityError::InsufficientPoints { found: 1, .. })
        ));
    }
}
