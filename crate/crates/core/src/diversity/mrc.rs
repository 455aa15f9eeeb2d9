//! Geometric-mean bound on the MRC SNR and its small-argument expansion.
//!
//! For a branch assignment where apertures in `E` take the exponential branch
//! and the rest the generalized-gamma branch, the geometric mean has density
//! `(w/γ) H^{2N,0}_{N,2N}[K γ]` with, per aperture,
//!
//! ```text
//! exponential:        lower (1, 2/N), (ρ², 2/N)        upper (ρ²+1, 2/N)
//! generalized gamma:  lower (a, 2/(cN)), (ρ²/c, 2/(cN))  upper (ρ²/c+1, 2/(cN))
//! ```
//!
//! and `K = Π (γ₀ β_i² A₀ᵢ²)^{−1/N}` with `β = λ` or `b`. The CDF prepends
//! `(1, 1)` to the upper list (`n = 1`) and appends `(0, 1)` to the lower.

use super::{binomial, ApertureArray, BoundVariant, DiversityError, Expansion, MrcBoundConvention, Prefactor};
use crate::channel::{clamp_probability, EggParams, PointingParams};
use crate::specfun::{fox_h_auto, gamma_real, residue_series, GammaParam, MellinBarnesSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Exponential,
    GeneralizedGamma,
}

/// One branch assignment of the geometric-mean law.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureTerm {
    /// Coefficient including multiplicity.
    pub weight: f64,
    /// `K`: the Fox-H argument is `K·γ`.
    pub scale: f64,
    pub pdf_spec: MellinBarnesSpec,
    pub cdf_spec: MellinBarnesSpec,
    pub label: String,
}

fn branch_factor(
    branch: Branch,
    p: &EggParams,
    pe: &PointingParams,
    n: f64,
    g0: f64,
    prefactor: Prefactor,
) -> Result<(f64, f64, [GammaParam; 2], GammaParam), DiversityError> {
    let rho2 = pe.rho2();
    let rho_factor = match prefactor {
        Prefactor::AsPrinted => 1.0,
        Prefactor::RhoSquared => rho2,
    };
    Ok(match branch {
        Branch::Exponential => {
            let s = 2.0 / n;
            (
                p.omega() * rho_factor,
                -(g0 * (p.lambda() * pe.a0()).powi(2)).ln() / n,
                [GammaParam::new(1.0, s), GammaParam::new(rho2, s)],
                GammaParam::new(rho2 + 1.0, s),
            )
        }
        Branch::GeneralizedGamma => {
            let c = p.c();
            let s = 2.0 / (c * n);
            let rc = rho2 / c;
            (
                (1.0 - p.omega()) * rho_factor / (c * gamma_real(p.a())?),
                -(g0 * (p.b() * pe.a0()).powi(2)).ln() / n,
                [GammaParam::new(p.a(), s), GammaParam::new(rc, s)],
                GammaParam::new(rc + 1.0, s),
            )
        }
    })
}

fn build_term(
    arr: &ApertureArray,
    branches: &[Branch],
    multiplicity: f64,
    conv: &MrcBoundConvention,
) -> Result<MixtureTerm, DiversityError> {
    let n = arr.n() as f64;
    let mut weight = multiplicity;
    let mut ln_scale = 0.0;
    let mut first = Vec::with_capacity(branches.len());
    let mut second = Vec::with_capacity(branches.len());
    let mut upper = Vec::with_capacity(branches.len());
    for (ap, &b) in arr.apertures().iter().zip(branches) {
        let (w, ln_k, lower, up) = branch_factor(b, &ap.egg, &ap.pointing, n, arr.g0(), conv.prefactor)?;
        weight *= w;
        ln_scale += ln_k;
        first.push(lower[0]);
        second.push(lower[1]);
        upper.push(up);
    }
    let n_exp = branches.iter().filter(|&&b| b == Branch::Exponential).count();
    let label = format!("{n_exp} exponential, {} generalized-gamma", branches.len() - n_exp);
    let lower: Vec<GammaParam> = first.into_iter().chain(second).collect();
    let m = lower.len();
    let wrap = |e| DiversityError::Term {
        context: format!("assembling the {label} term"),
        source: e,
    };
    let pdf_spec = MellinBarnesSpec::new(m, 0, upper.iter().copied(), lower.iter().copied()).map_err(wrap)?;
    let cdf_spec = MellinBarnesSpec::new(
        m,
        1,
        std::iter::once(GammaParam::unit(1.0)).chain(upper.iter().copied()),
        lower.iter().copied().chain(std::iter::once(GammaParam::unit(0.0))),
    )
    .map_err(wrap)?;
    Ok(MixtureTerm {
        weight,
        scale: ln_scale.exp(),
        pdf_spec,
        cdf_spec,
        label,
    })
}

/// Fox-H terms of the geometric-mean law under `conv`.
pub fn mixture_terms(arr: &ApertureArray, conv: &MrcBoundConvention) -> Result<Vec<MixtureTerm>, DiversityError> {
    let n = arr.n();
    let assignments: Vec<(Vec<Branch>, f64)> = match conv.expansion {
        Expansion::PureBranches => vec![
            (vec![Branch::Exponential; n], 1.0),
            (vec![Branch::GeneralizedGamma; n], 1.0),
        ],
        Expansion::FullMixture if arr.is_iid() => (0..=n)
            .map(|k| {
                let mut b = vec![Branch::Exponential; k];
                b.resize(n, Branch::GeneralizedGamma);
                (b, binomial(n, k))
            })
            .collect(),
        Expansion::FullMixture => {
            if n > 20 {
                return Err(DiversityError::Domain(format!(
                    "{n} heterogeneous apertures give too many branch assignments"
                )));
            }
            (0..1usize << n)
                .map(|mask| {
                    let b = (0..n)
                        .map(|i| {
                            if mask >> i & 1 == 1 {
                                Branch::Exponential
                            } else {
                                Branch::GeneralizedGamma
                            }
                        })
                        .collect();
                    (b, 1.0)
                })
                .collect()
        }
    };
    assignments
        .iter()
        .map(|(b, mult)| build_term(arr, b, *mult, conv))
        .collect()
}

/// `∫₀^∞ f dγ` of the bound density under `conv`, from the Mellin transforms
/// at zero.
pub fn total_mass(arr: &ApertureArray, conv: &MrcBoundConvention) -> Result<f64, DiversityError> {
    Ok(mixture_terms(arr, conv)?
        .iter()
        .map(|t| t.weight * t.pdf_spec.mellin_transform(0.0))
        .sum())
}

fn effective_gamma(gamma: f64, arr: &ApertureArray, conv: &MrcBoundConvention) -> f64 {
    match conv.variant {
        BoundVariant::GammaN => gamma,
        BoundVariant::NTimesGammaN => gamma / arr.n() as f64,
    }
}

fn eval_term(t: &MixtureTerm, spec: &MellinBarnesSpec, x: f64) -> Result<f64, DiversityError> {
    let wrap = |e| DiversityError::Term {
        context: format!("evaluating the {} term at {x:e}", t.label),
        source: e,
    };
    fox_h_auto(spec, x).map_err(wrap)
}

fn check_gamma(gamma: f64) -> Result<(), DiversityError> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(DiversityError::Domain(format!("SNR must be non-negative, got {gamma}")));
    }
    Ok(())
}

/// CDF of the variable selected by `conv` (`γ_N` or `N γ_N`) at `gamma`.
pub fn mrc_cdf_bound(gamma: f64, arr: &ApertureArray, conv: &MrcBoundConvention) -> Result<f64, DiversityError> {
    check_gamma(gamma)?;
    if gamma == 0.0 {
        return Ok(0.0);
    }
    if gamma.is_infinite() {
        return Ok(1.0);
    }
    let g = effective_gamma(gamma, arr, conv);
    let mut v = 0.0;
    for t in mixture_terms(arr, conv)? {
        v += t.weight * eval_term(&t, &t.cdf_spec, t.scale * g)?;
    }
    Ok(if conv.is_normalized() {
        clamp_probability(v)
    } else {
        v.clamp(0.0, 1.0)
    })
}

/// Density of the variable selected by `conv` at `gamma > 0`.
pub fn mrc_pdf_bound(gamma: f64, arr: &ApertureArray, conv: &MrcBoundConvention) -> Result<f64, DiversityError> {
    check_gamma(gamma)?;
    if gamma == 0.0 || gamma.is_infinite() {
        return Ok(0.0);
    }
    let g = effective_gamma(gamma, arr, conv);
    let mut v = 0.0;
    for t in mixture_terms(arr, conv)? {
        v += t.weight * eval_term(&t, &t.pdf_spec, t.scale * g)? / g;
    }
    Ok(v * g / gamma)
}

/// Outage probability bound at threshold `gamma_th`.
///
/// Under the default convention this is `P(N γ_N ≤ γ_th)`, which is at least
/// the true MRC outage since `Σ γ_i ≥ N γ_N`.
pub fn mrc_outage(gamma_th: f64, arr: &ApertureArray, conv: &MrcBoundConvention) -> Result<f64, DiversityError> {
    if !(gamma_th > 0.0) {
        return Err(DiversityError::Domain(format!(
            "threshold must be positive, got {gamma_th}"
        )));
    }
    mrc_cdf_bound(gamma_th, arr, conv)
}

/// One residue contribution to the small-argument outage.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticContribution {
    /// Power of `γ_th/γ₀` carried by the term (minus the pole location).
    pub exponent: f64,
    /// Net pole order; orders above one bring `ln` factors.
    pub order: i32,
    pub value: f64,
    pub label: String,
}

/// Residue contributions of every mixture term, first `terms` poles each,
/// sorted by increasing exponent.
pub fn mrc_asymptotic_expansion(
    gamma_th: f64,
    arr: &ApertureArray,
    conv: &MrcBoundConvention,
    terms: usize,
) -> Result<Vec<AsymptoticContribution>, DiversityError> {
    if !(gamma_th > 0.0) {
        return Err(DiversityError::Domain(format!(
            "threshold must be positive, got {gamma_th}"
        )));
    }
    let g = effective_gamma(gamma_th, arr, conv);
    let mut out = Vec::new();
    for t in mixture_terms(arr, conv)? {
        let series = residue_series(&t.cdf_spec, t.scale * g, terms).map_err(|e| DiversityError::Term {
            context: format!("expanding the {} term", t.label),
            source: e,
        })?;
        for r in series.terms {
            out.push(AsymptoticContribution {
                exponent: -r.pole,
                order: r.order,
                value: t.weight * r.value,
                label: t.label.clone(),
            });
        }
    }
    out.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
    Ok(out)
}

/// Small-argument outage: the residue series of every mixture term,
/// `terms` poles each.
pub fn mrc_outage_asymptotic(
    gamma_th: f64,
    arr: &ApertureArray,
    conv: &MrcBoundConvention,
    terms: usize,
) -> Result<f64, DiversityError> {
    Ok(mrc_asymptotic_expansion(gamma_th, arr, conv, terms)?
        .iter()
        .map(|c| c.value)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::super::geometric_mean_cdf_by_inversion;
    use super::*;
    use crate::channel::{snr_cdf_single, snr_pdf_single};
    use crate::quad;
    use approx::assert_relative_eq;

    fn sig(n: usize, g0: f64) -> ApertureArray {
        ApertureArray::iid(n, EggParams::reference(), PointingParams::significant(), g0).unwrap()
    }

    fn plain() -> MrcBoundConvention {
        MrcBoundConvention {
            variant: BoundVariant::GammaN,
            ..Default::default()
        }
    }

    #[test]
    fn single_aperture_reduces_to_channel_law() {
        let (p, pe) = (EggParams::reference(), PointingParams::significant());
        let arr = sig(1, 100.0);
        for conv in [plain(), MrcBoundConvention::default()] {
            for g in [0.05, 3.0, 100.0, 900.0] {
                assert_relative_eq!(
                    mrc_cdf_bound(g, &arr, &conv).unwrap(),
                    snr_cdf_single(g, &p, &pe, 100.0).unwrap(),
                    max_relative = 1e-8
                );
                assert_relative_eq!(
                    mrc_pdf_bound(g, &arr, &conv).unwrap(),
                    snr_pdf_single(g, &p, &pe, 100.0).unwrap(),
                    max_relative = 1e-8
                );
            }
        }
    }

    // Reference: geometric-mean CDF from 30-digit Mellin inversion.
    #[test]
    fn geometric_mean_reference_values() {
        let cases = [
            (
                2,
                [
                    0.330_767_836_750_536_4,
                    0.870_356_060_153_359_9,
                    0.987_150_312_148_399_7,
                ],
            ),
            (
                3,
                [
                    0.316_192_478_709_035_1,
                    0.922_885_629_901_814_2,
                    0.997_172_949_818_438_4,
                ],
            ),
        ];
        for (n, want) in cases {
            let arr = sig(n, 1.0);
            for (y, w) in [1e-3, 0.1, 1.0].into_iter().zip(want) {
                assert_relative_eq!(mrc_cdf_bound(y, &arr, &plain()).unwrap(), w, max_relative = 1e-8);
            }
        }
        assert_relative_eq!(
            mrc_pdf_bound(1.0, &sig(2, 1.0), &plain()).unwrap(),
            0.017_985_595_964_804_15,
            max_relative = 1e-8
        );
    }

    #[test]
    fn agrees_with_direct_inversion_for_mixed_array() {
        let p = EggParams::reference();
        let aps = vec![
            super::super::Aperture {
                egg: p,
                pointing: PointingParams::significant(),
            },
            super::super::Aperture {
                egg: p,
                pointing: PointingParams::strong(),
            },
        ];
        let arr = ApertureArray::new(aps, 5.0).unwrap();
        for y in [0.01, 1.0, 10.0] {
            assert_relative_eq!(
                mrc_cdf_bound(y, &arr, &plain()).unwrap(),
                geometric_mean_cdf_by_inversion(y, &arr).unwrap(),
                max_relative = 1e-7
            );
        }
    }

    #[test]
    fn only_full_mixture_with_rho_squared_normalizes() {
        for n in [2, 3] {
            let (conv, mass) =
                MrcBoundConvention::select_by_normalization(&sig(n, 1.0), BoundVariant::NTimesGammaN).unwrap();
            assert_eq!(conv, MrcBoundConvention::default());
            assert!((mass - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn density_integrates_to_one() {
        let arr = sig(3, 1.0);
        let conv = MrcBoundConvention::default();
        let total = quad::semi_infinite_log(|g| mrc_pdf_bound(g, &arr, &conv).unwrap(), 1e-12, 1e4, 1e-7);
        assert!((total.value - 1.0).abs() < 1e-4, "mass {}", total.value);
    }

    #[test]
    fn density_is_cdf_derivative() {
        let arr = sig(2, 1.0);
        let conv = MrcBoundConvention::default();
        for g in [0.01, 0.5, 4.0] {
            let h = 1e-4 * g;
            let fd =
                (mrc_cdf_bound(g + h, &arr, &conv).unwrap() - mrc_cdf_bound(g - h, &arr, &conv).unwrap()) / (2.0 * h);
            assert_relative_eq!(mrc_pdf_bound(g, &arr, &conv).unwrap(), fd, max_relative = 1e-3);
        }
    }

    #[test]
    fn zero_threshold_and_monotone() {
        let arr = sig(2, 1.0);
        let conv = MrcBoundConvention::default();
        assert_eq!(mrc_cdf_bound(0.0, &arr, &conv).unwrap(), 0.0);
        assert!(mrc_outage(0.0, &arr, &conv).is_err());
        let mut prev = 1.0;
        for g0_db in (0..=60).step_by(10) {
            let g0 = 10f64.powf(g0_db as f64 / 10.0);
            let v = mrc_outage(1e6, &arr.with_g0(g0).unwrap(), &conv).unwrap();
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn leading_exponent_single_aperture() {
        let arr = sig(1, 1e12);
        let expansion = mrc_asymptotic_expansion(1e6, &arr, &MrcBoundConvention::default(), 1).unwrap();
        let want = 0.6302 * 0.8444 / 2.0;
        assert!((expansion[0].exponent - want).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_tracks_exact_at_high_snr() {
        let conv = MrcBoundConvention::default();
        for n in [1, 2, 3] {
            let arr = sig(n, 10f64.powf(16.0));
            let exact = mrc_outage(1e6, &arr, &conv).unwrap();
            let asym = mrc_outage_asymptotic(1e6, &arr, &conv, 4).unwrap();
            assert!(exact < 1e-2);
            assert!((asym / exact - 1.0).abs() < 0.1, "n={n}: {asym} vs {exact}");
        }
    }
}
