//! Selection combining: the best branch SNR.

use super::{binomial, ApertureArray, DiversityError};
use crate::channel::{single_asymptotic_terms, snr_cdf_single, snr_pdf_single};

/// `P(max γ_i ≤ γ) = Π F_i(γ)`; `F^N` for identical apertures.
pub fn sc_cdf(gamma: f64, arr: &ApertureArray) -> Result<f64, DiversityError> {
    if arr.is_iid() {
        let ap = arr.first();
        let f = snr_cdf_single(gamma, &ap.egg, &ap.pointing, arr.g0())?;
        return Ok(f.powi(arr.n() as i32));
    }
    let mut prod = 1.0;
    for ap in arr.apertures() {
        prod *= snr_cdf_single(gamma, &ap.egg, &ap.pointing, arr.g0())?;
    }
    Ok(prod)
}

/// `Σ_i f_i Π_{j≠i} F_j`; `N F^{N−1} f` for identical apertures.
pub fn sc_pdf(gamma: f64, arr: &ApertureArray) -> Result<f64, DiversityError> {
    let n = arr.n();
    if arr.is_iid() {
        let ap = arr.first();
        let f = snr_pdf_single(gamma, &ap.egg, &ap.pointing, arr.g0())?;
        let big_f = snr_cdf_single(gamma, &ap.egg, &ap.pointing, arr.g0())?;
        return Ok(n as f64 * big_f.powi(n as i32 - 1) * f);
    }
    let mut cdfs = Vec::with_capacity(n);
    let mut pdfs = Vec::with_capacity(n);
    for ap in arr.apertures() {
        cdfs.push(snr_cdf_single(gamma, &ap.egg, &ap.pointing, arr.g0())?);
        pdfs.push(snr_pdf_single(gamma, &ap.egg, &ap.pointing, arr.g0())?);
    }
    Ok((0..n)
        .map(|i| pdfs[i] * (0..n).filter(|&j| j != i).map(|j| cdfs[j]).product::<f64>())
        .sum())
}

/// Small-argument SC outage for identical apertures: the four-term
/// single-aperture expansion `T₁ + T₂ + T₃ + T₄` raised to the `N`th power,
/// multiplied out as
///
/// ```text
/// Σ_{k₁≤N} Σ_{k₂≤k₁} Σ_{k₃≤k₂} C(N,k₁) C(k₁,k₂) C(k₂,k₃) T₁^{N−k₁} T₂^{k₁−k₂} T₃^{k₂−k₃} T₄^{k₃}
/// ```
pub fn sc_outage_asymptotic(gamma_th: f64, arr: &ApertureArray) -> Result<f64, DiversityError> {
    if !arr.is_iid() {
        return Err(DiversityError::NotIid);
    }
    let ap = arr.first();
    let t = single_asymptotic_terms(gamma_th, &ap.egg, &ap.pointing, arr.g0())?.values;
    let n = arr.n();
    let mut sum = 0.0;
    for k1 in 0..=n {
        for k2 in 0..=k1 {
            for k3 in 0..=k2 {
                sum += binomial(n, k1)
                    * binomial(k1, k2)
                    * binomial(k2, k3)
                    * t[0].powi((n - k1) as i32)
                    * t[1].powi((k1 - k2) as i32)
                    * t[2].powi((k2 - k3) as i32)
                    * t[3].powi(k3 as i32);
            }
        }
    }
    Ok(sum)
}
