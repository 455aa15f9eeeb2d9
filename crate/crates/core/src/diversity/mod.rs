//! Multi-aperture statistics for maximal-ratio and selection combining.
//!
//! The MRC SNR is bounded through the geometric mean `γ_N = (Π γ_i)^{1/N}`:
//! by AM ≥ GM, `γ_MRC = Σ γ_i ≥ N γ_N`, so the CDF of `N γ_N` is an upper
//! bound on the MRC outage. Each aperture's SNR law is a two-branch mixture,
//! so the geometric mean's law is a sum over branch assignments, one Fox-H
//! term per assignment. SC is exact: the product of the per-aperture CDFs.

mod mellin;
mod mrc;
mod order;
mod sc;

use std::fmt;

use thiserror::Error;

use crate::channel::{ChannelError, EggParams, PointingParams};
use crate::specfun::SpecFunError;

pub use mellin::{geometric_mean_cdf_by_inversion, moment_fractional, moment_fractional_complex, moment_lower_bound};
pub use mrc::{
    mixture_terms, mrc_asymptotic_expansion, mrc_cdf_bound, mrc_outage, mrc_outage_asymptotic, mrc_pdf_bound,
    total_mass, AsymptoticContribution, MixtureTerm,
};
pub use order::{diversity_order, fit_slope, BindingTerm, DiversityOrderReport, SlopeWindow, MIN_FIT_POINTS};
pub use sc::{sc_cdf, sc_outage_asymptotic, sc_pdf};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiversityError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("{context}: {source}")]
    Term {
        context: String,
        #[source]
        source: SpecFunError,
    },
    #[error("{0}")]
    Domain(String),
    #[error("operation requires identically distributed apertures")]
    NotIid,
    #[error("slope fit needs at least {needed} points inside the window, found {found}")]
    InsufficientPoints { found: usize, needed: usize },
}

/// Turbulence and pointing parameters of one aperture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aperture {
    pub egg: EggParams,
    pub pointing: PointingParams,
}

/// Receiver apertures sharing one average SNR `γ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApertureArray {
    apertures: Vec<Aperture>,
    g0: f64,
}

impl ApertureArray {
    pub fn new(apertures: Vec<Aperture>, g0: f64) -> Result<Self, DiversityError> {
        if apertures.is_empty() {
            return Err(DiversityError::Domain("an array needs at least one aperture".into()));
        }
        if !(g0 > 0.0) || !g0.is_finite() {
            return Err(DiversityError::Domain(format!(
                "average SNR must be positive, got {g0}"
            )));
        }
        Ok(Self { apertures, g0 })
    }

    /// `n` copies of one parameter pair.
    pub fn iid(n: usize, egg: EggParams, pointing: PointingParams, g0: f64) -> Result<Self, DiversityError> {
        Self::new(vec![Aperture { egg, pointing }; n], g0)
    }

    pub fn n(&self) -> usize {
        self.apertures.len()
    }

    pub fn apertures(&self) -> &[Aperture] {
        &self.apertures
    }

    pub fn g0(&self) -> f64 {
        self.g0
    }

    pub fn with_g0(&self, g0: f64) -> Result<Self, DiversityError> {
        Self::new(self.apertures.clone(), g0)
    }

    pub fn is_iid(&self) -> bool {
        self.apertures.iter().all(|a| *a == self.apertures[0])
    }

    pub(crate) fn first(&self) -> &Aperture {
        &self.apertures[0]
    }
}

/// Which variable's law stands in for the MRC SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundVariant {
    /// The geometric mean `γ_N` itself.
    GammaN,
    /// `N γ_N`, a lower bound on `Σ γ_i`.
    NTimesGammaN,
}

/// Coefficient in front of each aperture's Fox-H factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prefactor {
    /// `ω` and `(1−ω)/(cΓ(a))` only.
    AsPrinted,
    /// `ωρ²` and `(1−ω)ρ²/(cΓ(a))`, as in the single-aperture law.
    RhoSquared,
}

/// How the per-aperture two-branch mixtures are multiplied out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expansion {
    /// Only the all-exponential and all-generalized-gamma products.
    PureBranches,
    /// Every branch assignment (`2^N` terms, `N+1` for identical apertures).
    FullMixture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MrcBoundConvention {
    pub variant: BoundVariant,
    pub prefactor: Prefactor,
    pub expansion: Expansion,
}

impl Default for MrcBoundConvention {
    /// The only combination whose density integrates to one.
    fn default() -> Self {
        Self {
            variant: BoundVariant::NTimesGammaN,
            prefactor: Prefactor::RhoSquared,
            expansion: Expansion::FullMixture,
        }
    }
}

impl MrcBoundConvention {
    pub const ALL_COEFFICIENTS: [(Prefactor, Expansion); 4] = [
        (Prefactor::AsPrinted, Expansion::PureBranches),
        (Prefactor::AsPrinted, Expansion::FullMixture),
        (Prefactor::RhoSquared, Expansion::PureBranches),
        (Prefactor::RhoSquared, Expansion::FullMixture),
    ];

    pub fn is_normalized(&self) -> bool {
        self.prefactor == Prefactor::RhoSquared && self.expansion == Expansion::FullMixture
    }

    /// Picks the prefactor/expansion pair whose density has unit mass for
    /// `arr`; returns it with its mass. Ties (all pairs coincide at N = 1)
    /// go to the default.
    pub fn select_by_normalization(arr: &ApertureArray, variant: BoundVariant) -> Result<(Self, f64), DiversityError> {
        let mut best: Option<(Self, f64)> = None;
        for (prefactor, expansion) in Self::ALL_COEFFICIENTS.into_iter().rev() {
            let conv = Self {
                variant,
                prefactor,
                expansion,
            };
            let mass = total_mass(arr, &conv)?;
            if !best.is_some_and(|(_, m)| (mass - 1.0).abs() >= (m - 1.0).abs() - 1e-12) {
                best = Some((conv, mass));
            }
        }
        Ok(best.expect("candidate list is non-empty"))
    }

    pub fn parse(s: &str) -> Option<Self> {
        let mut conv = Self::default();
        for part in s.split('/') {
            match part.trim() {
                "gamma_n" => conv.variant = BoundVariant::GammaN,
                "n_times_gamma_n" => conv.variant = BoundVariant::NTimesGammaN,
                "as_printed" => conv.prefactor = Prefactor::AsPrinted,
                "rho_squared" => conv.prefactor = Prefactor::RhoSquared,
                "pure_branches" => conv.expansion = Expansion::PureBranches,
                "full_mixture" => conv.expansion = Expansion::FullMixture,
                _ => return None,
            }
        }
        Some(conv)
    }
}

impl fmt::Display for MrcBoundConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.variant {
            BoundVariant::GammaN => "gamma_n",
            BoundVariant::NTimesGammaN => "n_times_gamma_n",
        };
        let p = match self.prefactor {
            Prefactor::AsPrinted => "as_printed",
            Prefactor::RhoSquared => "rho_squared",
        };
        let e = match self.expansion {
            Expansion::PureBranches => "pure_branches",
            Expansion::FullMixture => "full_mixture",
        };
        write!(f, "{v}/{p}/{e}")
    }
}

/// Combining scheme for diversity-order reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Combining {
    Mrc,
    Sc,
}

impl Combining {
    pub fn as_str(self) -> &'static str {
        match self {
            Combining::Mrc => "mrc",
            Combining::Sc => "sc",
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
