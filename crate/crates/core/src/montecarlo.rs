//! Brute-force channel simulation.
//!
//! Each trial draws, per aperture, a turbulence gain `h_t` from the EGG
//! mixture and a pointing gain `h_p = A₀ U^{1/ρ²}`, forms
//! `γ_i = γ₀ (h_t h_p)²` and combines the branches. Trials are split into
//! fixed-size blocks, each with its own ChaCha stream, so results depend only
//! on `(seed, trials)` and not on how blocks are scheduled across workers.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma};
use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{EggParams, PointingParams};
use crate::diversity::ApertureArray;

/// Two-sided 99% standard-normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;
pub const MIN_TRIALS: u64 = 1_000;
const BLOCK: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("at least {MIN_TRIALS} trials are required, got {0}")]
    TooFewTrials(u64),
    #[error("worker count must be positive")]
    NoWorkers,
    #[error("threshold must be non-negative, got {0}")]
    BadThreshold(f64),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// How branch SNRs are combined into one decision statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    MrcExactSum,
    ScMax,
    GeometricMean,
    NTimesGeometricMean,
    /// First aperture only.
    Single,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::MrcExactSum,
        Scheme::ScMax,
        Scheme::GeometricMean,
        Scheme::NTimesGeometricMean,
        Scheme::Single,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::MrcExactSum => "mrc_exact_sum",
            Scheme::ScMax => "sc_max",
            Scheme::GeometricMean => "geometric_mean",
            Scheme::NTimesGeometricMean => "n_times_geometric_mean",
            Scheme::Single => "single",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.as_str() == s)
    }

    /// Combines normalized branch SNRs `γ_i/γ₀`.
    pub fn combine(self, snr: &[f64]) -> f64 {
        let n = snr.len() as f64;
        match self {
            Scheme::MrcExactSum => snr.iter().sum(),
            Scheme::ScMax => snr.iter().copied().fold(0.0, f64::max),
            Scheme::GeometricMean => (snr.iter().map(|g| g.ln()).sum::<f64>() / n).exp(),
            Scheme::NTimesGeometricMean => n * (snr.iter().map(|g| g.ln()).sum::<f64>() / n).exp(),
            Scheme::Single => snr[0],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub scheme: Scheme,
    pub arr: ApertureArray,
    pub gamma_th: f64,
}

impl SimConfig {
    pub fn new(
        trials: u64,
        seed: u64,
        workers: usize,
        scheme: Scheme,
        arr: ApertureArray,
        gamma_th: f64,
    ) -> Result<Self, SimError> {
        let cfg = Self {
            trials,
            seed,
            workers,
            scheme,
            arr,
            gamma_th,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.trials < MIN_TRIALS {
            return Err(SimError::TooFewTrials(self.trials));
        }
        if self.workers == 0 {
            return Err(SimError::NoWorkers);
        }
        if self.gamma_th.is_nan() || self.gamma_th < 0.0 {
            return Err(SimError::BadThreshold(self.gamma_th));
        }
        Ok(())
    }
}

/// Empirical probability with its 99% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub count: u64,
}

impl OutageEstimate {
    pub fn from_counts(count: u64, trials: u64) -> Self {
        let n = trials as f64;
        let p = count as f64 / n;
        let z2 = Z_99 * Z_99;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = Z_99 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        Self {
            p_hat: p,
            ci_low: (center - half).clamp(0.0, p),
            ci_high: (center + half).clamp(p, 1.0),
            trials,
            count,
        }
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    /// Binomial standard deviation of the estimate if the true value were `p`.
    pub fn sigma_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// One EGG irradiance draw.
pub fn sample_egg<R: Rng + ?Sized>(p: &EggParams, rng: &mut R) -> f64 {
    if rng.random::<f64>() < p.omega() {
        Exp::new(1.0 / p.lambda()).expect("positive rate").sample(rng)
    } else {
        let g: f64 = Gamma::new(p.a(), 1.0).expect("positive shape").sample(rng);
        p.b() * g.powf(1.0 / p.c())
    }
}

/// Pointing gain `A₀ U^{1/ρ²}` from a uniform `u` in (0, 1].
pub fn pointing_from_uniform(pe: &PointingParams, u: f64) -> f64 {
    pe.a0() * u.powf(1.0 / pe.rho2())
}

/// One pointing-gain draw in (0, A₀].
pub fn sample_pointing<R: Rng + ?Sized>(pe: &PointingParams, rng: &mut R) -> f64 {
    // 1 − U lies in (0, 1]
    pointing_from_uniform(pe, 1.0 - rng.random::<f64>())
}

/// Fills `out` with one trial's normalized branch SNRs `(h_t h_p)²`.
pub fn draw_branch_snrs<R: Rng + ?Sized>(arr: &ApertureArray, rng: &mut R, out: &mut [f64]) {
    for (slot, ap) in out.iter_mut().zip(arr.apertures()) {
        let h = sample_egg(&ap.egg, rng) * sample_pointing(&ap.pointing, rng);
        *slot = h * h;
    }
}

/// Deterministic generator for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Counts, for every scheme and every threshold, trials whose combined SNR
/// is at most the threshold. Thresholds are absolute SNRs at `arr.g0()`.
pub fn simulate_counts(
    arr: &ApertureArray,
    trials: u64,
    seed: u64,
    workers: usize,
    schemes: &[Scheme],
    thresholds: &[f64],
) -> Result<Vec<Vec<u64>>, SimError> {
    if trials < MIN_TRIALS {
        return Err(SimError::TooFewTrials(trials));
    }
    if workers == 0 {
        return Err(SimError::NoWorkers);
    }
    if let Some(&bad) = thresholds.iter().find(|t| t.is_nan() || **t < 0.0) {
        return Err(SimError::BadThreshold(bad));
    }
    // normalized thresholds, sorted, with their original positions
    let mut order: Vec<usize> = (0..thresholds.len()).collect();
    order.sort_by(|&i, &j| thresholds[i].total_cmp(&thresholds[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| thresholds[i] / arr.g0()).collect();
    let blocks = trials.div_ceil(BLOCK);
    let n = arr.n();
    let ns = schemes.len();
    let nt = sorted.len();

    let run_block = |b: u64| -> Vec<u64> {
        let mut rng = block_rng(seed, b);
        let len = BLOCK.min(trials - b * BLOCK);
        // first_hit[s][k]: trials whose statistic first fits under sorted[k]
        let mut first_hit = vec![0u64; ns * (nt + 1)];
        let mut snr = vec![0.0; n];
        for _ in 0..len {
            draw_branch_snrs(arr, &mut rng, &mut snr);
            for (s, scheme) in schemes.iter().enumerate() {
                let v = scheme.combine(&snr);
                let k = sorted.partition_point(|&t| t < v);
                first_hit[s * (nt + 1) + k] += 1;
            }
        }
        first_hit
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SimError::Pool(e.to_string()))?;
    let partials: Vec<Vec<u64>> = pool.install(|| (0..blocks).into_par_iter().map(run_block).collect());

    let mut out = vec![vec![0u64; nt]; ns];
    for s in 0..ns {
        let mut running = 0u64;
        for k in 0..nt {
            running += partials.iter().map(|p| p[s * (nt + 1) + k]).sum::<u64>();
            out[s][order[k]] = running;
        }
    }
    Ok(out)
}

/// Outage estimates at several thresholds from one set of draws.
pub fn simulate_grid(cfg: &SimConfig, thresholds: &[f64]) -> Result<Vec<OutageEstimate>, SimError> {
    cfg.validate()?;
    let counts = simulate_counts(&cfg.arr, cfg.trials, cfg.seed, cfg.workers, &[cfg.scheme], thresholds)?;
    Ok(counts[0]
        .iter()
        .map(|&c| OutageEstimate::from_counts(c, cfg.trials))
        .collect())
}

/// Empirical `P(combined SNR ≤ γ_th)`.
pub fn simulate(cfg: &SimConfig) -> Result<OutageEstimate, SimError> {
    Ok(simulate_grid(cfg, &[cfg.gamma_th])?[0])
}
