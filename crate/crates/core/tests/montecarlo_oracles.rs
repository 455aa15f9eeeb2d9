use rand_distr::{Binomial, Distribution};

use uwoc_core::channel::{egg_cdf, EggParams, PointingParams};
use uwoc_core::diversity::{mrc_pdf_bound, sc_pdf, ApertureArray, MrcBoundConvention};
use uwoc_core::montecarlo::{block_rng, sample_egg, sample_pointing, simulate_counts, OutageEstimate, Scheme};

fn mean_and_sigma(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

#[test]
fn egg_sampler_passes_ks() {
    let p = EggParams::reference();
    let mut rng = block_rng(7, 0);
    let n = 100_000;
    let mut xs: Vec<f64> = (0..n).map(|_| sample_egg(&p, &mut rng)).collect();
    xs.sort_by(f64::total_cmp);
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = egg_cdf(x, &p);
            (f - i as f64 / n as f64).max((i + 1) as f64 / n as f64 - f)
        })
        .fold(0.0, f64::max);
    assert!(d < 1.6276 / (n as f64).sqrt(), "D = {d}");
}

#[test]
fn pointing_sampler_mean() {
    let mut rng = block_rng(3, 0);
    for pe in [
        PointingParams::significant(),
        PointingParams::strong(),
        PointingParams::negligible(),
    ] {
        let xs: Vec<f64> = (0..1_000_000).map(|_| sample_pointing(&pe, &mut rng)).collect();
        let (m, s) = mean_and_sigma(&xs);
        let exact = pe.a0() * pe.rho2() / (pe.rho2() + 1.0);
        assert!((m - exact).abs() < 5.0 * s, "{m} vs {exact}");
        assert!(xs.iter().all(|&x| x > 0.0 && x <= pe.a0()));
    }
}

#[test]
fn exponential_branch_mean() {
    let t = EggParams::reference();
    let p = EggParams::new(1.0 - 1e-9, t.lambda(), t.a(), t.b(), t.c()).unwrap();
    let mut rng = block_rng(5, 0);
    let xs: Vec<f64> = (0..1_000_000).map(|_| sample_egg(&p, &mut rng)).collect();
    let (m, s) = mean_and_sigma(&xs);
    assert!((m - t.lambda()).abs() < 5.0 * s, "{m}");
}

#[test]
fn wilson_interval_coverage() {
    let mut rng = block_rng(11, 0);
    for (n, p) in [(1000u64, 0.01), (10_000, 0.001), (500, 0.3)] {
        let reps = 4000;
        let covered = (0..reps)
            .filter(|_| {
                let k = Binomial::new(n, p).unwrap().sample(&mut rng);
                let e = OutageEstimate::from_counts(k, n);
                e.ci_low <= p && p <= e.ci_high
            })
            .count();
        let rate = covered as f64 / reps as f64;
        assert!(rate >= 0.98, "n = {n}, p = {p}: coverage {rate}");
    }
}

/// Fraction of trials with the scheme's statistic in `[γ(1−δ), γ(1+δ)]`,
/// divided by the bin width.
fn histogram_density(arr: &ApertureArray, scheme: Scheme, gamma: f64, trials: u64) -> f64 {
    let delta = 0.02;
    let t = [gamma * (1.0 - delta), gamma * (1.0 + delta)];
    let c = simulate_counts(arr, trials, 17, 8, &[scheme], &t).unwrap();
    (c[0][1] - c[0][0]) as f64 / trials as f64 / (2.0 * delta * gamma)
}

#[test]
fn geometric_mean_density_matches_histogram() {
    let arr = ApertureArray::iid(2, EggParams::reference(), PointingParams::significant(), 1.0).unwrap();
    let conv = MrcBoundConvention::default();
    let hist = histogram_density(&arr, Scheme::NTimesGeometricMean, 1.0, 10_000_000);
    let analytic = mrc_pdf_bound(1.0, &arr, &conv).unwrap();
    assert!((hist / analytic - 1.0).abs() < 0.05, "{hist} vs {analytic}");
}

#[test]
fn selection_density_matches_histogram() {
    let arr = ApertureArray::iid(3, EggParams::reference(), PointingParams::strong(), 1.0).unwrap();
    for gamma in [0.3, 1.0, 3.0] {
        let hist = histogram_density(&arr, Scheme::ScMax, gamma, 4_000_000);
        let analytic = sc_pdf(gamma, &arr).unwrap();
        assert!(
            (hist / analytic - 1.0).abs() < 0.05,
            "γ = {gamma}: {hist} vs {analytic}"
        );
    }
}
