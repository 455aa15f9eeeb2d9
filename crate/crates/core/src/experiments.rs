//! Figure-style experiments behind the command-line tool.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::channel::{egg_cdf, to_db, EggParams};
use crate::config::ExperimentConfig;
use crate::curve::{CurveMeta, OutageCurve, Source};
use crate::diversity::{
    diversity_order, fit_slope, mrc_outage, mrc_outage_asymptotic, sc_cdf, sc_outage_asymptotic, total_mass,
    ApertureArray, BoundVariant, Combining, DiversityOrderReport, MrcBoundConvention, SlopeWindow,
};
use crate::error::UwocError;
use crate::montecarlo::{block_rng, sample_egg, simulate_counts, OutageEstimate, Scheme};
use crate::output::{write_csv, write_meta};
use crate::specfun::{fox_h, ContourConfig, GammaParam, MellinBarnesSpec};
use crate::svg::{self, Series, Style};

/// Largest array size whose slope and asymptotic checks are enforced. For
/// more apertures outage falls below 1e-6 before the curve reaches its
/// asymptotic slope, so the fitted value is reported but not checked.
pub const SLOPE_CHECK_MAX_N: usize = 4;

/// Share of failed points above which a command reports failure.
pub const MAX_FAILED_FRACTION: f64 = 0.10;

#[derive(Debug, Clone)]
pub struct OutputOptions {
    pub out_dir: PathBuf,
    pub svg: bool,
}

#[derive(Debug, Clone)]
pub struct CommandSummary {
    pub curves: Vec<OutageCurve>,
    pub files: Vec<PathBuf>,
    pub convention: Option<MrcBoundConvention>,
}

impl CommandSummary {
    pub fn total_points(&self) -> usize {
        self.curves.iter().map(|c| c.len()).sum()
    }

    pub fn failed_points(&self) -> usize {
        self.curves.iter().map(|c| c.failed_points()).sum()
    }

    pub fn too_many_failures(&self) -> bool {
        self.failed_points() as f64 > MAX_FAILED_FRACTION * self.total_points() as f64
    }
}

/// Convention from the config, or the one whose density integrates to one.
pub fn resolve_convention(cfg: &ExperimentConfig, n: usize) -> Result<MrcBoundConvention, UwocError> {
    if let Some(conv) = cfg.convention()? {
        return Ok(conv);
    }
    let arr = cfg.array(n, 0.0)?;
    let (conv, mass) = MrcBoundConvention::select_by_normalization(&arr, BoundVariant::NTimesGammaN)?;
    log::info!("N = {n}: selected convention {conv} (mass {mass:.12})");
    Ok(conv)
}

fn meta(scheme: &str, n: usize, conv: Option<MrcBoundConvention>, seed: Option<u64>) -> CurveMeta {
    CurveMeta {
        scheme: scheme.into(),
        n,
        convention: conv.map(|c| c.to_string()),
        seed,
        version: crate::VERSION.into(),
    }
}

/// Evaluates `f` at every power in parallel; failures become NaN. Asymptotic
/// values outside [0, 1] (before the high-SNR regime) are dropped.
fn analytic_curve<F>(
    cfg: &ExperimentConfig,
    powers: &[f64],
    n: usize,
    source: Source,
    meta: CurveMeta,
    f: F,
) -> Result<OutageCurve, UwocError>
where
    F: Fn(&ApertureArray) -> Result<f64, UwocError> + Sync,
{
    let values: Vec<(f64, f64, f64)> = powers
        .par_iter()
        .map(|&pt| {
            let arr = cfg.array(n, pt)?;
            let v = f(&arr).unwrap_or_else(|e| {
                log::warn!("{} N={n} at {pt} dBm failed: {e}", source);
                f64::NAN
            });
            Ok((pt, to_db(arr.g0()), v))
        })
        .collect::<Result<_, UwocError>>()?;
    let mut curve = OutageCurve::new(source, meta);
    for (pt, g0_db, v) in values {
        if source == Source::Asymptotic && !(0.0..=1.0).contains(&v) {
            continue;
        }
        curve.push(pt, g0_db, v).map_err(UwocError::Validation)?;
    }
    Ok(curve)
}

/// Monte Carlo curves (estimate and 99% bounds) for each scheme, all powers
/// from one set of draws: outage at `γ₀` and threshold `γ_th` equals outage
/// at a reference `γ₀'` and threshold `γ_th γ₀'/γ₀`.
fn mc_curves(
    cfg: &ExperimentConfig,
    powers: &[f64],
    n: usize,
    schemes: &[(Scheme, &str)],
    conv: Option<MrcBoundConvention>,
) -> Result<Vec<OutageCurve>, UwocError> {
    let reference = cfg.array(n, 0.0)?;
    let mut g0s = Vec::with_capacity(powers.len());
    for &pt in powers {
        g0s.push(cfg.link_budget(pt)?.gamma0());
    }
    let thresholds: Vec<f64> = g0s.iter().map(|g0| cfg.gamma_th() * reference.g0() / g0).collect();
    let kinds: Vec<Scheme> = schemes.iter().map(|s| s.0).collect();
    let counts = simulate_counts(
        &reference,
        cfg.mc.trials,
        cfg.mc.seed,
        cfg.mc.workers,
        &kinds,
        &thresholds,
    )?;
    let mut out = Vec::new();
    for ((_, label), counts) in schemes.iter().zip(counts) {
        let est: Vec<OutageEstimate> = counts
            .iter()
            .map(|&c| OutageEstimate::from_counts(c, cfg.mc.trials))
            .collect();
        for (source, pick) in [
            (
                Source::MonteCarlo,
                (|e: &OutageEstimate| e.p_hat) as fn(&OutageEstimate) -> f64,
            ),
            (Source::McCiLow, |e| e.ci_low),
            (Source::McCiHigh, |e| e.ci_high),
        ] {
            let mut c = OutageCurve::new(source, meta(label, n, conv, Some(cfg.mc.seed)));
            for ((&pt, g0), e) in powers.iter().zip(&g0s).zip(&est) {
                c.push(pt, to_db(*g0), pick(e)).map_err(UwocError::Validation)?;
            }
            out.push(c);
        }
    }
    Ok(out)
}

/// Outage-versus-power curves for every configured `(scheme, N)`.
pub fn curve_data(cfg: &ExperimentConfig) -> Result<(Vec<OutageCurve>, Option<MrcBoundConvention>), UwocError> {
    cfg.validate()?;
    let powers = cfg.sweep.powers();
    let g_th = cfg.gamma_th();
    let terms = cfg.receiver.asymptotic_terms;
    let mut curves = Vec::new();
    let mut chosen = None;
    for &n in &cfg.receiver.n_list {
        let mut mc_schemes = Vec::new();
        if cfg.receiver.scheme.includes_mrc() {
            let conv = resolve_convention(cfg, n)?;
            chosen = Some(conv);
            curves.push(analytic_curve(
                cfg,
                &powers,
                n,
                Source::Analytic,
                meta("mrc", n, Some(conv), None),
                |arr| Ok(mrc_outage(g_th, arr, &conv)?),
            )?);
            curves.push(analytic_curve(
                cfg,
                &powers,
                n,
                Source::Asymptotic,
                meta("mrc", n, Some(conv), None),
                |arr| Ok(mrc_outage_asymptotic(g_th, arr, &conv, terms)?),
            )?);
            mc_schemes.push((Scheme::MrcExactSum, "mrc"));
        }
        if cfg.receiver.scheme.includes_sc() {
            curves.push(analytic_curve(
                cfg,
                &powers,
                n,
                Source::Analytic,
                meta("sc", n, None, None),
                |arr| Ok(sc_cdf(g_th, arr)?),
            )?);
            curves.push(analytic_curve(
                cfg,
                &powers,
                n,
                Source::Asymptotic,
                meta("sc", n, None, None),
                |arr| Ok(sc_outage_asymptotic(g_th, arr)?),
            )?);
            mc_schemes.push((Scheme::ScMax, "sc"));
        }
        if cfg.mc.enabled {
            curves.extend(mc_curves(cfg, &powers, n, &mc_schemes, chosen)?);
        }
    }
    Ok((curves, chosen))
}

/// CDF of the bound variable at `γ_th` against `γ₀`, with the Monte Carlo
/// CDF of that variable (`mrc_bound`) and of the exact sum (`mrc`).
pub fn cdf_data(cfg: &ExperimentConfig) -> Result<(Vec<OutageCurve>, Option<MrcBoundConvention>), UwocError> {
    cfg.validate()?;
    let powers = cfg.sweep.powers();
    let g_th = cfg.gamma_th();
    let mut curves = Vec::new();
    let mut chosen = None;
    for &n in &cfg.receiver.n_list {
        let conv = resolve_convention(cfg, n)?;
        chosen = Some(conv);
        curves.push(analytic_curve(
            cfg,
            &powers,
            n,
            Source::Analytic,
            meta("mrc_bound", n, Some(conv), None),
            |arr| Ok(mrc_outage(g_th, arr, &conv)?),
        )?);
        if cfg.mc.enabled {
            let bound_var = match conv.variant {
                BoundVariant::GammaN => Scheme::GeometricMean,
                BoundVariant::NTimesGammaN => Scheme::NTimesGeometricMean,
            };
            curves.extend(mc_curves(
                cfg,
                &powers,
                n,
                &[(bound_var, "mrc_bound"), (Scheme::MrcExactSum, "mrc")],
                Some(conv),
            )?);
        }
    }
    Ok((curves, chosen))
}

fn chart(curves: &[OutageCurve], x_is_power: bool, title: &str) -> String {
    let mut keys: Vec<(String, usize)> = Vec::new();
    for c in curves {
        let k = (c.meta.scheme.clone(), c.meta.n);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let series: Vec<Series> = curves
        .iter()
        .filter(|c| matches!(c.source, Source::Analytic | Source::Asymptotic | Source::MonteCarlo))
        .map(|c| {
            let color_index = keys
                .iter()
                .position(|k| k.0 == c.meta.scheme && k.1 == c.meta.n)
                .unwrap_or(0);
            Series {
                label: format!("{} N={} {}", c.meta.scheme, c.meta.n, c.source),
                style: match c.source {
                    Source::Analytic => Style::Line,
                    Source::Asymptotic => Style::Dashed,
                    _ => Style::Markers,
                },
                color_index,
                points: c
                    .points()
                    .iter()
                    .map(|p| (if x_is_power { p.pt_dbm } else { p.gamma0_db }, p.value))
                    .collect(),
            }
        })
        .collect();
    let x_label = if x_is_power {
        "transmit power (dBm)"
    } else {
        "average SNR (dB)"
    };
    svg::render(title, x_label, "probability", &series)
}

fn emit(
    name: &str,
    curves: Vec<OutageCurve>,
    conv: Option<MrcBoundConvention>,
    cfg: &ExperimentConfig,
    opts: &OutputOptions,
    x_is_power: bool,
    title: &str,
) -> Result<CommandSummary, UwocError> {
    std::fs::create_dir_all(&opts.out_dir)?;
    let csv_path = opts.out_dir.join(format!("{name}.csv"));
    let meta_path = opts.out_dir.join(format!("{name}.meta.toml"));
    write_csv(&csv_path, &curves)?;
    write_meta(&meta_path, name, cfg.mc.enabled.then_some(cfg.mc.trials), &curves)?;
    let mut files = vec![csv_path, meta_path];
    if opts.svg {
        let svg_path = opts.out_dir.join(format!("{name}.svg"));
        std::fs::write(&svg_path, chart(&curves, x_is_power, title))?;
        files.push(svg_path);
    }
    Ok(CommandSummary {
        curves,
        files,
        convention: conv,
    })
}

pub fn cmd_curve(cfg: &ExperimentConfig, opts: &OutputOptions) -> Result<CommandSummary, UwocError> {
    let (curves, conv) = curve_data(cfg)?;
    emit("curve", curves, conv, cfg, opts, true, "Outage probability")
}

pub fn cmd_cdf(cfg: &ExperimentConfig, opts: &OutputOptions) -> Result<CommandSummary, UwocError> {
    let (curves, conv) = cdf_data(cfg)?;
    emit("cdf", curves, conv, cfg, opts, false, "CDF of the combined SNR")
}

/// Exact outage on the extended power grid, restricted to the fit window:
/// finds the highest power with outage above the window floor by bisection
/// (outage is monotone in power), then walks down until the window is full.
fn fit_curve<F>(
    cfg: &ExperimentConfig,
    n: usize,
    window: &SlopeWindow,
    meta: CurveMeta,
    f: F,
) -> Result<OutageCurve, UwocError>
where
    F: Fn(&ApertureArray) -> Result<f64, UwocError>,
{
    let d = &cfg.diversity;
    let powers = crate::config::SweepSection {
        start_dbm: d.start_dbm,
        stop_dbm: d.stop_dbm,
        step_db: d.step_db,
    }
    .powers();
    let eval = |i: usize| -> Result<(f64, f64, f64), UwocError> {
        let arr = cfg.array(n, powers[i])?;
        Ok((powers[i], to_db(arr.g0()), f(&arr)?))
    };
    // largest index with value > p_min
    let (mut lo, mut hi) = (0usize, powers.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if eval(mid)?.2 > window.p_min {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut pts = Vec::new();
    let mut i = lo as isize;
    let mut top_db = None;
    while i >= 0 {
        let (pt, g0_db, v) = eval(i as usize)?;
        if v >= window.p_max {
            break;
        }
        if v > window.p_min {
            let top = *top_db.get_or_insert(g0_db);
            if g0_db < top - window.span_db - 1e-9 {
                break;
            }
            pts.push((pt, g0_db, v));
        }
        i -= 1;
    }
    pts.reverse();
    let mut curve = OutageCurve::new(Source::Analytic, meta);
    for (pt, g0_db, v) in pts {
        curve.push(pt, g0_db, v).map_err(UwocError::Validation)?;
    }
    Ok(curve)
}

/// Analytic orders with slopes fitted to the exact outage curves.
pub fn diversity_rows(cfg: &ExperimentConfig) -> Result<Vec<DiversityOrderReport>, UwocError> {
    cfg.validate()?;
    let p = cfg.egg_params()?;
    let pe = cfg.pointing_params()?;
    let g_th = cfg.gamma_th();
    let window = SlopeWindow {
        span_db: cfg.diversity.span_db,
        ..SlopeWindow::default()
    };
    let mut jobs = Vec::new();
    for &n in &cfg.receiver.n_list {
        if cfg.receiver.scheme.includes_mrc() {
            jobs.push((Combining::Mrc, n));
        }
        if cfg.receiver.scheme.includes_sc() {
            jobs.push((Combining::Sc, n));
        }
    }
    jobs.par_iter()
        .map(|&(scheme, n)| {
            let mut report = diversity_order(n, &p, &pe, scheme);
            let curve = match scheme {
                Combining::Mrc => {
                    let conv = resolve_convention(cfg, n)?;
                    fit_curve(cfg, n, &window, meta("mrc", n, Some(conv), None), |arr| {
                        Ok(mrc_outage(g_th, arr, &conv)?)
                    })?
                }
                Combining::Sc => fit_curve(cfg, n, &window, meta("sc", n, None, None), |arr| Ok(sc_cdf(g_th, arr)?))?,
            };
            report.fitted = match fit_slope(&curve, &window) {
                Ok(s) => Some(s),
                Err(e) => {
                    log::warn!("{} N={n}: {e}", scheme.as_str());
                    None
                }
            };
            Ok(report)
        })
        .collect()
}

pub fn format_diversity_table(rows: &[DiversityOrderReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<6} {:>3} {:>10} {:>10} {:>10}  binding",
        "scheme", "N", "analytic", "fitted", "rel.err"
    );
    for r in rows {
        let (fitted, err) = match r.fitted {
            Some(f) => (
                format!("{f:.5}"),
                format!("{:.2}%", 100.0 * (f / r.analytic - 1.0).abs()),
            ),
            None => ("n/a".into(), "n/a".into()),
        };
        let _ = writeln!(
            s,
            "{:<6} {:>3} {:>10.5} {:>10} {:>10}  {}",
            r.scheme.as_str(),
            r.n,
            r.analytic,
            fitted,
            err,
            r.binding_term.as_str()
        );
    }
    s
}

pub fn write_diversity_csv(path: &Path, rows: &[DiversityOrderReport]) -> Result<(), UwocError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["scheme", "n", "analytic", "binding_term", "fitted"])?;
    for r in rows {
        w.write_record([
            r.scheme.as_str().to_string(),
            r.n.to_string(),
            format!("{:.10}", r.analytic),
            r.binding_term.as_str().to_string(),
            r.fitted.map_or("nan".into(), |f| format!("{f:.10}")),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_diversity(
    cfg: &ExperimentConfig,
    opts: &OutputOptions,
) -> Result<(Vec<DiversityOrderReport>, PathBuf), UwocError> {
    let rows = diversity_rows(cfg)?;
    std::fs::create_dir_all(&opts.out_dir)?;
    let path = opts.out_dir.join("diversity.csv");
    write_diversity_csv(&path, &rows)?;
    Ok((rows, path))
}

/// One oracle check with its measured value and tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
        }
    }
}

/// Kolmogorov–Smirnov statistic of `samples` (sorted in place) against `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// 1% critical value of the one-sample KS statistic (large-sample form).
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

fn max_z(est: &[OutageEstimate], want: &[f64]) -> f64 {
    est.iter()
        .zip(want)
        .filter(|(_, &w)| w > 0.0 && w < 1.0)
        .map(|(e, &w)| (e.p_hat - w).abs() / e.sigma_at(w))
        .fold(0.0, f64::max)
}

/// The oracle suite: identities, normalization, sampler fit, analytic vs
/// Monte Carlo, bound direction, asymptotic convergence and slopes.
pub fn run_validation(cfg: &ExperimentConfig) -> Result<Vec<Check>, UwocError> {
    cfg.validate()?;
    let mut checks = Vec::new();
    let p = cfg.egg_params()?;
    let g_th = cfg.gamma_th();
    let powers = cfg.sweep.powers();

    // Fox-H reduction to e^{-x}
    let spec = MellinBarnesSpec::new(1, 0, [], [GammaParam::unit(0.0)])?;
    let ccfg = ContourConfig::for_spec(&spec)?;
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let x = 1e-3 * (2e4f64).powf(k as f64 / 49.0);
        worst = worst.max((fox_h(&spec, x, &ccfg)? / (-x).exp() - 1.0).abs());
    }
    checks.push(Check::at_most(
        "fox_h exponential identity (max rel. error)",
        worst,
        1e-8,
    ));

    // sampler
    let mut rng = block_rng(cfg.mc.seed, u64::MAX);
    let mut xs: Vec<f64> = (0..100_000).map(|_| sample_egg(&p, &mut rng)).collect();
    let d = ks_statistic(&mut xs, |h| egg_cdf(h, &p));
    checks.push(Check::at_most(
        "EGG sampler KS statistic",
        d,
        ks_critical_1pct(xs.len()),
    ));

    for &n in &cfg.receiver.n_list {
        let arr0 = cfg.array(n, 0.0)?;
        let g0s: Vec<f64> = powers
            .iter()
            .map(|&pt| cfg.link_budget(pt).map(|l| l.gamma0()))
            .collect::<Result<_, _>>()?;
        let thresholds: Vec<f64> = g0s.iter().map(|g| g_th * arr0.g0() / g).collect();
        let schemes = [Scheme::MrcExactSum, Scheme::ScMax, Scheme::Single];
        let counts = simulate_counts(&arr0, cfg.mc.trials, cfg.mc.seed, cfg.mc.workers, &schemes, &thresholds)?;
        let est = |s: usize| -> Vec<OutageEstimate> {
            counts[s]
                .iter()
                .map(|&c| OutageEstimate::from_counts(c, cfg.mc.trials))
                .collect()
        };
        let arrays: Vec<ApertureArray> = g0s.iter().map(|&g| arr0.with_g0(g)).collect::<Result<_, _>>()?;

        if n == cfg.receiver.n_list[0] {
            let single: Vec<f64> = arrays
                .iter()
                .map(|a| crate::channel::snr_cdf_single(g_th, &a.first().egg, &a.first().pointing, a.g0()))
                .collect::<Result<_, _>>()?;
            checks.push(Check::at_most(
                "single-aperture analytic vs MC (max |z|)",
                max_z(&est(2), &single),
                3.0,
            ));
        }
        if cfg.receiver.scheme.includes_mrc() {
            let conv = resolve_convention(cfg, n)?;
            let mass = total_mass(&arr0, &conv)?;
            checks.push(Check::at_most(
                format!("N={n} bound density mass |1 - mass|"),
                (mass - 1.0).abs(),
                1e-4,
            ));
            let bound: Vec<f64> = arrays
                .par_iter()
                .map(|a| mrc_outage(g_th, a, &conv))
                .collect::<Result<_, _>>()?;
            // positive = MC exceeds the bound beyond its CI
            let violation = est(0)
                .iter()
                .zip(&bound)
                .map(|(e, b)| (e.p_hat - e.half_width()) - b)
                .fold(f64::NEG_INFINITY, f64::max);
            checks.push(Check::at_most(
                format!("N={n} MRC bound above exact-sum MC"),
                violation,
                0.0,
            ));
        }
        if cfg.receiver.scheme.includes_sc() {
            let exact: Vec<f64> = arrays.par_iter().map(|a| sc_cdf(g_th, a)).collect::<Result<_, _>>()?;
            checks.push(Check::at_most(
                format!("N={n} SC analytic vs max-combining MC (max |z|)"),
                max_z(&est(1), &exact),
                3.0,
            ));
        }
    }

    for r in diversity_rows(cfg)?.into_iter().filter(|r| r.n <= SLOPE_CHECK_MAX_N) {
        let err = r.fitted.map_or(f64::INFINITY, |f| (f / r.analytic - 1.0).abs());
        checks.push(Check::at_most(
            format!(
                "{} N={} fitted slope vs {:.5} (rel. error)",
                r.scheme.as_str(),
                r.n,
                r.analytic
            ),
            err,
            0.15,
        ));
    }
    checks.extend(asymptotic_checks(cfg)?);
    Ok(checks)
}

/// `|asymptotic/exact − 1|` at every extended-sweep point with exact outage
/// below 1e-2.
fn asymptotic_checks(cfg: &ExperimentConfig) -> Result<Vec<Check>, UwocError> {
    let d = &cfg.diversity;
    let powers = crate::config::SweepSection {
        start_dbm: d.start_dbm,
        stop_dbm: d.stop_dbm,
        step_db: d.step_db,
    }
    .powers();
    let g_th = cfg.gamma_th();
    let terms = cfg.receiver.asymptotic_terms;
    let mut out = Vec::new();
    for &n in cfg.receiver.n_list.iter().filter(|&&n| n <= SLOPE_CHECK_MAX_N) {
        let mut kinds = Vec::new();
        if cfg.receiver.scheme.includes_mrc() {
            kinds.push(Combining::Mrc);
        }
        if cfg.receiver.scheme.includes_sc() {
            kinds.push(Combining::Sc);
        }
        for kind in kinds {
            let conv = resolve_convention(cfg, n)?;
            let worst = powers
                .par_iter()
                .map(|&pt| -> Result<f64, UwocError> {
                    let arr = cfg.array(n, pt)?;
                    let (exact, asym) = match kind {
                        Combining::Mrc => {
                            let e = mrc_outage(g_th, &arr, &conv)?;
                            if e >= 1e-2 {
                                return Ok(0.0);
                            }
                            (e, mrc_outage_asymptotic(g_th, &arr, &conv, terms)?)
                        }
                        Combining::Sc => {
                            let e = sc_cdf(g_th, &arr)?;
                            if e >= 1e-2 {
                                return Ok(0.0);
                            }
                            (e, sc_outage_asymptotic(g_th, &arr)?)
                        }
                    };
                    Ok((asym / exact - 1.0).abs())
                })
                .collect::<Result<Vec<f64>, _>>()?
                .into_iter()
                .fold(0.0, f64::max);
            out.push(Check::at_most(
                format!(
                    "{} N={n} asymptotic vs exact below 1e-2 (max rel. error)",
                    kind.as_str()
                ),
                worst,
                0.10,
            ));
        }
    }
    Ok(out)
}

pub fn format_checks(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        let _ = writeln!(
            s,
            "{}  {:<62} measured {:>12.4e}  tolerance {:>10.3e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.tolerance
        );
    }
    s
}

/// EGG parameters of the reference scenario, re-exported for callers that
/// only need the sampler.
pub fn reference_egg() -> EggParams {
    EggParams::reference()
}
