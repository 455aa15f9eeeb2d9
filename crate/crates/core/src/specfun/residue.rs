//! Small-argument expansion of Fox-H by residues at the left poles.
//!
//! Closing the contour to the left gives `H(x) = Σ Res_{s=s_k} Φ(s) x^{−s}`
//! over the poles of `Π_{j≤m} Γ(b_j + B_j s)`, nearest first. Each residue is
//! computed as a small circular contour integral, so poles of any order (as
//! produced by identical apertures) and poles partially cancelled by the
//! denominator gammas are handled without perturbing parameters. Poles closer
//! than [`CLUSTER_TOL`] are merged and enclosed by one circle.

use num_complex::Complex64;

use super::{MellinBarnesSpec, SpecFunError};

/// Relative distance under which two left poles are treated as one cluster.
pub const CLUSTER_TOL: f64 = 1e-3;
// The circle stays within half the distance to the nearest other cluster and
// at least three spreads out, so the trapezoid error is below 2^-64.
const CIRCLE_POINTS: usize = 64;
const MAX_DEPTH: usize = 1 << 12;

/// One residue: the contribution of a pole (or pole cluster) at `pole`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueTerm {
    pub pole: f64,
    /// Net pole order after cancellation by denominator gammas.
    pub order: i32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueSeries {
    pub sum: f64,
    pub terms: Vec<ResidueTerm>,
    /// Set when the trailing terms grow in magnitude; `sum` is then only a
    /// partial sum of a series that is not yet converging at this `x`.
    pub diverging: bool,
}

#[derive(Debug, Clone)]
struct Cluster {
    center: f64,
    spread: f64,
    order: i32,
}

/// Sum of the first `terms` left residues of `spec` at `x`.
pub fn residue_series(spec: &MellinBarnesSpec, x: f64, terms: usize) -> Result<ResidueSeries, SpecFunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecFunError::NonPositiveArgument(x));
    }
    let (left, right) = spec.admissible_strip();
    if !(left < right) {
        return Err(SpecFunError::Degenerate { left, right });
    }
    let clusters = left_clusters(spec, terms)?;
    let ln_x = x.ln();
    let mut out = Vec::with_capacity(terms);
    for (i, cl) in clusters.iter().enumerate() {
        if cl.order <= 0 {
            continue;
        }
        if out.len() == terms {
            break;
        }
        let neighbour = clusters
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, o)| (o.center - cl.center).abs() - o.spread)
            .fold(right - cl.center, f64::min);
        let mut radius = (0.5 * neighbour).min(0.5).min(2.5 / ln_x.abs().max(1.0));
        radius = radius.max(3.0 * cl.spread);
        let value = circle_residue(spec, cl.center, radius, ln_x);
        out.push(ResidueTerm {
            pole: cl.center,
            order: cl.order,
            value,
        });
    }
    let diverging = out.len() >= 3 && {
        let k = out.len();
        out[k - 1].value.abs() > out[k - 2].value.abs() && out[k - 2].value.abs() > out[k - 3].value.abs()
    };
    let sum = out.iter().map(|t| t.value).sum();
    if diverging {
        log::debug!("residue series at x = {x:e} is not decreasing; partial sum {sum:e}");
    }
    Ok(ResidueSeries {
        sum,
        terms: out,
        diverging,
    })
}

/// `(1/2πi) ∮ Φ(s) x^{−s} ds` on a circle about `center`, with `x^{−center}`
/// factored out of the trapezoid sum.
fn circle_residue(spec: &MellinBarnesSpec, center: f64, radius: f64, ln_x: f64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..CIRCLE_POINTS {
        let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / CIRCLE_POINTS as f64;
        let offset = Complex64::from_polar(radius, theta);
        let s = center + offset;
        acc += (spec.log_kernel(s) - offset * ln_x).exp() * offset;
    }
    acc.re / CIRCLE_POINTS as f64 * (-center * ln_x).exp()
}

/// Left pole clusters of the numerator (all of them, including those whose
/// net order is zero), nearest to the contour first, at least `terms` of
/// positive order.
fn left_clusters(spec: &MellinBarnesSpec, terms: usize) -> Result<Vec<Cluster>, SpecFunError> {
    let m = spec.m();
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut depth = terms + 2;
    loop {
        let mut poles: Vec<f64> = Vec::with_capacity(depth * m);
        let mut frontier = f64::NEG_INFINITY;
        for g in &spec.lower()[..m] {
            for k in 0..depth {
                poles.push(-(g.value + k as f64) / g.scale);
            }
            frontier = frontier.max(-(g.value + (depth - 1) as f64) / g.scale);
        }
        poles.sort_by(|a, b| b.total_cmp(a));

        let mut clusters: Vec<Cluster> = Vec::new();
        let mut members: Vec<f64> = Vec::new();
        let flush = |members: &mut Vec<f64>, clusters: &mut Vec<Cluster>| {
            if members.is_empty() {
                return;
            }
            let hi = members[0];
            let lo = members[members.len() - 1];
            let center = 0.5 * (hi + lo);
            let spread = 0.5 * (hi - lo);
            let order = members.len() as i32 - denominator_poles_near(spec, center, spread);
            clusters.push(Cluster { center, spread, order });
            members.clear();
        };
        for &p in &poles {
            if let Some(&first) = members.first() {
                if (first - p).abs() > CLUSTER_TOL * first.abs().max(1.0) {
                    flush(&mut members, &mut clusters);
                }
            }
            members.push(p);
        }
        flush(&mut members, &mut clusters);

        // Only clusters at or right of the frontier are complete.
        let complete: Vec<Cluster> = clusters
            .into_iter()
            .filter(|c| c.center - c.spread >= frontier - 1e-12)
            .collect();
        if complete.iter().filter(|c| c.order > 0).count() >= terms || depth >= MAX_DEPTH {
            let mut kept = Vec::new();
            let mut positive = 0;
            for c in complete {
                if positive == terms {
                    break;
                }
                if c.order > 0 {
                    positive += 1;
                }
                kept.push(c);
            }
            return Ok(kept);
        }
        depth *= 2;
    }
}

/// Number of denominator-gamma poles (zeros of the integrand) inside the
/// cluster at `center ± spread`.
fn denominator_poles_near(spec: &MellinBarnesSpec, center: f64, spread: f64) -> i32 {
    let tol = spread + CLUSTER_TOL * center.abs().max(1.0);
    let mut count = 0;
    let mut hits = |value: f64, scale: f64, left: bool| {
        // left family: s = −(value + k)/scale; right family: s = (1 − value + k)/scale
        let k = if left {
            -center * scale - value
        } else {
            center * scale - 1.0 + value
        };
        let kr = k.round();
        if kr >= 0.0 {
            let s = if left {
                -(value + kr) / scale
            } else {
                (1.0 - value + kr) / scale
            };
            if (s - center).abs() <= tol {
                count += 1;
            }
        }
    };
    for g in &spec.upper()[spec.n()..] {
        hits(g.value, g.scale, true);
    }
    for g in &spec.lower()[spec.m()..] {
        hits(g.value, g.scale, false);
    }
    count
}
