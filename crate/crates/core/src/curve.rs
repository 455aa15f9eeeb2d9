//! Outage-versus-power curves.

use std::fmt;

/// Where a curve's values come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Analytic,
    Asymptotic,
    MonteCarlo,
    McCiLow,
    McCiHigh,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Analytic => "analytic",
            Source::Asymptotic => "asymptotic",
            Source::MonteCarlo => "monte-carlo",
            Source::McCiLow => "mc-ci-low",
            Source::McCiHigh => "mc-ci-high",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Source::Analytic,
            Source::Asymptotic,
            Source::MonteCarlo,
            Source::McCiLow,
            Source::McCiHigh,
        ]
        .into_iter()
        .find(|src| src.as_str() == s)
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub pt_dbm: f64,
    pub gamma0_db: f64,
    /// Probability in [0, 1], or NaN for a failed evaluation.
    pub value: f64,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveMeta {
    pub scheme: String,
    pub n: usize,
    pub convention: Option<String>,
    pub seed: Option<u64>,
    pub version: String,
}

/// One `(scheme, N, source)` series, ordered by transmit power.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageCurve {
    pub source: Source,
    pub meta: CurveMeta,
    points: Vec<CurvePoint>,
}

impl OutageCurve {
    pub fn new(source: Source, meta: CurveMeta) -> Self {
        Self {
            source,
            meta,
            points: Vec::new(),
        }
    }

    /// Appends a point; powers must increase strictly and values must be
    /// probabilities (NaN marks a failed point).
    pub fn push(&mut self, pt_dbm: f64, gamma0_db: f64, value: f64) -> Result<(), String> {
        if let Some(last) = self.points.last() {
            if !(pt_dbm > last.pt_dbm) {
                return Err(format!("power {pt_dbm} dBm does not follow {} dBm", last.pt_dbm));
            }
        }
        if !value.is_nan() && !(0.0..=1.0).contains(&value) {
            return Err(format!("value {value} is not a probability"));
        }
        self.points.push(CurvePoint {
            pt_dbm,
            gamma0_db,
            value,
            source: self.source,
        });
        Ok(())
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn failed_points(&self) -> usize {
        self.points.iter().filter(|p| p.value.is_nan()).count()
    }

    /// Builds a curve from `(γ₀ dB, P_out)` pairs, deriving nothing about
    /// power; used for synthetic curves.
    pub fn from_gamma0(source: Source, pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self, String> {
        let mut curve = Self::new(source, CurveMeta::default());
        for (g0_db, v) in pairs {
            curve.push(g0_db / 2.0, g0_db, v)?;
        }
        Ok(curve)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_range_enforced() {
        let mut c = OutageCurve::new(Source::Analytic, CurveMeta::default());
        c.push(0.0, 55.0, 0.5).unwrap();
        assert!(c.push(0.0, 55.0, 0.4).is_err());
        assert!(c.push(1.0, 57.0, 1.5).is_err());
        c.push(1.0, 57.0, f64::NAN).unwrap();
        assert_eq!(c.failed_points(), 1);
    }

    #[test]
    fn source_names_round_trip() {
        for s in ["analytic", "asymptotic", "monte-carlo", "mc-ci-low", "mc-ci-high"] {
            assert_eq!(Source::parse(s).unwrap().as_str(), s);
        }
        assert!(Source::parse("exact").is_none());
    }
}
