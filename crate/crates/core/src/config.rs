//! Experiment configuration: a TOML file with one section per parameter group.

use serde::{Deserialize, Serialize};

use crate::channel::{EggParams, LinkBudget, PointingParams};
use crate::diversity::{ApertureArray, MrcBoundConvention};
use crate::error::UwocError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    pub sigma_w2: f64,
    pub length_m: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EggSection {
    pub omega: f64,
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Either a named preset or explicit `(a0, rho)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointingSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeChoice {
    Mrc,
    Sc,
    Both,
}

impl SchemeChoice {
    pub fn includes_mrc(self) -> bool {
        matches!(self, SchemeChoice::Mrc | SchemeChoice::Both)
    }

    pub fn includes_sc(self) -> bool {
        matches!(self, SchemeChoice::Sc | SchemeChoice::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverSection {
    pub gamma_th_db: f64,
    pub n_list: Vec<usize>,
    pub scheme: SchemeChoice,
    /// `variant/prefactor/expansion`; selected by normalization when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    /// Residue terms per mixture term in the asymptotic series.
    pub asymptotic_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub start_dbm: f64,
    pub stop_dbm: f64,
    pub step_db: f64,
}

impl SweepSection {
    /// Powers from start to stop inclusive (within half a step).
    pub fn powers(&self) -> Vec<f64> {
        let count = ((self.stop_dbm - self.start_dbm) / self.step_db + 0.5).floor() as usize + 1;
        (0..count).map(|i| self.start_dbm + i as f64 * self.step_db).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    pub enabled: bool,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

/// Extended sweep for slope fits; outage only reaches 1e-6..1e-1 far beyond
/// the physical power range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiversitySection {
    pub start_dbm: f64,
    pub stop_dbm: f64,
    pub step_db: f64,
    pub span_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub link: LinkSection,
    pub egg: EggSection,
    pub pointing: PointingSection,
    pub receiver: ReceiverSection,
    pub sweep: SweepSection,
    pub mc: McSection,
    pub diversity: DiversitySection,
}

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const PAPER_TRIALS: u64 = 10_000_000;

impl Default for ExperimentConfig {
    fn default() -> Self {
        let link = LinkBudget::reference(0.0);
        let egg = EggParams::reference();
        Self {
            link: LinkSection {
                sigma_w2: link.sigma_w2,
                length_m: link.length_m,
                alpha: link.alpha,
            },
            egg: EggSection {
                omega: egg.omega(),
                lambda: egg.lambda(),
                a: egg.a(),
                b: egg.b(),
                c: egg.c(),
            },
            pointing: PointingSection {
                preset: Some("significant".into()),
                a0: None,
                rho: None,
            },
            receiver: ReceiverSection {
                gamma_th_db: 60.0,
                n_list: vec![1, 3, 5, 7],
                scheme: SchemeChoice::Mrc,
                convention: None,
                asymptotic_terms: 4,
            },
            sweep: SweepSection {
                start_dbm: -35.0,
                stop_dbm: 20.0,
                step_db: 5.0,
            },
            mc: McSection {
                enabled: true,
                trials: DEFAULT_TRIALS,
                seed: 1,
                workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            },
            diversity: DiversitySection {
                start_dbm: -35.0,
                stop_dbm: 140.0,
                step_db: 1.0,
                span_db: 15.0,
            },
        }
    }
}

/// Named figure setups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// MRC bound CDF, N ∈ {1, 2, 3}, significant pointing.
    Fig2,
    /// MRC, N ∈ {1, 3, 5, 7}, significant pointing.
    Fig3a,
    /// MRC, N ∈ {1, 3, 5, 7}, negligible pointing.
    Fig3b,
    /// SC, N ∈ {2, 3, 4}, strong pointing.
    Fig4,
}

impl Preset {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fig2" => Some(Preset::Fig2),
            "fig3a" => Some(Preset::Fig3a),
            "fig3b" => Some(Preset::Fig3b),
            "fig4" => Some(Preset::Fig4),
            _ => None,
        }
    }

    pub fn config(self) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        let (preset, n_list, scheme) = match self {
            Preset::Fig2 => ("significant", vec![1, 2, 3], SchemeChoice::Mrc),
            Preset::Fig3a => ("significant", vec![1, 3, 5, 7], SchemeChoice::Mrc),
            Preset::Fig3b => ("negligible", vec![1, 3, 5, 7], SchemeChoice::Mrc),
            Preset::Fig4 => ("strong", vec![2, 3, 4], SchemeChoice::Sc),
        };
        cfg.pointing.preset = Some(preset.into());
        cfg.receiver.n_list = n_list;
        cfg.receiver.scheme = scheme;
        cfg
    }
}

fn usage(field: &str, msg: impl std::fmt::Display) -> UwocError {
    UwocError::Usage(format!("{field}: {msg}"))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, UwocError> {
        let cfg: Self = toml::from_str(text).map_err(|e| UwocError::Usage(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn load(path: &std::path::Path) -> Result<Self, UwocError> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(&path.display().to_string(), e))?;
        Self::from_toml(&text)
    }

    /// Checks every field, reporting the first failure with its path.
    pub fn validate(&self) -> Result<(), UwocError> {
        self.egg_params()?;
        self.pointing_params()?;
        self.link_budget(self.sweep.start_dbm)?;
        if self.receiver.n_list.is_empty() {
            return Err(usage("receiver.n_list", "must list at least one aperture count"));
        }
        if self.receiver.n_list.contains(&0) {
            return Err(usage("receiver.n_list", "aperture counts must be positive"));
        }
        if !self.receiver.gamma_th_db.is_finite() {
            return Err(usage("receiver.gamma_th_db", "must be finite"));
        }
        if self.receiver.asymptotic_terms == 0 {
            return Err(usage("receiver.asymptotic_terms", "must be positive"));
        }
        self.convention()?;
        for (name, start, stop, step) in [
            ("sweep", self.sweep.start_dbm, self.sweep.stop_dbm, self.sweep.step_db),
            (
                "diversity",
                self.diversity.start_dbm,
                self.diversity.stop_dbm,
                self.diversity.step_db,
            ),
        ] {
            if !(start < stop) {
                return Err(usage(&format!("{name}.start_dbm"), "must be below stop_dbm"));
            }
            if !(step > 0.0) {
                return Err(usage(&format!("{name}.step_db"), "must be positive"));
            }
        }
        if !(self.diversity.span_db > 0.0) {
            return Err(usage("diversity.span_db", "must be positive"));
        }
        if self.mc.trials < crate::montecarlo::MIN_TRIALS {
            return Err(usage(
                "mc.trials",
                format!("must be at least {}", crate::montecarlo::MIN_TRIALS),
            ));
        }
        if self.mc.workers == 0 {
            return Err(usage("mc.workers", "must be positive"));
        }
        Ok(())
    }

    pub fn egg_params(&self) -> Result<EggParams, UwocError> {
        let e = &self.egg;
        EggParams::new(e.omega, e.lambda, e.a, e.b, e.c).map_err(|err| usage("egg", err))
    }

    pub fn pointing_params(&self) -> Result<PointingParams, UwocError> {
        let p = &self.pointing;
        match (&p.preset, p.a0, p.rho) {
            (Some(name), None, None) => match name.as_str() {
                "significant" => Ok(PointingParams::significant()),
                "strong" => Ok(PointingParams::strong()),
                "negligible" => Ok(PointingParams::negligible()),
                other => Err(usage("pointing.preset", format!("unknown preset {other:?}"))),
            },
            (None, Some(a0), Some(rho)) => PointingParams::new(a0, rho).map_err(|err| usage("pointing", err)),
            _ => Err(usage("pointing", "give either preset or both a0 and rho")),
        }
    }

    pub fn link_budget(&self, pt_dbm: f64) -> Result<LinkBudget, UwocError> {
        LinkBudget::new(pt_dbm, self.link.sigma_w2, self.link.length_m, self.link.alpha)
            .map_err(|err| usage("link", err))
    }

    pub fn gamma_th(&self) -> f64 {
        crate::channel::from_db(self.receiver.gamma_th_db)
    }

    /// Explicit convention, or `None` to select by normalization.
    pub fn convention(&self) -> Result<Option<MrcBoundConvention>, UwocError> {
        match &self.receiver.convention {
            None => Ok(None),
            Some(s) => MrcBoundConvention::parse(s)
                .map(Some)
                .ok_or_else(|| usage("receiver.convention", format!("cannot parse {s:?}"))),
        }
    }

    pub fn array(&self, n: usize, pt_dbm: f64) -> Result<ApertureArray, UwocError> {
        let g0 = self.link_budget(pt_dbm)?.gamma0();
        Ok(ApertureArray::iid(n, self.egg_params()?, self.pointing_params()?, g0)?)
    }
}
