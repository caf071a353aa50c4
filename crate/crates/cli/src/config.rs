//! Scenario files.
//!
//! ```json
//! {
//!   "outcome": {"l": 100, "p": 0.05},
//!   "model": {"family": "constant", "lambda": 2},
//!   "time_grid": {"start": 0.1, "stop": 10, "steps": 50, "spacing": "log"},
//!   "kinds": ["hazard", "reliability"],
//!   "corrected": true,
//!   "verify": {"exact": true, "mc_trials": 100000, "seed": 7},
//!   "epsilon": 0.05
//! }
//! ```
//!
//! `outcome` also accepts `"confusion": {...}` or `"records": "path.csv"` in
//! place of `p`; a relative records path is resolved against the config
//! file's directory.

use std::fs::File;
use std::path::{Path, PathBuf};

use sdpfeas_core::{
    BoundKind, ConfusionMatrix, HazardModel, Injection, LabelVocabulary, OutcomeDescriptor,
    SdpOutcome, SignMode, Variant,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_EPSILON: f64 = 0.05;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub outcome: OutcomeConfig,
    pub model: HazardModel,
    pub time_grid: TimeGrid,
    /// Defaults to both kinds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kinds: Option<Vec<BoundKind>>,
    /// Defaults to `Y` when the outcome carries an injection, else `X`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default = "yes")]
    pub corrected: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeConfig {
    pub l: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confusion: Option<ConfusionMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub records: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub injection: Option<Injection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// `steps` points from `start` to `stop` inclusive; `steps = 1` is the single
/// point `start` and needs no `stop`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default = "one")]
    pub steps: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "yes")]
    pub exact: bool,
    #[serde(default)]
    pub mc_trials: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { exact: true, mc_trials: 0, seed: None }
    }
}

impl TimeGrid {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        let bad = |m: String| Err(CliError::Usage(format!("time_grid: {m}")));
        if !(self.start > 0.0 && self.start.is_finite()) {
            return bad(format!("start must be finite and > 0, got {}", self.start));
        }
        if self.steps == 0 {
            return bad("steps must be >= 1".into());
        }
        let stop = match self.stop {
            Some(stop) if !(stop > self.start && stop.is_finite()) => {
                return bad(format!("stop must be finite and > start, got {stop}"));
            }
            Some(stop) => stop,
            None if self.steps == 1 => return Ok(vec![self.start]),
            None => return bad("stop is required when steps > 1".into()),
        };
        if self.steps == 1 {
            return Ok(vec![self.start]);
        }
        let last = (self.steps - 1) as f64;
        let (a, b) = match self.spacing {
            Spacing::Linear => (self.start, stop),
            Spacing::Log => (self.start.ln(), stop.ln()),
        };
        let mut grid: Vec<f64> = (0..self.steps)
            .map(|i| {
                let x = a + (b - a) * (i as f64 / last);
                match self.spacing {
                    Spacing::Linear => x,
                    Spacing::Log => x.exp(),
                }
            })
            .collect();
        // pin the endpoints against rounding in exp/ln
        grid[0] = self.start;
        grid[self.steps - 1] = stop;
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return bad("too many steps for this range; points collide".into());
        }
        Ok(grid)
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        if let Some(rec) = &cfg.outcome.records {
            if rec.is_relative() {
                if let Some(dir) = path.parent() {
                    cfg.outcome.records = Some(dir.join(rec));
                }
            }
        }
        Ok(cfg)
    }

    pub fn resolve_outcome(&self) -> Result<SdpOutcome, CliError> {
        let o = &self.outcome;
        let confusion = match (&o.records, o.confusion) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("outcome: give `confusion` or `records`, not both".into()))
            }
            (Some(path), None) => Some(read_records(path)?),
            (None, c) => c,
        };
        let descriptor = OutcomeDescriptor { l: o.l, p: o.p, confusion, injection: o.injection, n: o.n };
        Ok(descriptor.resolve()?)
    }

    pub fn kinds(&self) -> Result<Vec<BoundKind>, CliError> {
        let kinds = self.kinds.clone().unwrap_or_else(|| vec![BoundKind::Hazard, BoundKind::Reliability]);
        if kinds.is_empty() {
            return Err(CliError::Usage("kinds must not be empty".into()));
        }
        if (1..kinds.len()).any(|i| kinds[..i].contains(&kinds[i])) {
            return Err(CliError::Usage("kinds must not repeat".into()));
        }
        Ok(kinds)
    }

    pub fn variant(&self, outcome: &SdpOutcome) -> Variant {
        self.variant.unwrap_or(outcome.variant())
    }

    pub fn sign_mode(&self) -> SignMode {
        if self.corrected {
            SignMode::Corrected
        } else {
            SignMode::AsPublished
        }
    }
}

pub fn read_records(path: &Path) -> Result<ConfusionMatrix, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(ConfusionMatrix::from_csv(file, &LabelVocabulary::default())?)
}
