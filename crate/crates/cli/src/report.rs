//! Feasibility reports.

use sdpfeas_core::{BoundKind, SignMode, SweepOutcome, SweepPoint, Variant, VerificationRecord};
use serde::Serialize;

use crate::config::ScenarioConfig;

pub const VERDICT_CONVENTION: &str = "A time point is `infeasible` when the bound is at most epsilon: \
     the predictor alone is then unlikely to meet the target curve there. Epsilon is a tool \
     convention, not part of the bound.";

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Tool {
    pub fn current() -> Self {
        Self { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OutcomeSummary {
    pub l: u64,
    pub p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fraction: Option<String>,
    pub variant: Variant,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub sign_mode: SignMode,
    pub epsilon: f64,
    pub exact: bool,
    pub mc_trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationRow {
    pub t: f64,
    pub kind: BoundKind,
    #[serde(flatten)]
    pub record: VerificationRecord,
}

/// Closed run of consecutive grid points sharing a verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeRange {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct KindVerdict {
    pub kind: BoundKind,
    pub feasible_at: Vec<TimeRange>,
    pub infeasible_at: Vec<TimeRange>,
    pub out_of_regime_at: Vec<TimeRange>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationSummary {
    pub checked: usize,
    pub held: usize,
    pub failed: usize,
    pub advisories: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_slack: Option<f64>,
    pub all_hold: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub epsilon: f64,
    pub convention: &'static str,
    pub verdicts: Vec<KindVerdict>,
    pub verification: VerificationSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityReport {
    pub tool: Tool,
    pub timestamp: String,
    pub scenario: ScenarioConfig,
    pub outcome: OutcomeSummary,
    pub settings: Settings,
    pub rows: Vec<SweepPoint>,
    pub verification: Vec<VerificationRow>,
    pub summary: Summary,
}

#[derive(Clone, Copy, PartialEq)]
enum Verdict {
    Feasible,
    Infeasible,
    OutOfRegime,
}

fn verdict(point: &SweepPoint, epsilon: f64) -> Verdict {
    match &point.outcome {
        SweepOutcome::Bound(b) if b.bound <= epsilon => Verdict::Infeasible,
        SweepOutcome::Bound(_) => Verdict::Feasible,
        SweepOutcome::OutOfRegime(_) => Verdict::OutOfRegime,
    }
}

fn ranges(points: &[&SweepPoint], epsilon: f64, want: Verdict) -> Vec<TimeRange> {
    let mut out: Vec<TimeRange> = Vec::new();
    let mut open = false;
    for p in points {
        if verdict(p, epsilon) == want {
            match out.last_mut() {
                Some(r) if open => {
                    r.to = p.t;
                    r.points += 1;
                }
                _ => out.push(TimeRange { from: p.t, to: p.t, points: 1 }),
            }
            open = true;
        } else {
            open = false;
        }
    }
    out
}

pub fn summarize(rows: &[SweepPoint], checks: &[VerificationRow], kinds: &[BoundKind], epsilon: f64) -> Summary {
    let verdicts = kinds
        .iter()
        .map(|&kind| {
            let pts: Vec<&SweepPoint> = rows.iter().filter(|p| p.kind == kind).collect();
            KindVerdict {
                kind,
                feasible_at: ranges(&pts, epsilon, Verdict::Feasible),
                infeasible_at: ranges(&pts, epsilon, Verdict::Infeasible),
                out_of_regime_at: ranges(&pts, epsilon, Verdict::OutOfRegime),
            }
        })
        .collect();
    let held = checks.iter().filter(|c| c.record.holds).count();
    let slacks = checks.iter().map(|c| c.record.slack);
    Summary {
        epsilon,
        convention: VERDICT_CONVENTION,
        verdicts,
        verification: VerificationSummary {
            checked: checks.len(),
            held,
            failed: checks.len() - held,
            advisories: checks.iter().filter(|c| c.record.advisory).count(),
            min_slack: slacks.clone().reduce(f64::min),
            max_slack: slacks.reduce(f64::max),
            all_hold: held == checks.len(),
        },
    }
}
