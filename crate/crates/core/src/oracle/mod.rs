//! Independent verification: exact binomial tails, seeded Monte-Carlo
//! estimates, and the comparison of either against a computed bound.
//!
//! All events have the shape `Pr[s · X < c]` with `X ~ Binomial(l, p)`;
//! `s = 1` for the plain failure count and `s = K̂ t^m̂` for injected hazards.

mod exact;
mod mc;
mod verify;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use exact::{
    binomial_cdf_table, exact_binomial_tail, exact_reliability_tail, exact_scaled_tail_y,
    ln_binomial_pmf, log_binomial_cdf,
};
pub use mc::{
    mc_mean, mc_tail, mc_tail_with, BinomialSampler, MeanEstimate, SamplerKind, INVERSION_CUTOFF,
};
pub use verify::{verify_bound, VerificationRecord};

/// `Pr[scale · X < threshold]`, `X ~ Binomial(l, p)`, strict inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailQuery {
    pub l: u64,
    pub p: f64,
    pub scale: f64,
    pub threshold: f64,
}

/// Largest failure count still inside a strict lower-tail event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CountCap {
    /// No outcome satisfies the event.
    Empty,
    /// `X <= k`.
    UpTo(u64),
    /// Every outcome satisfies the event.
    All,
}

impl TailQuery {
    pub fn new(l: u64, p: f64, threshold: f64) -> Result<Self> {
        Self::scaled(l, p, 1.0, threshold)
    }

    pub fn scaled(l: u64, p: f64, scale: f64, threshold: f64) -> Result<Self> {
        if l == 0 {
            return Err(invalid("tail query needs l >= 1"));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid(format!("tail query needs 0 < p < 1, got {p}")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid(format!("scale must be finite and > 0, got {scale}")));
        }
        if threshold.is_nan() {
            return Err(invalid("threshold is NaN"));
        }
        Ok(Self { l, p, scale, threshold })
    }

    /// Threshold on the unscaled count `X`.
    ///
    /// A value within a few ulps of an integer is taken to be that integer,
    /// so thresholds reconstructed through `ln`, `exp` or division land on
    /// the same side of an integer as the value they were derived from.
    pub fn count_threshold(&self) -> f64 {
        let x = if self.scale == 1.0 { self.threshold } else { self.threshold / self.scale };
        let r = x.round();
        if x.is_finite() && (x - r).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            r
        } else {
            x
        }
    }

    /// `Pr[X < x] = Pr[X <= k*]` with `k* = x - 1` for integral `x`, else `floor(x)`.
    pub(crate) fn cap(&self) -> CountCap {
        let x = self.count_threshold();
        if x <= 0.0 {
            return CountCap::Empty;
        }
        if x > self.l as f64 {
            return CountCap::All;
        }
        let k = if x.fract() == 0.0 { x - 1.0 } else { x.floor() };
        if k >= self.l as f64 {
            CountCap::All
        } else {
            CountCap::UpTo(k as u64)
        }
    }

    /// True when `a` and `b` describe the same event up to float noise.
    pub fn same_event(&self, other: &TailQuery) -> bool {
        let near = |a: f64, b: f64| a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        self.l == other.l
            && self.p == other.p
            && near(self.scale, other.scale)
            && near(self.threshold, other.threshold)
    }

    pub fn describe(&self) -> String {
        if self.scale == 1.0 {
            format!("Pr[Binomial({}, {}) < {}]", self.l, self.p, self.threshold)
        } else {
            format!("Pr[{} * Binomial({}, {}) < {}]", self.scale, self.l, self.p, self.threshold)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

/// An oracle-side probability for a [`TailQuery`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailEstimate {
    pub query: TailQuery,
    pub value: f64,
    /// `ln(value)`; carried so comparisons against tiny bounds stay exact.
    pub log_value: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}
