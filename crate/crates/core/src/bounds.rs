//! Chernoff lower-tail bounds on hazard and reliability.
//!
//! Everything funnels through [`chernoff_lower_tail`]: for a sum of
//! independent Bernoulli trials with mean `μ` and a threshold `c = (1-δ)μ`,
//! `Pr[X < c] < exp(-μδ²/2) = exp(-(μ-c)²/(2μ))`, applicable for
//! `0 < δ <= 1`. The named bounds differ only in which `μ` and which `c`
//! they feed in:
//!
//! | bound                | μ                          | c                |
//! |----------------------|----------------------------|------------------|
//! | hazard               | `lp`                       | `z(t)`           |
//! | reliability          | `e^{lp(e^{-t}-1)}`         | `H(t)/t`         |
//! | injected hazard      | `lp K̂ t^m̂`                 | `K t^m`          |
//! | injected reliability | `e^{lp(e^{∓K̂t^{m̂+1}}-1)}`  | `K t^m / (m+1)`  |
//!
//! The reliability forms substitute an upper bound on `E[e^{-Xt}]` for `μ`,
//! exactly as published; they are reported as computed and are not
//! guaranteed to dominate the true tail (see the soundness campaigns in the
//! test suites).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result, Variant};
use crate::hazard::{Family, HazardModel};
use crate::oracle::TailQuery;
use crate::outcome::{SdpOutcome, SignMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Valid,
    /// `δ = 1`: the threshold is zero and the event is impossible.
    Trivial,
    /// The threshold is not strictly below the expectation, or is negative;
    /// the bound says nothing. Only ever carried by [`RegimeMiss`].
    OutOfRegime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Hazard,
    Reliability,
}

/// Which closed-form result a bound instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundTheorem {
    ChernoffLowerTail,
    WeibullHazard,
    WeibullReliability,
    NldHazard,
    NldReliability,
    LdHazard,
    LdReliability,
    NliHazard,
    NliReliability,
    LiHazard,
    LiReliability,
    ConstantHazard,
    ConstantReliability,
    InjectedHazard,
    InjectedReliability,
}

impl BoundTheorem {
    pub fn for_family(family: Family, kind: BoundKind) -> Self {
        use BoundKind::*;
        match (family, kind) {
            (Family::Weibull, Hazard) => BoundTheorem::WeibullHazard,
            (Family::Weibull, Reliability) => BoundTheorem::WeibullReliability,
            (Family::NonLinearDecreasing, Hazard) => BoundTheorem::NldHazard,
            (Family::NonLinearDecreasing, Reliability) => BoundTheorem::NldReliability,
            (Family::LinearDecreasing, Hazard) => BoundTheorem::LdHazard,
            (Family::LinearDecreasing, Reliability) => BoundTheorem::LdReliability,
            (Family::NonLinearIncreasing, Hazard) => BoundTheorem::NliHazard,
            (Family::NonLinearIncreasing, Reliability) => BoundTheorem::NliReliability,
            (Family::LinearIncreasing, Hazard) => BoundTheorem::LiHazard,
            (Family::LinearIncreasing, Reliability) => BoundTheorem::LiReliability,
            (Family::Constant, Hazard) => BoundTheorem::ConstantHazard,
            (Family::Constant, Reliability) => BoundTheorem::ConstantReliability,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundTheorem::ChernoffLowerTail => "chernoff-lower-tail",
            BoundTheorem::WeibullHazard => "weibull-hazard",
            BoundTheorem::WeibullReliability => "weibull-reliability",
            BoundTheorem::NldHazard => "nld-hazard",
            BoundTheorem::NldReliability => "nld-reliability",
            BoundTheorem::LdHazard => "ld-hazard",
            BoundTheorem::LdReliability => "ld-reliability",
            BoundTheorem::NliHazard => "nli-hazard",
            BoundTheorem::NliReliability => "nli-reliability",
            BoundTheorem::LiHazard => "li-hazard",
            BoundTheorem::LiReliability => "li-reliability",
            BoundTheorem::ConstantHazard => "constant-hazard",
            BoundTheorem::ConstantReliability => "constant-reliability",
            BoundTheorem::InjectedHazard => "injected-hazard",
            BoundTheorem::InjectedReliability => "injected-reliability",
        }
    }
}

/// An applicable bound: `Pr[event] < bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub theorem: BoundTheorem,
    pub mu: f64,
    pub threshold: f64,
    pub delta: f64,
    pub bound: f64,
    pub log_bound: f64,
    pub regime: Regime,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_mode: Option<SignMode>,
    /// The binomial event the bound speaks about, when it is tied to an
    /// outcome model.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event: Option<TailQuery>,
}

/// Diagnostics for a threshold that is not strictly below the expectation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeMiss {
    pub theorem: BoundTheorem,
    /// Always [`Regime::OutOfRegime`]; present so serialised rows are uniform.
    pub regime: Regime,
    pub mu: f64,
    pub threshold: f64,
    pub delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_mode: Option<SignMode>,
}

/// `Pr[X < threshold] < exp(-(μ - threshold)² / (2μ))` for `0 <= threshold < μ`.
pub fn chernoff_lower_tail(mu: f64, threshold: f64) -> Result<BoundResult> {
    kernel(BoundTheorem::ChernoffLowerTail, mu, threshold)
}

fn kernel(theorem: BoundTheorem, mu: f64, threshold: f64) -> Result<BoundResult> {
    // An expectation that underflowed to zero still sits below any
    // non-negative threshold.
    let underflowed = mu == 0.0 && threshold >= 0.0 && threshold.is_finite();
    if (mu.is_nan() || mu <= 0.0) && !underflowed {
        return Err(invalid(format!("expectation must be > 0, got {mu}")));
    }
    if !threshold.is_finite() {
        return Err(invalid(format!("threshold must be finite, got {threshold}")));
    }
    let diff = mu - threshold;
    let delta = match mu {
        m if m.is_infinite() => 1.0,
        0.0 if threshold == 0.0 => 0.0,
        0.0 => f64::NEG_INFINITY,
        _ => diff / mu,
    };
    if threshold >= mu || threshold < 0.0 {
        return Err(Error::OutOfRegime(RegimeMiss {
            theorem,
            regime: Regime::OutOfRegime,
            mu,
            threshold,
            delta,
            t: None,
            sign_mode: None,
        }));
    }
    let log_bound = if mu.is_infinite() { f64::NEG_INFINITY } else { -0.5 * diff * (diff / mu) };
    Ok(BoundResult {
        theorem,
        mu,
        threshold,
        delta,
        bound: log_bound.exp(),
        log_bound,
        regime: if threshold == 0.0 { Regime::Trivial } else { Regime::Valid },
        t: None,
        sign_mode: None,
        event: None,
    })
}

fn tagged(
    theorem: BoundTheorem,
    mu: f64,
    threshold: f64,
    t: f64,
    sign_mode: Option<SignMode>,
    event: TailQuery,
) -> Result<BoundResult> {
    match kernel(theorem, mu, threshold) {
        Ok(mut b) => {
            b.t = Some(t);
            b.sign_mode = sign_mode;
            b.event = Some(event);
            Ok(b)
        }
        Err(Error::OutOfRegime(mut miss)) => {
            miss.t = Some(t);
            miss.sign_mode = sign_mode;
            Err(Error::OutOfRegime(miss))
        }
        Err(e) => Err(e),
    }
}

fn require_x(o: &SdpOutcome) -> Result<()> {
    match o.variant() {
        Variant::X => Ok(()),
        Variant::Y => Err(Error::WrongVariant { expected: Variant::X }),
    }
}

fn require_weibull(model: &HazardModel) -> Result<()> {
    match model {
        HazardModel::Weibull { .. } => Ok(()),
        other => Err(invalid(format!(
            "injected-hazard bounds take a Weibull model, got {}",
            other.family().as_str()
        ))),
    }
}

/// `Pr[X < z(t)]` against `μ = lp`.
pub fn hazard_bound(o: &SdpOutcome, model: &HazardModel, t: f64) -> Result<BoundResult> {
    require_x(o)?;
    let z = model.hazard_at(t)?;
    let theorem = BoundTheorem::for_family(model.family(), BoundKind::Hazard);
    let event = TailQuery::new(o.l(), o.p(), z)?;
    tagged(theorem, o.expected_hazard_x()?, z, t, None, event)
}

/// `Pr[e^{-Xt} > R(t)] = Pr[X < H(t)/t]` against `μ = e^{lp(e^{-t}-1)}`.
pub fn reliability_bound(o: &SdpOutcome, model: &HazardModel, t: f64) -> Result<BoundResult> {
    require_x(o)?;
    let c = model.reliability_tail_threshold(t)?;
    let mu = o.expected_reliability_bound_x(t)?;
    let theorem = BoundTheorem::for_family(model.family(), BoundKind::Reliability);
    let event = TailQuery::new(o.l(), o.p(), c)?;
    tagged(theorem, mu, c, t, None, event)
}

/// `Pr[Y < K t^m]` against `μ = lp K̂ t^m̂`.
pub fn hazard_bound_y(o: &SdpOutcome, model: &HazardModel, t: f64) -> Result<BoundResult> {
    require_weibull(model)?;
    let mu = o.expected_hazard_y(t)?;
    let scale = o.injection().expect("checked by expected_hazard_y").scale_at(t)?;
    let z = model.hazard_at(t)?;
    let event = TailQuery::scaled(o.l(), o.p(), scale, z)?;
    tagged(BoundTheorem::InjectedHazard, mu, z, t, None, event)
}

/// `Pr[e^{-Yt} > R(t)] = Pr[Y < K t^m/(m+1)]` against the injected
/// expected-reliability bound in the chosen sign mode.
pub fn reliability_bound_y(
    o: &SdpOutcome,
    model: &HazardModel,
    t: f64,
    mode: SignMode,
) -> Result<BoundResult> {
    require_weibull(model)?;
    let mu = o.expected_reliability_bound_y(t, mode)?;
    let scale = o.injection().expect("checked by expected_reliability_bound_y").scale_at(t)?;
    let c = model.reliability_tail_threshold(t)?;
    let event = TailQuery::scaled(o.l(), o.p(), scale, c)?;
    tagged(BoundTheorem::InjectedReliability, mu, c, t, Some(mode), event)
}

/// Dispatch on kind and on the outcome's variant.
pub fn evaluate(
    o: &SdpOutcome,
    model: &HazardModel,
    t: f64,
    kind: BoundKind,
    mode: SignMode,
) -> Result<BoundResult> {
    match (o.variant(), kind) {
        (Variant::X, BoundKind::Hazard) => hazard_bound(o, model, t),
        (Variant::X, BoundKind::Reliability) => reliability_bound(o, model, t),
        (Variant::Y, BoundKind::Hazard) => hazard_bound_y(o, model, t),
        (Variant::Y, BoundKind::Reliability) => reliability_bound_y(o, model, t, mode),
    }
}

/// Serialises as the inner record; `regime` tells the two apart.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SweepOutcome {
    Bound(BoundResult),
    OutOfRegime(RegimeMiss),
}

/// Serialises flat: `kind` plus the fields of the inner record, which
/// already carry `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    #[serde(skip)]
    pub t: f64,
    pub kind: BoundKind,
    #[serde(flatten)]
    pub outcome: SweepOutcome,
}

impl SweepPoint {
    pub fn bound(&self) -> Option<&BoundResult> {
        match &self.outcome {
            SweepOutcome::Bound(b) => Some(b),
            SweepOutcome::OutOfRegime(_) => None,
        }
    }
}

/// Evaluate one bound kind over a strictly increasing time grid.
///
/// Out-of-regime points are kept in place; any other error aborts the sweep.
/// Points are evaluated in parallel and returned in grid order.
pub fn bound_sweep(
    o: &SdpOutcome,
    model: &HazardModel,
    grid: &[f64],
    kind: BoundKind,
    variant: Variant,
    mode: SignMode,
) -> Result<Vec<SweepPoint>> {
    if grid.is_empty() {
        return Err(invalid("time grid is empty"));
    }
    if let Some(bad) = grid.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(invalid(format!("time grid points must be finite and > 0, got {bad}")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("time grid must be strictly increasing"));
    }
    if o.variant() != variant {
        return Err(Error::WrongVariant { expected: o.variant() });
    }
    grid.par_iter()
        .map(|&t| {
            let outcome = match evaluate(o, model, t, kind, mode) {
                Ok(b) => SweepOutcome::Bound(b),
                Err(Error::OutOfRegime(miss)) => SweepOutcome::OutOfRegime(miss),
                Err(e) => return Err(e),
            };
            Ok(SweepPoint { t, kind, outcome })
        })
        .collect()
}
