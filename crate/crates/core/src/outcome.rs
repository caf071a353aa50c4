//! The predicted-clean population shipped on the classifier's word.
//!
//! Each of the `l` predicted-clean modules is independently a dormant defect
//! with probability `p`, so the failure count `X` is `Binomial(l, p)` and the
//! software reliability is `e^{-Xt}`. With a Weibull injection each dormant
//! defect contributes hazard `K̂ t^m̂` instead of a single failure, giving
//! `Y = K̂ t^m̂ · X` at a fixed time.

use serde::{Deserialize, Serialize};

use crate::confusion::{ConfusionMatrix, FailureProbability};
use crate::error::{domain, invalid, Error, Result, Variant};

/// Per-dormant-defect Weibull hazard `K̂ t^m̂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Injection {
    #[serde(rename = "K_hat")]
    pub k_hat: f64,
    pub m_hat: f64,
}

impl Injection {
    pub fn new(k_hat: f64, m_hat: f64) -> Result<Self> {
        if !(k_hat > 0.0 && k_hat.is_finite()) {
            return Err(invalid(format!("K_hat must be finite and > 0, got {k_hat}")));
        }
        if !(m_hat > -1.0 && m_hat.is_finite()) {
            return Err(invalid(format!("m_hat must be > -1, got {m_hat}")));
        }
        Ok(Self { k_hat, m_hat })
    }

    /// Hazard contributed by one dormant defect at time `t`.
    pub fn scale_at(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(domain(format!("injected hazard needs finite t > 0, got {t}")));
        }
        Ok(self.k_hat * t.powf(self.m_hat))
    }

    /// `K̂ t^{m̂+1}`, the injected cumulative exponent entering `e^{-tY_i}`.
    fn exposure_at(&self, t: f64) -> Result<f64> {
        Ok(self.scale_at(t)? * t)
    }
}

/// Sign convention for the expected reliability of the injected variant.
///
/// `e^{-tY_i}` equals `e^{-K̂ t^{m̂+1}}` for a dormant defect; the published
/// closed form carries `e^{+K̂ t^{m̂+1}}` instead, which can push the
/// "expected reliability" above one. Both are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignMode {
    #[default]
    Corrected,
    AsPublished,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdpOutcome {
    l: u64,
    p: FailureProbability,
    #[serde(skip_serializing_if = "Option::is_none")]
    injection: Option<Injection>,
    /// Total modules developed, reporting only.
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
}

impl SdpOutcome {
    pub fn new(l: u64, p: FailureProbability) -> Result<Self> {
        if l == 0 {
            return Err(invalid("at least one predicted-clean module is required (l >= 1)"));
        }
        Ok(Self { l, p, injection: None, n: None })
    }

    /// Shorthand for `new(l, FailureProbability::new(p)?)`.
    pub fn from_parts(l: u64, p: f64) -> Result<Self> {
        Self::new(l, FailureProbability::new(p)?)
    }

    pub fn with_injection(mut self, injection: Injection) -> Self {
        self.injection = Some(injection);
        self
    }

    pub fn with_total_modules(mut self, n: u64) -> Result<Self> {
        if n < self.l {
            return Err(invalid(format!(
                "total modules n = {n} is smaller than predicted-clean count l = {}",
                self.l
            )));
        }
        self.n = Some(n);
        Ok(self)
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn p(&self) -> f64 {
        self.p.value()
    }

    pub fn probability(&self) -> &FailureProbability {
        &self.p
    }

    pub fn injection(&self) -> Option<&Injection> {
        self.injection.as_ref()
    }

    pub fn total_modules(&self) -> Option<u64> {
        self.n
    }

    pub fn variant(&self) -> Variant {
        if self.injection.is_some() {
            Variant::Y
        } else {
            Variant::X
        }
    }

    fn lp(&self) -> f64 {
        self.l as f64 * self.p.value()
    }

    fn require_x(&self) -> Result<()> {
        match self.injection {
            None => Ok(()),
            Some(_) => Err(Error::WrongVariant { expected: Variant::X }),
        }
    }

    fn require_y(&self) -> Result<&Injection> {
        self.injection.as_ref().ok_or(Error::WrongVariant { expected: Variant::Y })
    }

    /// `E[X] = lp`.
    pub fn expected_hazard_x(&self) -> Result<f64> {
        self.require_x()?;
        Ok(self.lp())
    }

    /// `E[Y] = lp K̂ t^m̂`.
    pub fn expected_hazard_y(&self, t: f64) -> Result<f64> {
        let inj = self.require_y()?;
        Ok(self.lp() * inj.scale_at(t)?)
    }

    /// `ln` of the upper bound `e^{lp(e^{-t}-1)}` on `E[e^{-Xt}]`.
    pub fn log_expected_reliability_bound_x(&self, t: f64) -> Result<f64> {
        self.require_x()?;
        check_time(t)?;
        Ok(self.lp() * (-t).exp_m1())
    }

    /// Upper bound `e^{lp(e^{-t}-1)}` on the expected reliability, obtained
    /// from `1 + x < e^x`. Not the expectation itself; see
    /// [`exact_expected_reliability_x`](Self::exact_expected_reliability_x).
    pub fn expected_reliability_bound_x(&self, t: f64) -> Result<f64> {
        Ok(self.log_expected_reliability_bound_x(t)?.exp())
    }

    /// `E[e^{-Xt}] = (1 + p(e^{-t} - 1))^l`.
    pub fn exact_expected_reliability_x(&self, t: f64) -> Result<f64> {
        self.require_x()?;
        check_time(t)?;
        Ok((self.l as f64 * (self.p.value() * (-t).exp_m1()).ln_1p()).exp())
    }

    /// `ln` of `e^{lp(e^{∓K̂t^{m̂+1}} - 1)}`; the sign follows `mode`.
    pub fn log_expected_reliability_bound_y(&self, t: f64, mode: SignMode) -> Result<f64> {
        let inj = self.require_y()?;
        let exposure = inj.exposure_at(t)?;
        let inner = match mode {
            SignMode::Corrected => -exposure,
            SignMode::AsPublished => exposure,
        };
        Ok(self.lp() * inner.exp_m1())
    }

    pub fn expected_reliability_bound_y(&self, t: f64, mode: SignMode) -> Result<f64> {
        Ok(self.log_expected_reliability_bound_y(t, mode)?.exp())
    }

    /// `E[e^{-Yt}] = (1 + p(e^{-K̂t^{m̂+1}} - 1))^l`.
    pub fn exact_expected_reliability_y(&self, t: f64) -> Result<f64> {
        let inj = self.require_y()?;
        let exposure = inj.exposure_at(t)?;
        Ok((self.l as f64 * (self.p.value() * (-exposure).exp_m1()).ln_1p()).exp())
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("time must be finite and > 0, got {t}")))
    }
}

/// JSON shape: `{"l": int, "p": num}` or `{"l": int, "confusion": {...}}`,
/// with optional `"injection"` and `"n"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeDescriptor {
    pub l: u64,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub confusion: Option<ConfusionMatrix>,
    #[serde(default)]
    pub injection: Option<Injection>,
    #[serde(default)]
    pub n: Option<u64>,
}

impl OutcomeDescriptor {
    pub fn resolve(&self) -> Result<SdpOutcome> {
        let p = match (self.p, &self.confusion) {
            (Some(p), None) => FailureProbability::new(p)?,
            (None, Some(m)) => m.false_omission_rate()?,
            (Some(_), Some(_)) => return Err(invalid("give either `p` or `confusion`, not both")),
            (None, None) => return Err(invalid("outcome needs `p` or `confusion`")),
        };
        let mut o = SdpOutcome::new(self.l, p)?;
        if let Some(inj) = self.injection {
            o = o.with_injection(Injection::new(inj.k_hat, inj.m_hat)?);
        }
        if let Some(n) = self.n {
            o = o.with_total_modules(n)?;
        }
        Ok(o)
    }
}

impl<'de> Deserialize<'de> for SdpOutcome {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        OutcomeDescriptor::deserialize(d)?.resolve().map_err(serde::de::Error::custom)
    }
}
