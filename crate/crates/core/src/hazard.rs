//! Hazard-curve families for manually tested software.
//!
//! Every family is evaluated through its closed form. For a hazard `z(t)`
//! the cumulative hazard is `H(t) = ∫₀ᵗ z`, the reliability is `e^{-H(t)}`,
//! and the reliability tail threshold `c(t) = H(t) / t` is the failure-count
//! level at which `e^{-Xt}` crosses `R(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "weibull")]
    Weibull,
    #[serde(rename = "nld")]
    NonLinearDecreasing,
    #[serde(rename = "ld")]
    LinearDecreasing,
    #[serde(rename = "nli")]
    NonLinearIncreasing,
    #[serde(rename = "li")]
    LinearIncreasing,
    #[serde(rename = "constant")]
    Constant,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Weibull,
        Family::NonLinearDecreasing,
        Family::LinearDecreasing,
        Family::NonLinearIncreasing,
        Family::LinearIncreasing,
        Family::Constant,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Weibull => "weibull",
            Family::NonLinearDecreasing => "nld",
            Family::LinearDecreasing => "ld",
            Family::NonLinearIncreasing => "nli",
            Family::LinearIncreasing => "li",
            Family::Constant => "constant",
        }
    }
}

/// A hazard curve with its parameters.
///
/// | family | z(t)      | H(t)              |
/// |--------|-----------|-------------------|
/// | weibull| K t^m     | K t^(m+1) / (m+1) |
/// | nld    | K / √t    | 2K √t             |
/// | ld     | K − m t   | K t − m t² / 2    |
/// | nli    | K t²      | K t³ / 3          |
/// | li     | K t       | K t² / 2          |
/// | const  | λ         | λ t               |
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelDescriptor", into = "ModelDescriptor")]
pub enum HazardModel {
    Weibull { k: f64, m: f64 },
    NonLinearDecreasing { k: f64 },
    /// Valid only on `t <= k / m`, where the hazard is non-negative.
    LinearDecreasing { k: f64, m: f64 },
    NonLinearIncreasing { k: f64 },
    LinearIncreasing { k: f64 },
    Constant { lambda: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl HazardModel {
    pub fn weibull(k: f64, m: f64) -> Result<Self> {
        Self::Weibull { k, m }.validated()
    }

    pub fn non_linear_decreasing(k: f64) -> Result<Self> {
        Self::NonLinearDecreasing { k }.validated()
    }

    pub fn linear_decreasing(k: f64, m: f64) -> Result<Self> {
        Self::LinearDecreasing { k, m }.validated()
    }

    pub fn non_linear_increasing(k: f64) -> Result<Self> {
        Self::NonLinearIncreasing { k }.validated()
    }

    pub fn linear_increasing(k: f64) -> Result<Self> {
        Self::LinearIncreasing { k }.validated()
    }

    pub fn constant(lambda: f64) -> Result<Self> {
        Self::Constant { lambda }.validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            HazardModel::Weibull { k, m } => {
                positive("K", k)?;
                if !(m > -1.0 && m.is_finite()) {
                    return Err(invalid(format!("Weibull exponent m must be > -1, got {m}")));
                }
                Ok(())
            }
            HazardModel::LinearDecreasing { k, m } => {
                positive("K", k)?;
                positive("m", m)
            }
            HazardModel::NonLinearDecreasing { k }
            | HazardModel::NonLinearIncreasing { k }
            | HazardModel::LinearIncreasing { k } => positive("K", k),
            HazardModel::Constant { lambda } => positive("lambda", lambda),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            HazardModel::Weibull { .. } => Family::Weibull,
            HazardModel::NonLinearDecreasing { .. } => Family::NonLinearDecreasing,
            HazardModel::LinearDecreasing { .. } => Family::LinearDecreasing,
            HazardModel::NonLinearIncreasing { .. } => Family::NonLinearIncreasing,
            HazardModel::LinearIncreasing { .. } => Family::LinearIncreasing,
            HazardModel::Constant { .. } => Family::Constant,
        }
    }

    /// Upper end of the time domain, if the family has one.
    pub fn horizon(&self) -> Option<f64> {
        match *self {
            HazardModel::LinearDecreasing { k, m } => Some(k / m),
            _ => None,
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        self.validate()?;
        if !(t >= 0.0 && t.is_finite()) {
            return Err(domain(format!("time must be finite and >= 0, got {t}")));
        }
        if let Some(h) = self.horizon() {
            if t > h {
                return Err(domain(format!(
                    "linearly decreasing hazard is negative beyond t = K/m = {h}, got t = {t}"
                )));
            }
        }
        Ok(())
    }

    /// Instantaneous hazard `z(t)`.
    pub fn hazard_at(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        let singular = match *self {
            HazardModel::NonLinearDecreasing { .. } => true,
            HazardModel::Weibull { m, .. } => m < 0.0,
            _ => false,
        };
        if singular && t == 0.0 {
            return Err(domain(format!(
                "{} hazard is unbounded at t = 0",
                self.family().as_str()
            )));
        }
        Ok(match *self {
            HazardModel::Weibull { k, m } => k * t.powf(m),
            HazardModel::NonLinearDecreasing { k } => k / t.sqrt(),
            HazardModel::LinearDecreasing { k, m } => k - m * t,
            HazardModel::NonLinearIncreasing { k } => k * t * t,
            HazardModel::LinearIncreasing { k } => k * t,
            HazardModel::Constant { lambda } => lambda,
        })
    }

    /// Cumulative hazard `H(t) = ∫₀ᵗ z(x) dx`.
    pub fn cumulative_hazard(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(match *self {
            HazardModel::Weibull { k, m } => k * t.powf(m + 1.0) / (m + 1.0),
            HazardModel::NonLinearDecreasing { k } => 2.0 * k * t.sqrt(),
            HazardModel::LinearDecreasing { k, m } => k * t - m * t * t / 2.0,
            HazardModel::NonLinearIncreasing { k } => k * t * t * t / 3.0,
            HazardModel::LinearIncreasing { k } => k * t * t / 2.0,
            HazardModel::Constant { lambda } => lambda * t,
        })
    }

    /// Reliability `R(t) = e^{-H(t)}`.
    pub fn reliability_at(&self, t: f64) -> Result<f64> {
        Ok((-self.cumulative_hazard(t)?).exp())
    }

    /// `c(t) = H(t) / t`: `e^{-Xt} > R(t)` holds exactly when `X < c(t)`.
    pub fn reliability_tail_threshold(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Err(domain("reliability tail threshold needs t > 0"));
        }
        self.check_time(t)?;
        Ok(match *self {
            HazardModel::Weibull { k, m } => k * t.powf(m) / (m + 1.0),
            HazardModel::NonLinearDecreasing { k } => 2.0 * k / t.sqrt(),
            HazardModel::LinearDecreasing { k, m } => k - m * t / 2.0,
            HazardModel::NonLinearIncreasing { k } => k * t * t / 3.0,
            HazardModel::LinearIncreasing { k } => k * t / 2.0,
            HazardModel::Constant { lambda } => lambda,
        })
    }
}

/// JSON shape: `{"family": "...", "K": .., "m": .., "lambda": ..}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDescriptor {
    family: Family,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
}

impl TryFrom<ModelDescriptor> for HazardModel {
    type Error = Error;

    fn try_from(d: ModelDescriptor) -> Result<Self> {
        let name = d.family.as_str();
        let need = |v: Option<f64>, field: &str| {
            v.ok_or_else(|| invalid(format!("{name} model requires `{field}`")))
        };
        let forbid = |v: Option<f64>, field: &str| match v {
            Some(_) => Err(invalid(format!("{name} model does not take `{field}`"))),
            None => Ok(()),
        };
        match d.family {
            Family::Weibull | Family::LinearDecreasing => {
                forbid(d.lambda, "lambda")?;
                let (k, m) = (need(d.k, "K")?, need(d.m, "m")?);
                if d.family == Family::Weibull {
                    HazardModel::weibull(k, m)
                } else {
                    HazardModel::linear_decreasing(k, m)
                }
            }
            Family::NonLinearDecreasing | Family::NonLinearIncreasing | Family::LinearIncreasing => {
                forbid(d.lambda, "lambda")?;
                forbid(d.m, "m")?;
                let k = need(d.k, "K")?;
                match d.family {
                    Family::NonLinearDecreasing => HazardModel::non_linear_decreasing(k),
                    Family::NonLinearIncreasing => HazardModel::non_linear_increasing(k),
                    _ => HazardModel::linear_increasing(k),
                }
            }
            Family::Constant => {
                forbid(d.k, "K")?;
                forbid(d.m, "m")?;
                HazardModel::constant(need(d.lambda, "lambda")?)
            }
        }
    }
}

impl From<HazardModel> for ModelDescriptor {
    fn from(model: HazardModel) -> Self {
        let (k, m, lambda) = match model {
            HazardModel::Weibull { k, m } | HazardModel::LinearDecreasing { k, m } => {
                (Some(k), Some(m), None)
            }
            HazardModel::NonLinearDecreasing { k }
            | HazardModel::NonLinearIncreasing { k }
            | HazardModel::LinearIncreasing { k } => (Some(k), None, None),
            HazardModel::Constant { lambda } => (None, None, Some(lambda)),
        };
        ModelDescriptor { family: model.family(), k, m, lambda }
    }
}
