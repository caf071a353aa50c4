//! Closed-form tail bounds written out term by term, each family with its
//! own algebraic arrangement, for comparison against the generic kernel.
//!
//! `lp` is the expected number of dormant defects, `t` the observation time.
//! `e^x - 1` goes through `exp_m1`: the plain subtraction loses about
//! `eps/|x|` relative precision when `x` is small.

fn mu_r(lp: f64, t: f64) -> f64 {
    (lp * (-t).exp_m1()).exp()
}

fn inv_mu_r(lp: f64, t: f64) -> f64 {
    (-lp * (-t).exp_m1()).exp()
}

pub fn weibull_hazard(lp: f64, k: f64, m: f64, t: f64) -> f64 {
    let z = k * t.powf(m);
    (-(lp - z).powi(2) / (2.0 * lp)).exp()
}

pub fn weibull_reliability(lp: f64, k: f64, m: f64, t: f64) -> f64 {
    let mu = mu_r(lp, t);
    (-(mu - k * t.powf(m) / (m + 1.0)).powi(2) * (1.0 / (2.0 * mu))).exp()
}

pub fn nld_hazard(lp: f64, k: f64, t: f64) -> f64 {
    (-(t.sqrt() * lp - k).powi(2) / (2.0 * lp * t)).exp()
}

pub fn nld_reliability(lp: f64, k: f64, t: f64) -> f64 {
    (-inv_mu_r(lp, t) / 2.0 * (mu_r(lp, t) - 2.0 * k / t.sqrt()).powi(2)).exp()
}

pub fn ld_hazard(lp: f64, k: f64, m: f64, t: f64) -> f64 {
    (-(lp - k + m * t).powi(2) / (2.0 * lp)).exp()
}

pub fn ld_reliability(lp: f64, k: f64, m: f64, t: f64) -> f64 {
    (-inv_mu_r(lp, t) * (2.0 * mu_r(lp, t) - 2.0 * k + m * t).powi(2) / 8.0).exp()
}

pub fn nli_hazard(lp: f64, k: f64, t: f64) -> f64 {
    (-(lp - k * t * t).powi(2) / (2.0 * lp)).exp()
}

pub fn nli_reliability(lp: f64, k: f64, t: f64) -> f64 {
    (-inv_mu_r(lp, t) * (3.0 * mu_r(lp, t) - k * t * t).powi(2) / 18.0).exp()
}

pub fn li_hazard(lp: f64, k: f64, t: f64) -> f64 {
    (-(lp - k * t).powi(2) / (2.0 * lp)).exp()
}

pub fn li_reliability(lp: f64, k: f64, t: f64) -> f64 {
    let mu = mu_r(lp, t);
    (-(2.0 * mu - k * t).powi(2) / (8.0 * mu)).exp()
}

pub fn constant_hazard(lp: f64, lambda: f64) -> f64 {
    (-(lp - lambda).powi(2) / (2.0 * lp)).exp()
}

pub fn constant_reliability(lp: f64, lambda: f64, t: f64) -> f64 {
    let mu = mu_r(lp, t);
    (-(mu - lambda).powi(2) / (2.0 * mu)).exp()
}

/// Hazard bound when each dormant defect injects a Weibull hazard
/// `k_hat * t^m_hat`.
pub fn injected_hazard(lp: f64, k_hat: f64, m_hat: f64, k: f64, m: f64, t: f64) -> f64 {
    let mu = lp * k_hat * t.powf(m_hat);
    (-(mu - k * t.powf(m)).powi(2) / (2.0 * mu)).exp()
}

/// Reliability bound for injected Weibull hazards. `published_sign` selects
/// the positive inner exponent as printed; otherwise the inner exponent is
/// negated.
pub fn injected_reliability(
    lp: f64,
    k_hat: f64,
    m_hat: f64,
    k: f64,
    m: f64,
    t: f64,
    published_sign: bool,
) -> f64 {
    let inner = k_hat * t.powf(m_hat + 1.0);
    let inner = if published_sign { inner } else { -inner };
    let mu = (lp * inner.exp_m1()).exp();
    (-(mu - k * t.powf(m) / (m + 1.0)).powi(2) / (2.0 * mu)).exp()
}
