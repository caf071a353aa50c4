use serde::Serialize;

use super::{Method, TailEstimate, TailQuery};
use crate::bounds::{BoundResult, BoundTheorem};
use crate::error::{invalid, Result};

/// Outcome of checking one bound against one oracle value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub theorem: BoundTheorem,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Event the bound was derived for, if it is tied to an outcome model.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_event: Option<String>,
    pub oracle_event: String,
    /// False when the two events differ; the comparison is then meaningless
    /// and the caller is expected to treat it as an audit failure.
    pub same_event: bool,
    pub bound: f64,
    pub log_bound: f64,
    pub oracle: f64,
    pub log_oracle: f64,
    pub method: Method,
    pub holds: bool,
    /// `bound - oracle`.
    pub slack: f64,
    /// `oracle / bound`; absent when the bound underflows to zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Monte-Carlo only: the point estimate alone exceeds the bound even
    /// though the 3-sigma allowance keeps `holds` true.
    pub advisory: bool,
}

/// Compare a bound with an oracle estimate of the same tail.
///
/// Exact oracles must lie strictly below the bound; the comparison is done on
/// logarithms so bounds far below `f64::MIN_POSITIVE` still compare correctly.
/// Monte-Carlo oracles get a three-standard-error allowance.
pub fn verify_bound(bound: &BoundResult, oracle: &TailEstimate) -> Result<VerificationRecord> {
    if !(bound.threshold >= 0.0 && bound.threshold < bound.mu) {
        return Err(invalid(format!(
            "bound is out of regime (threshold {} vs expectation {})",
            bound.threshold, bound.mu
        )));
    }
    let same_event = !matches!(&bound.event, Some(e) if !e.same_event(&oracle.query));
    let (holds, advisory) = match oracle.method {
        Method::Exact => (oracle.log_value < bound.log_bound, false),
        Method::MonteCarlo => {
            let se = oracle.stderr.unwrap_or(0.0);
            (oracle.value - 3.0 * se < bound.bound, oracle.value >= bound.bound)
        }
    };
    Ok(VerificationRecord {
        theorem: bound.theorem,
        t: bound.t,
        bound_event: bound.event.as_ref().map(TailQuery::describe),
        oracle_event: oracle.query.describe(),
        same_event,
        bound: bound.bound,
        log_bound: bound.log_bound,
        oracle: oracle.value,
        log_oracle: oracle.log_value,
        method: oracle.method,
        holds: holds && same_event,
        slack: bound.bound - oracle.value,
        ratio: (bound.bound > 0.0).then(|| oracle.value / bound.bound),
        stderr: oracle.stderr,
        trials: oracle.trials,
        seed: oracle.seed,
        advisory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{chernoff_lower_tail, hazard_bound};
    use crate::hazard::HazardModel;
    use crate::oracle::{exact_binomial_tail, mc_tail};
    use crate::outcome::SdpOutcome;

    #[test]
    fn worked_constant_scenario() {
        let o = SdpOutcome::from_parts(100, 0.05).unwrap();
        let b = hazard_bound(&o, &HazardModel::constant(2.0).unwrap(), 1.0).unwrap();
        let e = exact_binomial_tail(b.event.as_ref().unwrap());
        let r = verify_bound(&b, &e).unwrap();
        assert!(r.holds && r.same_event && !r.advisory);
        assert!((r.bound - 0.406_570).abs() < 5e-7);
        assert!((r.oracle - 0.037_081).abs() < 5e-7);
        assert!((r.slack - 0.369_489).abs() < 1e-6, "{}", r.slack);
        assert!((r.ratio.unwrap() - r.oracle / r.bound).abs() < 1e-15);
    }

    #[test]
    fn trivial_threshold_holds() {
        let b = chernoff_lower_tail(10.0, 0.0).unwrap();
        assert!((b.log_bound + 5.0).abs() < 1e-15);
        let e = exact_binomial_tail(&TailQuery::new(20, 0.5, 0.0).unwrap());
        let r = verify_bound(&b, &e).unwrap();
        assert!(r.holds);
        assert_eq!(r.oracle, 0.0);
        assert_eq!(r.bound_event, None);
    }

    #[test]
    fn log_space_comparison_survives_underflow() {
        // bound ~ e^-1200 underflows but the exact tail is smaller still
        let b = chernoff_lower_tail(2400.0, 0.0).unwrap();
        assert_eq!(b.bound, 0.0);
        let e = exact_binomial_tail(&TailQuery::new(4800, 0.5, 0.0).unwrap());
        assert!(verify_bound(&b, &e).unwrap().holds);
        let b = chernoff_lower_tail(2400.0, 1.0).unwrap();
        let e = exact_binomial_tail(&TailQuery::new(4800, 0.5, 1.0).unwrap());
        assert!(e.log_value < b.log_bound);
        let r = verify_bound(&b, &e).unwrap();
        assert!(r.holds && r.ratio.is_none());
    }

    #[test]
    fn violations_are_reported() {
        // e^-0.05 against Pr[Binomial(20, 1/2) < 15] ~ 0.979
        let b = chernoff_lower_tail(10.0, 9.0).unwrap();
        let e = exact_binomial_tail(&TailQuery::new(20, 0.5, 15.0).unwrap());
        let r = verify_bound(&b, &e).unwrap();
        assert!(!r.holds);
        assert!(r.slack < 0.0);
    }

    #[test]
    fn mc_allowance_and_advisory() {
        let q = TailQuery::new(20, 0.5, 9.0).unwrap();
        let mc = mc_tail(&q, 400, 1).unwrap();
        let mut b = chernoff_lower_tail(10.0, 9.0).unwrap();
        b.bound = mc.value - mc.stderr.unwrap();
        b.log_bound = b.bound.ln();
        let r = verify_bound(&b, &mc).unwrap();
        assert!(r.holds && r.advisory);
        b.bound = mc.value - 4.0 * mc.stderr.unwrap();
        b.log_bound = b.bound.ln();
        assert!(!verify_bound(&b, &mc).unwrap().holds);
    }

    #[test]
    fn mismatched_event_is_flagged() {
        let o = SdpOutcome::from_parts(100, 0.05).unwrap();
        let b = hazard_bound(&o, &HazardModel::constant(2.0).unwrap(), 1.0).unwrap();
        let e = exact_binomial_tail(&TailQuery::new(100, 0.05, 3.0).unwrap());
        let r = verify_bound(&b, &e).unwrap();
        assert!(!r.same_event && !r.holds);
        assert!(r.bound_event.unwrap().contains("< 2"));
    }

    #[test]
    fn out_of_regime_input_rejected() {
        let mut b = chernoff_lower_tail(10.0, 3.0).unwrap();
        b.threshold = 12.0;
        let e = exact_binomial_tail(&TailQuery::new(20, 0.5, 12.0).unwrap());
        assert!(verify_bound(&b, &e).is_err());
    }
}
