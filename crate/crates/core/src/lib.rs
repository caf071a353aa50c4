//! Feasibility analysis for shipping software on the verdicts of a defect
//! predictor.
//!
//! Modules classified clean but actually defective each fail with the false
//! omission rate `p`, so among `l` predicted-clean modules the failure count
//! is `Binomial(l, p)`. Chernoff lower-tail bounds then limit the chance that
//! the system hazard stays under, or the reliability stays above, a target
//! curve drawn from one of six hazard families.
//!
//! * [`confusion`]: confusion tables, label ingestion, the failure probability.
//! * [`hazard`]: hazard, cumulative hazard and reliability for each family.
//! * [`outcome`]: the `(l, p)` outcome model and its expectations.
//! * [`bounds`]: the bound kernel, its instantiations and time sweeps.
//! * [`oracle`]: exact and Monte-Carlo tails and bound verification.

pub mod bounds;
pub mod confusion;
pub mod error;
pub mod hazard;
pub mod oracle;
pub mod outcome;

pub use bounds::{
    bound_sweep, chernoff_lower_tail, evaluate, hazard_bound, hazard_bound_y, reliability_bound,
    reliability_bound_y, BoundKind, BoundResult, BoundTheorem, Regime, RegimeMiss, SweepOutcome,
    SweepPoint,
};
pub use confusion::{ConfusionMatrix, FailureProbability, Label, LabelVocabulary};
pub use error::{Assumption, Error, Result, Variant, ZeroSide};
pub use hazard::{Family, HazardModel};
pub use oracle::{Method, TailEstimate, TailQuery, VerificationRecord};
pub use outcome::{Injection, OutcomeDescriptor, SdpOutcome, SignMode};
