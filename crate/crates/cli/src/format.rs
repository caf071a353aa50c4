//! CSV renderings. Every float is written with 17 significant digits so a
//! re-parse recovers the exact `f64`.

use sdpfeas_core::{ConfusionMatrix, FailureProbability, SweepOutcome, SweepPoint};

use crate::error::CliError;
use crate::report::VerificationRow;

pub const SWEEP_HEADER: [&str; 7] = ["t", "theorem", "mu", "threshold", "delta", "bound", "regime"];

pub const VERIFY_HEADER: [&str; 12] = [
    "t", "kind", "theorem", "method", "bound", "oracle", "holds", "slack", "ratio", "stderr", "trials",
    "advisory",
];

/// `x` with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn kebab<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, CliError> {
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn sweep_csv(rows: &[SweepPoint]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER)?;
    for row in rows {
        let record = match &row.outcome {
            SweepOutcome::Bound(b) => [
                num(row.t),
                b.theorem.as_str().to_string(),
                num(b.mu),
                num(b.threshold),
                num(b.delta),
                num(b.bound),
                kebab(&b.regime),
            ],
            SweepOutcome::OutOfRegime(m) => [
                num(row.t),
                m.theorem.as_str().to_string(),
                num(m.mu),
                num(m.threshold),
                num(m.delta),
                String::new(),
                kebab(&m.regime),
            ],
        };
        w.write_record(&record)?;
    }
    finish(w)
}

pub fn verify_csv(rows: &[VerificationRow]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(VERIFY_HEADER)?;
    for row in rows {
        let r = &row.record;
        w.write_record(&[
            num(row.t),
            kebab(&row.kind),
            r.theorem.as_str().to_string(),
            kebab(&r.method),
            num(r.bound),
            num(r.oracle),
            r.holds.to_string(),
            num(r.slack),
            opt(r.ratio.map(num)),
            opt(r.stderr.map(num)),
            opt(r.trials),
            r.advisory.to_string(),
        ])?;
    }
    finish(w)
}

pub fn metrics_csv(m: &ConfusionMatrix, p: &FailureProbability) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["tp", "fn", "fp", "tn", "p", "fraction"])?;
    w.write_record(&[
        m.tp.to_string(),
        m.fn_.to_string(),
        m.fp.to_string(),
        m.tn.to_string(),
        num(p.value()),
        opt(p.fraction()),
    ])?;
    finish(w)
}
