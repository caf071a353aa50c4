//! Classifier evaluation data and the false omission rate derived from it.
//!
//! Only the predicted-clean column of the confusion table feeds the bounds:
//! a module predicted clean that is actually defective is a dormant defect,
//! and `FN / (FN + TN)` is the probability that any predicted-clean module
//! is one.

use std::collections::HashMap;
use std::io::Read;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Assumption, Error, Result, ZeroSide};

/// The four prediction-outcome counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawCounts")]
pub struct ConfusionMatrix {
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCounts {
    tp: i64,
    #[serde(rename = "fn")]
    fn_: i64,
    fp: i64,
    tn: i64,
}

impl TryFrom<RawCounts> for ConfusionMatrix {
    type Error = Error;

    fn try_from(raw: RawCounts) -> Result<Self> {
        ConfusionMatrix::from_counts(raw.tp, raw.fn_, raw.fp, raw.tn)
    }
}

fn non_negative(name: &str, v: i64) -> Result<u64> {
    u64::try_from(v).map_err(|_| invalid(format!("count `{name}` must be non-negative, got {v}")))
}

impl ConfusionMatrix {
    pub fn from_counts(tp: i64, fn_: i64, fp: i64, tn: i64) -> Result<Self> {
        Ok(Self {
            tp: non_negative("tp", tp)?,
            fn_: non_negative("fn", fn_)?,
            fp: non_negative("fp", fp)?,
            tn: non_negative("tn", tn)?,
        })
    }

    /// Tally `(actual, predicted)` pairs.
    pub fn from_labels<I>(records: I) -> Self
    where
        I: IntoIterator<Item = (Label, Label)>,
    {
        let mut m = Self::default();
        for pair in records {
            m.record(pair);
        }
        m
    }

    /// Tally raw `(actual, predicted)` label strings.
    pub fn from_records<'a, I>(records: I, vocab: &LabelVocabulary) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut m = Self::default();
        for (index, (actual, predicted)) in records.into_iter().enumerate() {
            let actual = vocab.parse(actual).map_err(|message| Error::Parse { index, message })?;
            let predicted =
                vocab.parse(predicted).map_err(|message| Error::Parse { index, message })?;
            m.record((actual, predicted));
        }
        Ok(m)
    }

    /// Read a CSV file with header `actual,predicted`.
    ///
    /// Record indices in errors are zero-based and exclude the header.
    pub fn from_csv<R: Read>(reader: R, vocab: &LabelVocabulary) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Parse { index: 0, message: e.to_string() })?
            .clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(name))
                .ok_or_else(|| Error::Parse {
                    index: 0,
                    message: format!("missing `{name}` column in header"),
                })
        };
        let (a, p) = (col("actual")?, col("predicted")?);
        let mut m = Self::default();
        for (index, row) in rdr.records().enumerate() {
            let row = row.map_err(|e| Error::Parse { index, message: e.to_string() })?;
            let field = |i: usize| {
                row.get(i).ok_or_else(|| Error::Parse {
                    index,
                    message: format!("expected 2 fields, found {}", row.len()),
                })
            };
            let actual =
                vocab.parse(field(a)?).map_err(|message| Error::Parse { index, message })?;
            let predicted =
                vocab.parse(field(p)?).map_err(|message| Error::Parse { index, message })?;
            m.record((actual, predicted));
        }
        Ok(m)
    }

    fn record(&mut self, (actual, predicted): (Label, Label)) {
        match (actual, predicted) {
            (Label::Defective, Label::Defective) => self.tp += 1,
            (Label::Defective, Label::Clean) => self.fn_ += 1,
            (Label::Clean, Label::Defective) => self.fp += 1,
            (Label::Clean, Label::Clean) => self.tn += 1,
        }
    }

    /// Modules the classifier let through as clean.
    pub fn predicted_clean(&self) -> u64 {
        self.fn_ + self.tn
    }

    /// `FN / (FN + TN)`; requires at least one of each.
    pub fn false_omission_rate(&self) -> Result<FailureProbability> {
        let zero = match (self.fn_ == 0, self.tn == 0) {
            (false, false) => None,
            (true, false) => Some(ZeroSide::FalseNegatives),
            (false, true) => Some(ZeroSide::TrueNegatives),
            (true, true) => Some(ZeroSide::Both),
        };
        if let Some(zero) = zero {
            return Err(Error::AssumptionViolation(Assumption::NonDegenerateOmission { zero }));
        }
        let denominator = self.predicted_clean();
        Ok(FailureProbability {
            value: self.fn_ as f64 / denominator as f64,
            ratio: Some((self.fn_, denominator)),
        })
    }
}

/// Per-module probability that a predicted-clean module is defective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FailureProbability {
    value: f64,
    /// Exact `(fn, fn + tn)` when derived from counts.
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<(u64, u64)>,
}

impl FailureProbability {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid(format!("failure probability must lie in (0, 1), got {p}")));
        }
        Ok(Self { value: p, ratio: None })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn ratio(&self) -> Option<(u64, u64)> {
        self.ratio
    }

    /// The exact ratio in lowest terms, e.g. `"3/20"`.
    pub fn fraction(&self) -> Option<String> {
        self.ratio.map(|(n, d)| {
            let g = n.gcd(&d);
            format!("{}/{}", n / g, d / g)
        })
    }
}

impl<'de> Deserialize<'de> for FailureProbability {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = f64::deserialize(d)?;
        FailureProbability::new(p).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Defective,
    Clean,
}

/// Case-insensitive label parser; `defective` and `clean` are always
/// recognised, extra aliases may be added.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct LabelVocabulary {
    #[serde(default)]
    aliases: HashMap<String, Label>,
}

impl LabelVocabulary {
    pub fn with_alias(mut self, alias: &str, label: Label) -> Self {
        self.aliases.insert(alias.to_ascii_lowercase(), label);
        self
    }

    pub fn parse(&self, raw: &str) -> std::result::Result<Label, String> {
        let key = raw.trim().to_ascii_lowercase();
        match key.as_str() {
            "defective" => Ok(Label::Defective),
            "clean" => Ok(Label::Clean),
            _ => self
                .aliases
                .iter()
                .find(|(alias, _)| alias.to_ascii_lowercase() == key)
                .map(|(_, label)| *label)
                .ok_or_else(|| format!("unrecognised label `{}`", raw.trim())),
        }
    }
}
