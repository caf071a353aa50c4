use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use sdpfeas_core::oracle::{exact_binomial_tail, mc_tail, verify_bound};
use sdpfeas_core::{
    bound_sweep, BoundKind, ConfusionMatrix, LabelVocabulary, SweepOutcome, SweepPoint,
};
use serde::Serialize;

use crate::cli::{BoundArgs, Format, MetricsArgs, OutputArgs, ScenarioArgs};
use crate::config::{ScenarioConfig, VerifyConfig, DEFAULT_EPSILON, DEFAULT_SEED};
use crate::error::{exit, CliError};
use crate::format;
use crate::report::{self, FeasibilityReport, OutcomeSummary, Settings, Tool, VerificationRow};

fn emit(out: &OutputArgs, bytes: &[u8]) -> Result<(), CliError> {
    match &out.out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn json_line<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(v)?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[derive(Serialize)]
struct Metrics {
    p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fraction: Option<String>,
    confusion: ConfusionMatrix,
    predicted_clean: u64,
}

pub fn metrics(args: &MetricsArgs) -> Result<i32, CliError> {
    let path = args.input.as_deref().or(args.config.as_deref()).expect("clap requires one");
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?
    };
    let matrix = if text.trim_start().starts_with('{') {
        serde_json::from_str::<ConfusionMatrix>(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
    } else {
        ConfusionMatrix::from_csv(text.as_bytes(), &LabelVocabulary::default())?
    };
    let p = matrix.false_omission_rate()?;
    let bytes = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => json_line(&Metrics {
            p: p.value(),
            fraction: p.fraction(),
            confusion: matrix,
            predicted_clean: matrix.predicted_clean(),
        })?,
        Format::Csv => format::metrics_csv(&matrix, &p)?,
    };
    emit(&args.output, &bytes)?;
    Ok(exit::OK)
}

/// Config with command-line overrides folded in, so the report echoes what
/// actually ran.
fn effective_config(args: &ScenarioArgs) -> Result<ScenarioConfig, CliError> {
    let mut cfg = ScenarioConfig::load(&args.config)?;
    if args.corrected {
        cfg.corrected = true;
    }
    if args.as_published {
        cfg.corrected = false;
    }
    if let Some(eps) = args.epsilon {
        cfg.epsilon = Some(eps);
    }
    let eps = cfg.epsilon.unwrap_or(DEFAULT_EPSILON);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CliError::Usage(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if args.seed.is_some() || args.trials.is_some() {
        let v = cfg.verify.get_or_insert_with(VerifyConfig::default);
        if let Some(seed) = args.seed {
            v.seed = Some(seed);
        }
        if let Some(trials) = args.trials {
            v.mc_trials = trials;
        }
    }
    if let Some(f) = args.corrupt_bound_factor {
        if !(f > 0.0 && f.is_finite()) {
            return Err(CliError::Usage(format!("bound factor must be finite and > 0, got {f}")));
        }
    }
    Ok(cfg)
}

/// All requested kinds over the grid, ordered by time and then by kind.
fn sweep_rows(cfg: &ScenarioConfig, kinds: &[BoundKind]) -> Result<Vec<SweepPoint>, CliError> {
    let outcome = cfg.resolve_outcome()?;
    let grid = cfg.time_grid.points()?;
    let variant = cfg.variant(&outcome);
    let per_kind = kinds
        .iter()
        .map(|&k| bound_sweep(&outcome, &cfg.model, &grid, k, variant, cfg.sign_mode()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::with_capacity(grid.len() * kinds.len());
    for i in 0..grid.len() {
        rows.extend(per_kind.iter().map(|points| points[i].clone()));
    }
    Ok(rows)
}

fn corrupt(rows: &mut [SweepPoint], factor: Option<f64>) {
    let Some(f) = factor else { return };
    for row in rows {
        if let SweepOutcome::Bound(b) = &mut row.outcome {
            b.bound *= f;
            b.log_bound += f.ln();
        }
    }
}

pub fn bound(args: &BoundArgs) -> Result<i32, CliError> {
    let s = &args.scenario;
    let cfg = effective_config(s)?;
    let kind = match (args.kind, cfg.kinds.as_deref()) {
        (Some(k), _) => k,
        (None, None) => BoundKind::Hazard,
        (None, Some([k])) => *k,
        (None, Some(_)) => {
            return Err(CliError::Usage("bound evaluates one kind; pass --kind or list one in `kinds`".into()))
        }
    };
    if cfg.time_grid.points()?.len() != 1 {
        return Err(CliError::Usage("bound evaluates one time point; use `sweep` for a grid".into()));
    }
    let mut rows = sweep_rows(&cfg, &[kind])?;
    corrupt(&mut rows, s.corrupt_bound_factor);
    let bytes = match s.output.format.unwrap_or(Format::Json) {
        Format::Json => json_line(&rows[0])?,
        Format::Csv => format::sweep_csv(&rows)?,
    };
    emit(&s.output, &bytes)?;
    Ok(match rows[0].outcome {
        SweepOutcome::Bound(_) => exit::OK,
        SweepOutcome::OutOfRegime(_) => exit::OUT_OF_REGIME,
    })
}

pub fn sweep(args: &ScenarioArgs) -> Result<i32, CliError> {
    let cfg = effective_config(args)?;
    let mut rows = sweep_rows(&cfg, &cfg.kinds()?)?;
    corrupt(&mut rows, args.corrupt_bound_factor);
    let bytes = match args.output.format.unwrap_or(Format::Csv) {
        Format::Json => json_line(&rows)?,
        Format::Csv => format::sweep_csv(&rows)?,
    };
    emit(&args.output, &bytes)?;
    Ok(exit::OK)
}

/// Builds the report; the timestamp is the caller's so tests can pin it.
pub fn build_report(args: &ScenarioArgs, timestamp: String) -> Result<FeasibilityReport, CliError> {
    let cfg = effective_config(args)?;
    let kinds = cfg.kinds()?;
    let outcome = cfg.resolve_outcome()?;
    let verify = cfg.verify.unwrap_or_default();
    let settings = Settings {
        sign_mode: cfg.sign_mode(),
        epsilon: cfg.epsilon.unwrap_or(DEFAULT_EPSILON),
        exact: verify.exact,
        mc_trials: verify.mc_trials,
        seed: verify.seed.unwrap_or(DEFAULT_SEED),
    };
    if !settings.exact && settings.mc_trials == 0 {
        return Err(CliError::Usage("nothing to verify: exact is off and mc_trials is 0".into()));
    }

    let mut rows = sweep_rows(&cfg, &kinds)?;
    corrupt(&mut rows, args.corrupt_bound_factor);

    let checks: Vec<Vec<VerificationRow>> = rows
        .par_iter()
        .map(|row| {
            let SweepOutcome::Bound(b) = &row.outcome else { return Ok(Vec::new()) };
            let event = b
                .event
                .as_ref()
                .ok_or_else(|| CliError::Internal(format!("bound at t={} has no event", row.t)))?;
            let mut out = Vec::new();
            if settings.exact {
                out.push(verify_bound(b, &exact_binomial_tail(event))?);
            }
            if settings.mc_trials > 0 {
                out.push(verify_bound(b, &mc_tail(event, settings.mc_trials, settings.seed)?)?);
            }
            out.into_iter()
                .map(|record| {
                    if record.same_event {
                        Ok(VerificationRow { t: row.t, kind: row.kind, record })
                    } else {
                        Err(CliError::Internal(format!(
                            "oracle event {} differs from bound event {:?}",
                            record.oracle_event, record.bound_event
                        )))
                    }
                })
                .collect()
        })
        .collect::<Result<_, CliError>>()?;
    let verification: Vec<VerificationRow> = checks.into_iter().flatten().collect();

    let summary = report::summarize(&rows, &verification, &kinds, settings.epsilon);
    Ok(FeasibilityReport {
        tool: Tool::current(),
        timestamp,
        outcome: OutcomeSummary {
            l: outcome.l(),
            p: outcome.p(),
            fraction: outcome.probability().fraction(),
            variant: cfg.variant(&outcome),
            n: outcome.total_modules(),
        },
        scenario: cfg,
        settings,
        rows,
        verification,
        summary,
    })
}

pub fn verify(args: &ScenarioArgs) -> Result<i32, CliError> {
    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let report = build_report(args, timestamp)?;
    let bytes = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => json_line(&report)?,
        Format::Csv => format::verify_csv(&report.verification)?,
    };
    emit(&args.output, &bytes)?;
    Ok(if report.summary.verification.all_hold { exit::OK } else { exit::VERIFICATION })
}
