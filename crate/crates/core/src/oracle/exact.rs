//! Exact binomial probabilities in log space.
//!
//! The pmf uses Loader's saddle-point form: the log binomial coefficient is
//! split into Stirling-series remainders (`stirlerr`) and a deviance term
//! (`bd0`), which avoids subtracting three huge log-gamma values and keeps
//! terms accurate to near machine precision for `n` in the millions.

use std::f64::consts::PI;

use super::{CountCap, Method, TailEstimate, TailQuery};
use crate::error::{invalid, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln n! - [(n + 1/2) ln n - n + ln √(2π)]`.
fn stirlerr(n: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    let nf = n as f64;
    if n <= 15 {
        let ln_fact: f64 = (2..=n).map(|i| (i as f64).ln()).sum();
        return ln_fact - (nf + 0.5) * nf.ln() + nf - LN_SQRT_2PI;
    }
    let nn = nf * nf;
    if n > 500 {
        return (S0 - S1 / nn) / nf;
    }
    if n > 80 {
        return (S0 - (S1 - S2 / nn) / nn) / nf;
    }
    if n > 35 {
        return (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / nf;
    }
    (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / nf
}

/// Deviance `x ln(x / np) + np - x`, evaluated without cancellation.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// `ln Pr[X = k]` for `X ~ Binomial(n, p)`.
pub fn ln_binomial_pmf(n: u64, k: u64, p: f64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let q = 1.0 - p;
    if k == 0 {
        return n as f64 * (-p).ln_1p();
    }
    if k == n {
        return n as f64 * p.ln();
    }
    let (nf, kf) = (n as f64, k as f64);
    let rest = (n - k) as f64;
    let lc = stirlerr(n) - stirlerr(k) - stirlerr(n - k) - bd0(kf, nf * p) - bd0(rest, nf * q);
    let lf = (2.0 * PI).ln() + kf.ln() + (-kf / nf).ln_1p();
    lc - 0.5 * lf
}

/// Streaming log-sum-exp.
#[derive(Default)]
struct LogSum {
    shift: Option<f64>,
    acc: f64,
}

impl LogSum {
    fn push(&mut self, term: f64) {
        if term == f64::NEG_INFINITY {
            return;
        }
        match self.shift {
            None => {
                self.shift = Some(term);
                self.acc = 1.0;
            }
            Some(s) if term > s => {
                self.acc = self.acc * (s - term).exp() + 1.0;
                self.shift = Some(term);
            }
            Some(s) => self.acc += (term - s).exp(),
        }
    }

    fn ln(&self) -> f64 {
        self.shift.map_or(f64::NEG_INFINITY, |s| s + self.acc.ln())
    }
}

/// `ln Pr[X <= k]`.
pub fn log_binomial_cdf(n: u64, p: f64, k: u64) -> f64 {
    if k >= n {
        return 0.0;
    }
    let mut sum = LogSum::default();
    for j in 0..=k {
        sum.push(ln_binomial_pmf(n, j, p));
    }
    sum.ln().min(0.0)
}

/// `Pr[X <= k]` for `k = 0..=n`; the last entry is pinned to exactly 1.
pub fn binomial_cdf_table(n: u64, p: f64) -> Vec<f64> {
    let mut sum = LogSum::default();
    let mut table: Vec<f64> = (0..=n)
        .map(|j| {
            sum.push(ln_binomial_pmf(n, j, p));
            sum.ln().exp().min(1.0)
        })
        .collect();
    if let Some(last) = table.last_mut() {
        *last = 1.0;
    }
    table
}

/// Exact `Pr[scale · X < threshold]`.
pub fn exact_binomial_tail(q: &TailQuery) -> TailEstimate {
    let log_value = match q.cap() {
        CountCap::Empty => f64::NEG_INFINITY,
        CountCap::All => 0.0,
        CountCap::UpTo(k) => log_binomial_cdf(q.l, q.p, k),
    };
    TailEstimate {
        query: *q,
        value: log_value.exp(),
        log_value,
        method: Method::Exact,
        trials: None,
        stderr: None,
        seed: None,
    }
}

/// Exact `Pr[Y < threshold]` with `Y = scale · Binomial(l, p)`.
pub fn exact_scaled_tail_y(l: u64, p: f64, scale: f64, threshold: f64) -> Result<TailEstimate> {
    Ok(exact_binomial_tail(&TailQuery::scaled(l, p, scale, threshold)?))
}

/// Exact `Pr[e^{-Xt} > r]`, i.e. `Pr[X < -ln(r) / t]`.
pub fn exact_reliability_tail(l: u64, p: f64, t: f64, r_threshold: f64) -> Result<TailEstimate> {
    if !(r_threshold > 0.0 && r_threshold < 1.0) {
        return Err(invalid(format!("reliability threshold must lie in (0, 1), got {r_threshold}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid(format!("time must be finite and > 0, got {t}")));
    }
    Ok(exact_binomial_tail(&TailQuery::new(l, p, -r_threshold.ln() / t)?))
}
