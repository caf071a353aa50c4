//! Reference computations for the test suites.
//!
//! Nothing here shares code with `sdpfeas-core`; every routine is written
//! from first principles so it can serve as an independent check.

pub mod printed;
pub mod quadrature;

/// Binomial coefficient as an exactly accumulated float (exact for n <= 60).
pub fn choose(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as f64
}

/// Pr[X <= k] for X ~ Binomial(n, p) by plain summation of the pmf.
pub fn naive_binomial_cdf(n: u64, p: f64, k: u64) -> f64 {
    let q = 1.0 - p;
    (0..=k.min(n))
        .map(|j| choose(n, j) * p.powi(j as i32) * q.powi((n - j) as i32))
        .sum()
}

/// Pr[X < threshold] for X ~ Binomial(n, p), by plain summation.
pub fn naive_strict_tail(n: u64, p: f64, threshold: f64) -> f64 {
    if threshold <= 0.0 {
        return 0.0;
    }
    let k = if threshold.fract() == 0.0 {
        threshold as u64 - 1
    } else {
        threshold.floor() as u64
    };
    if k >= n {
        return 1.0;
    }
    naive_binomial_cdf(n, p, k)
}

/// Pr[X <= k] by the forward pmf recurrence, usable for large n.
pub fn recurrence_binomial_cdf(n: u64, p: f64, k: u64) -> f64 {
    let q = 1.0 - p;
    let ratio = p / q;
    // Work in log space for the first term; (1-p)^n underflows for large n.
    let mut log_term = n as f64 * (1.0 - p).ln();
    let mut total = 0.0_f64;
    let mut scale: Option<f64> = None;
    for j in 0..=k.min(n) {
        if j > 0 {
            log_term += ((n - j + 1) as f64 / j as f64 * ratio).ln();
        }
        match scale {
            None => {
                scale = Some(log_term);
                total = 1.0;
            }
            Some(s) if log_term > s => {
                total = total * (s - log_term).exp() + 1.0;
                scale = Some(log_term);
            }
            Some(s) => total += (log_term - s).exp(),
        }
    }
    scale.map_or(0.0, |s| (s + total.ln()).exp())
}
