//! Seeded Monte-Carlo estimates.
//!
//! Trial `i` draws from its own ChaCha8 stream (`set_stream(i)`) under a key
//! derived from the user seed, so a result depends only on `(seed, trials)`
//! and never on thread count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use super::{CountCap, Method, TailEstimate, TailQuery};
use crate::error::{invalid, Result};

/// Largest `l` for which `Auto` samples by CDF-table inversion.
pub const INVERSION_CUTOFF: u64 = 10_000;

const MEAN_CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplerKind {
    /// Inversion up to [`INVERSION_CUTOFF`], BTPE above it.
    #[default]
    Auto,
    /// Binary search of a uniform in the exact CDF table.
    Inversion,
    /// Literal sum of `l` Bernoulli(p) draws. Slow; kept as a reference path.
    BernoulliSum,
    /// Rejection sampler from `rand_distr`.
    Btpe,
}

#[derive(Debug, Clone)]
enum Strategy {
    Table(Vec<f64>),
    Bernoulli,
    Btpe(Binomial),
}

/// Draws `X ~ Binomial(l, p)`.
#[derive(Debug, Clone)]
pub struct BinomialSampler {
    l: u64,
    p: f64,
    strategy: Strategy,
}

impl BinomialSampler {
    pub fn new(l: u64, p: f64, kind: SamplerKind) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid(format!("sampler needs 0 < p < 1, got {p}")));
        }
        let kind = match kind {
            SamplerKind::Auto if l <= INVERSION_CUTOFF => SamplerKind::Inversion,
            SamplerKind::Auto => SamplerKind::Btpe,
            k => k,
        };
        let strategy = match kind {
            SamplerKind::Inversion => Strategy::Table(super::binomial_cdf_table(l, p)),
            SamplerKind::BernoulliSum => Strategy::Bernoulli,
            _ => Strategy::Btpe(Binomial::new(l, p).map_err(|e| invalid(e.to_string()))?),
        };
        Ok(Self { l, p, strategy })
    }

    /// The concrete sampler in use (never `Auto`).
    pub fn kind(&self) -> SamplerKind {
        match self.strategy {
            Strategy::Table(_) => SamplerKind::Inversion,
            Strategy::Bernoulli => SamplerKind::BernoulliSum,
            Strategy::Btpe(_) => SamplerKind::Btpe,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match &self.strategy {
            Strategy::Table(cdf) => {
                let u: f64 = rng.random();
                cdf.partition_point(|&c| c <= u) as u64
            }
            Strategy::Bernoulli => (0..self.l).filter(|_| rng.random::<f64>() < self.p).count() as u64,
            Strategy::Btpe(b) => b.sample(rng),
        }
    }
}

fn trial_rng(key: [u8; 32], trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

fn derive_key(seed: u64) -> [u8; 32] {
    ChaCha8Rng::seed_from_u64(seed).get_seed()
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        Err(invalid("Monte-Carlo needs at least one trial"))
    } else {
        Ok(())
    }
}

/// Monte-Carlo estimate of `Pr[scale · X < threshold]` with the default sampler.
pub fn mc_tail(q: &TailQuery, trials: u64, seed: u64) -> Result<TailEstimate> {
    mc_tail_with(q, trials, seed, SamplerKind::Auto)
}

pub fn mc_tail_with(q: &TailQuery, trials: u64, seed: u64, kind: SamplerKind) -> Result<TailEstimate> {
    check_trials(trials)?;
    let hits = match q.cap() {
        CountCap::Empty => 0,
        CountCap::All => trials,
        CountCap::UpTo(k) => {
            let sampler = BinomialSampler::new(q.l, q.p, kind)?;
            let key = derive_key(seed);
            (0..trials)
                .into_par_iter()
                .filter(|&i| sampler.sample(&mut trial_rng(key, i)) <= k)
                .count() as u64
        }
    };
    let n = trials as f64;
    let value = hits as f64 / n;
    Ok(TailEstimate {
        query: *q,
        value,
        log_value: value.ln(),
        method: Method::MonteCarlo,
        trials: Some(trials),
        stderr: Some((value * (1.0 - value) / n).sqrt()),
        seed: Some(seed),
    })
}

/// Sample mean of `f(X)` and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Estimates `E[f(X)]`, `X ~ Binomial(l, p)`.
///
/// Partial sums are formed over fixed chunks and added in chunk order, so
/// the floating-point result is reproducible across thread counts.
pub fn mc_mean<F>(l: u64, p: f64, trials: u64, seed: u64, f: F) -> Result<MeanEstimate>
where
    F: Fn(u64) -> f64 + Sync,
{
    check_trials(trials)?;
    let sampler = BinomialSampler::new(l, p, SamplerKind::Auto)?;
    let key = derive_key(seed);
    let chunks = trials.div_ceil(MEAN_CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * MEAN_CHUNK).min(trials);
            (c * MEAN_CHUNK..end).fold((0.0, 0.0), |(s, s2), i| {
                let v = f(sampler.sample(&mut trial_rng(key, i)));
                (s + v, s2 + v * v)
            })
        })
        .collect();
    let (sum, sum_sq) = partials.iter().fold((0.0, 0.0), |(a, b), &(s, s2)| (a + s, b + s2));
    let n = trials as f64;
    let mean = sum / n;
    let var = if trials > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok(MeanEstimate { mean, stderr: (var / n).sqrt(), trials, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact_binomial_tail;
    use sdpfeas_testkit::naive_binomial_cdf;

    #[test]
    fn deterministic_for_seed() {
        let q = TailQuery::new(200, 0.1, 15.0).unwrap();
        let a = mc_tail(&q, 20_000, 7).unwrap();
        let b = mc_tail(&q, 20_000, 7).unwrap();
        let c = mc_tail(&q, 20_000, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.value, c.value);
        assert_eq!(a.seed, Some(7));
    }

    #[test]
    fn thread_count_does_not_matter() {
        let q = TailQuery::new(50_000, 0.02, 990.0).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    let t = mc_tail(&q, 5_000, 3).unwrap().value;
                    let m = mc_mean(300, 0.3, 10_000, 3, |x| (-(x as f64) * 0.1).exp()).unwrap();
                    (t, m.mean)
                })
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn prefix_of_longer_run() {
        // trial i uses stream i, so the counts of a short run are a prefix of a longer one
        let q = TailQuery::new(40, 0.3, 12.0).unwrap();
        let key = derive_key(11);
        let s = BinomialSampler::new(40, 0.3, SamplerKind::Auto).unwrap();
        let hits = |n: u64| (0..n).filter(|&i| s.sample(&mut trial_rng(key, i)) < 12).count() as f64;
        assert_eq!(mc_tail(&q, 1000, 11).unwrap().value, hits(1000) / 1000.0);
        assert_eq!(mc_tail(&q, 3000, 11).unwrap().value, hits(3000) / 3000.0);
    }

    #[test]
    fn trivial_events_skip_sampling() {
        let q = TailQuery::new(10, 0.5, 0.0).unwrap();
        assert_eq!(mc_tail(&q, 10, 1).unwrap().value, 0.0);
        let q = TailQuery::new(10, 0.5, 11.0).unwrap();
        let e = mc_tail(&q, 10, 1).unwrap();
        assert_eq!((e.value, e.stderr), (1.0, Some(0.0)));
        assert!(mc_tail(&q, 0, 1).is_err());
    }

    #[test]
    fn auto_resolves_by_size() {
        let small = BinomialSampler::new(INVERSION_CUTOFF, 0.2, SamplerKind::Auto).unwrap();
        let large = BinomialSampler::new(INVERSION_CUTOFF + 1, 0.2, SamplerKind::Auto).unwrap();
        assert_eq!(small.kind(), SamplerKind::Inversion);
        assert_eq!(large.kind(), SamplerKind::Btpe);
    }

    #[test]
    fn every_sampler_matches_the_exact_law() {
        // chi-square over the full support against the exact pmf
        let (l, p, n) = (30u64, 0.2, 200_000u64);
        let key = derive_key(42);
        let mut pmf = vec![naive_binomial_cdf(l, p, 0)];
        for k in 1..=l {
            pmf.push(naive_binomial_cdf(l, p, k) - naive_binomial_cdf(l, p, k - 1));
        }
        for kind in [SamplerKind::Inversion, SamplerKind::BernoulliSum, SamplerKind::Btpe] {
            let s = BinomialSampler::new(l, p, kind).unwrap();
            let mut counts = vec![0u64; l as usize + 1];
            for i in 0..n {
                counts[s.sample(&mut trial_rng(key, i)) as usize] += 1;
            }
            // pool cells with expectation below 5
            let (mut chi2, mut df, mut pool_o, mut pool_e) = (0.0, 0usize, 0.0, 0.0);
            for (o, q) in counts.iter().zip(&pmf) {
                pool_o += *o as f64;
                pool_e += q * n as f64;
                if pool_e >= 5.0 {
                    chi2 += (pool_o - pool_e).powi(2) / pool_e;
                    df += 1;
                    pool_o = 0.0;
                    pool_e = 0.0;
                }
            }
            chi2 += if pool_e > 0.0 { (pool_o - pool_e).powi(2) / pool_e } else { 0.0 };
            // chi-square 0.999 quantile is below df + 4.3 sqrt(2 df) + 10 for df in this range
            let limit = df as f64 + 4.3 * (2.0 * df as f64).sqrt() + 10.0;
            assert!(chi2 < limit, "{kind:?}: chi2 {chi2} over {df} cells");
        }
    }

    #[test]
    fn tail_within_four_sigma_of_exact() {
        for &(l, p, c) in &[(100u64, 0.05, 2.0), (2_000, 0.01, 15.0), (60_000, 0.001, 55.0)] {
            let q = TailQuery::new(l, p, c).unwrap();
            let exact = exact_binomial_tail(&q).value;
            let mc = mc_tail(&q, 100_000, 9).unwrap();
            let sd = (exact * (1.0 - exact) / 100_000.0).sqrt();
            assert!((mc.value - exact).abs() < 4.0 * sd, "l={l}: {} vs {exact}", mc.value);
        }
    }

    #[test]
    fn mean_of_count() {
        let m = mc_mean(500, 0.1, 50_000, 5, |x| x as f64).unwrap();
        assert!((m.mean - 50.0).abs() < 4.0 * m.stderr);
        // sd of Binomial(500, 0.1) is sqrt(45)
        assert!((m.stderr - (45.0f64 / 50_000.0).sqrt()).abs() < 0.05 * m.stderr);
    }
}
