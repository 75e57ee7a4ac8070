//! Seeded Monte Carlo cross-checks for the analytic results: capability,
//! rule operating characteristics, interval coverage, and plug-in content.
//!
//! Reproducibility is a hard requirement here, including across thread
//! counts. Work is split into fixed-size chunks; chunk `i` always draws
//! from its own counter-based RNG stream derived from `(seed, stream, i)`,
//! and partial results are reduced in chunk order. The estimate is
//! therefore a pure function of `(seed, stream, n)`, whatever the rayon
//! pool looks like.

use crate::capability::prob_within;
use crate::distributions::normal_cdf;
use crate::runrules::Rule;
use crate::tolerance::{beta_expectation_interval, IntervalMethod};
use crate::{Error, Probability, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Draws per RNG chunk. Fixed: changing it would change every estimate.
const CHUNK: u64 = 1 << 14;

/// A Monte Carlo estimate with its binomial/empirical standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub n: u64,
    pub estimate: f64,
    pub se: f64,
}

/// RNG for one chunk: one shared seed, the caller's stream id in the top
/// half of the ChaCha stream word, the chunk index in the bottom half.
fn chunk_rng(seed: u64, stream: u64, chunk: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream((stream << 32) | chunk);
    rng
}

fn check_stream(stream: u64) -> Result<()> {
    if stream > u32::MAX as u64 {
        return Err(Error::Domain(format!(
            "stream id must fit in 32 bits, got {stream}"
        )));
    }
    Ok(())
}

fn check_draws(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("need at least one draw".into()));
    }
    if n > 1 << 45 {
        return Err(Error::TooLarge(format!(
            "{n} draws is beyond the supported range"
        )));
    }
    Ok(())
}

fn binomial_se(p_hat: f64, n: u64) -> f64 {
    (p_hat * (1.0 - p_hat) / n as f64).sqrt()
}

/// Splits `n` draws into chunk ranges and reduces `body(chunk_idx, len)`
/// outputs in chunk order.
fn map_chunks<T, F>(n: u64, body: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(n - c * CHUNK);
            body(c, len)
        })
        .collect()
}

/// Standard normal draw; ziggurat via `rand_distr`.
fn draw_normal(rng: &mut ChaCha12Rng) -> f64 {
    rng.sample::<f64, _>(rand_distr::StandardNormal)
}

/// Monte Carlo estimate of P(|bias + sigma Z| < lambda), the capability
/// integral, counting strict hits.
pub fn capability_mc(
    bias: f64,
    sigma: f64,
    lambda: f64,
    n: u64,
    seed: u64,
    stream: u64,
) -> Result<McEstimate> {
    // Validate via the analytic path so both sides agree on the domain.
    prob_within(bias, sigma, lambda)?;
    check_draws(n)?;
    check_stream(stream)?;

    let hit_counts = map_chunks(n, |c, len| {
        let mut rng = chunk_rng(seed, stream, c);
        let mut hits = 0u64;
        for _ in 0..len {
            let x = bias + sigma * draw_normal(&mut rng);
            if x.abs() < lambda {
                hits += 1;
            }
        }
        hits
    });
    let hits: u64 = hit_counts.iter().sum();
    let p_hat = hits as f64 / n as f64;
    Ok(McEstimate {
        n,
        estimate: p_hat,
        se: binomial_se(p_hat, n),
    })
}

/// Monte Carlo estimate of a rule's OC at per-run pass probability `p`,
/// simulating whole blocks (layout constraints included).
pub fn rule_oc_mc(rule: &Rule, p: f64, n: u64, seed: u64, stream: u64) -> Result<McEstimate> {
    rule.oc(p)?; // domain check
    check_draws(n)?;
    check_stream(stream)?;

    let k = rule.k();
    let m = rule.m() as usize;
    let constrained = rule.is_constrained();
    let pass_counts = map_chunks(n, |c, len| {
        let mut rng = chunk_rng(seed, stream, c);
        let mut passes = 0u64;
        let mut runs = vec![false; m];
        for _ in 0..len {
            for r in runs.iter_mut() {
                *r = rng.gen::<f64>() < p;
            }
            let count = runs.iter().filter(|&&r| r).count() as u32;
            let mut ok = count >= k;
            if ok && constrained {
                // layout groups are consecutive pairs
                ok = runs.chunks(2).all(|g| g.iter().any(|&r| r));
            }
            if ok {
                passes += 1;
            }
        }
        passes
    });
    let passes: u64 = pass_counts.iter().sum();
    let p_hat = passes as f64 / n as f64;
    Ok(McEstimate {
        n,
        estimate: p_hat,
        se: binomial_se(p_hat, n),
    })
}

/// True generating process for coverage studies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageConfig {
    pub bias: f64,
    pub sd_between: f64,
    pub sd_within: f64,
    pub n_series: usize,
    pub n_replicates: usize,
}

impl CoverageConfig {
    fn validate(&self) -> Result<()> {
        if !self.bias.is_finite() {
            return Err(Error::Domain(format!(
                "bias must be finite, got {}",
                self.bias
            )));
        }
        if !(self.sd_between.is_finite() && self.sd_between >= 0.0) {
            return Err(Error::Domain(format!(
                "between-series sd must be nonnegative and finite, got {}",
                self.sd_between
            )));
        }
        if !(self.sd_within.is_finite() && self.sd_within > 0.0) {
            return Err(Error::Domain(format!(
                "within-series sd must be positive and finite, got {}",
                self.sd_within
            )));
        }
        if self.n_series < 2 || self.n_replicates < 2 {
            return Err(Error::Domain(format!(
                "coverage design needs >= 2 series and >= 2 replicates, got {} x {}",
                self.n_series, self.n_replicates
            )));
        }
        Ok(())
    }

    /// Marginal sd of a single observation.
    fn sd_marginal(&self) -> f64 {
        (self.sd_between * self.sd_between + self.sd_within * self.sd_within).sqrt()
    }
}

/// Result of a coverage study: the mean true content of the constructed
/// intervals, which a calibrated construction keeps near beta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageEstimate {
    pub n_sim: u64,
    /// Mean over simulations of the true probability content.
    pub mean_content: f64,
    /// Standard error of that mean.
    pub se: f64,
    /// Simulated datasets whose analysis failed (all replicate values
    /// identical, for example); excluded from the mean.
    pub n_degenerate: u64,
}

/// Simulates `n_sim` datasets from `config`, builds the beta-expectation
/// interval on each, and averages the interval's exact content under the
/// true marginal law Normal(bias, sd_between^2 + sd_within^2).
pub fn coverage_mc(
    config: CoverageConfig,
    method: IntervalMethod,
    beta: Probability,
    n_sim: u64,
    seed: u64,
    stream: u64,
) -> Result<CoverageEstimate> {
    config.validate()?;
    check_draws(n_sim)?;
    check_stream(stream)?;
    let sd_m = config.sd_marginal();

    let partials = map_chunks(n_sim, |c, len| {
        let mut rng = chunk_rng(seed, stream, c);
        let mut groups = vec![vec![0.0f64; config.n_replicates]; config.n_series];
        let mut sum = 0.0f64;
        let mut sum_sq = 0.0f64;
        let mut degenerate = 0u64;
        for _ in 0..len {
            for series in groups.iter_mut() {
                let u = config.sd_between * draw_normal(&mut rng);
                for value in series.iter_mut() {
                    *value = config.bias + u + config.sd_within * draw_normal(&mut rng);
                }
            }
            match beta_expectation_interval(&groups, method, beta) {
                Ok(interval) => {
                    let content = normal_cdf((interval.upper - config.bias) / sd_m)
                        - normal_cdf((interval.lower - config.bias) / sd_m);
                    sum += content;
                    sum_sq += content * content;
                }
                Err(_) => degenerate += 1,
            }
        }
        (sum, sum_sq, degenerate)
    });

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut n_degenerate = 0u64;
    for (s, sq, d) in partials {
        sum += s;
        sum_sq += sq;
        n_degenerate += d;
    }
    let n_eff = n_sim - n_degenerate;
    if n_eff == 0 {
        return Err(Error::DegenerateVariance(
            "every simulated dataset was degenerate".into(),
        ));
    }
    let mean = sum / n_eff as f64;
    let var = (sum_sq / n_eff as f64 - mean * mean).max(0.0);
    Ok(CoverageEstimate {
        n_sim,
        mean_content: mean,
        se: (var / n_eff as f64).sqrt(),
        n_degenerate,
    })
}

/// Content of the acceptance window estimated by plugging point estimates
/// into the normal law, optionally alongside the exact content under known
/// true parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContentEstimate {
    /// Phi((lambda - mu_hat)/sigma_hat) - Phi((-lambda - mu_hat)/sigma_hat).
    pub plug_in: f64,
    /// Same quantity under the true (bias, sigma), when provided.
    pub true_content: Option<f64>,
}

/// Plug-in content of `(-lambda, lambda)` for estimates `(mu_hat,
/// sigma_hat)`. A zero estimated sd carries no distributional information
/// and errors rather than reporting a hard 0/1.
pub fn plug_in_content(
    mu_hat: f64,
    sigma_hat: f64,
    lambda: f64,
    truth: Option<(f64, f64)>,
) -> Result<ContentEstimate> {
    if !(sigma_hat.is_finite() && sigma_hat > 0.0) {
        return Err(Error::DegenerateVariance(format!(
            "plug-in content needs a positive estimated sd, got {sigma_hat}"
        )));
    }
    let plug_in = prob_within(mu_hat, sigma_hat, lambda)?.value();
    let true_content = match truth {
        None => None,
        Some((bias, sigma)) => Some(prob_within(bias, sigma, lambda)?.value()),
    };
    Ok(ContentEstimate {
        plug_in,
        true_content,
    })
}
