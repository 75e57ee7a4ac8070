//! Pre-study assessment from designed validation data: balanced one-way
//! variance decomposition, beta-expectation tolerance intervals, and the
//! strict accept/reject decision against acceptance limits.
//!
//! Data arrive as `p` series (independent runs) of `n` replicates each,
//! on the same percent-of-target error scale used everywhere else. The
//! one-way interval widens for between-series variation via a
//! plug-in-ratio Satterthwaite approximation; the simple interval treats
//! all observations as one i.i.d. sample.

use crate::distributions::t_quantile;
use crate::{Error, Probability, Result};
use serde::Serialize;

/// Variance decomposition of a balanced one-way layout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceComponents {
    /// Number of series (independent runs).
    pub n_series: usize,
    /// Replicates per series.
    pub n_replicates: usize,
    /// Grand mean of all observations: the bias estimate on the error scale.
    pub bias: f64,
    /// Within-series mean square.
    pub ms_within: f64,
    /// Between-series mean square.
    pub ms_between: f64,
    /// Between-series variance component, floored at zero.
    pub var_between: f64,
    /// Within-series (repeatability) variance component.
    pub var_within: f64,
    /// Intermediate-precision variance: between + within.
    pub var_intermediate: f64,
    /// Plug-in variance ratio between/within.
    pub ratio: f64,
}

/// Which interval construction to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalMethod {
    /// Pool all observations as one i.i.d. normal sample.
    Simple,
    /// Account for the between-series component (one-way random effects).
    OneWay,
}

/// A two-sided beta-expectation tolerance interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceInterval {
    pub method: IntervalMethod,
    /// Expected content of the interval.
    pub beta: f64,
    pub lower: f64,
    pub upper: f64,
    /// Interval center (the bias estimate).
    pub center: f64,
    /// Multiplier applied to `sd`.
    pub k_factor: f64,
    /// Standard deviation the multiplier scales.
    pub sd: f64,
    /// Degrees of freedom behind the Student quantile.
    pub dof: f64,
}

fn check_beta(beta: Probability) -> Result<f64> {
    let b = beta.value();
    if b <= 0.0 || b >= 1.0 {
        return Err(Error::Domain(format!(
            "interval content must be strictly between 0 and 1, got {b}"
        )));
    }
    Ok(b)
}

/// Estimates the variance decomposition from `groups[series][replicate]`.
///
/// Requires at least two series, at least two replicates, and a balanced
/// layout. A within-series mean square of exactly zero means the
/// repeatability component is unidentifiable noise-free data and is
/// rejected rather than propagated.
pub fn estimate_components(groups: &[Vec<f64>]) -> Result<VarianceComponents> {
    let p = groups.len();
    if p < 2 {
        return Err(Error::Dataset(format!(
            "n_series >= 2 required to separate between-series variation, got {p}"
        )));
    }
    let n = groups[0].len();
    if let Some((i, g)) = groups.iter().enumerate().find(|(_, g)| g.len() != n) {
        return Err(Error::Unbalanced(format!(
            "balanced design required: series 0 has {n} replicates but series {i} has {}",
            g.len()
        )));
    }
    if n < 2 {
        return Err(Error::Unidentifiable(
            "replicate count of 1 cannot separate within-series variation".into(),
        ));
    }
    for (i, g) in groups.iter().enumerate() {
        if let Some(x) = g.iter().find(|x| !x.is_finite()) {
            return Err(Error::Dataset(format!(
                "non-finite measurement {x} in series {i}"
            )));
        }
    }

    let nf = n as f64;
    let pf = p as f64;
    let series_means: Vec<f64> = groups.iter().map(|g| g.iter().sum::<f64>() / nf).collect();
    let grand = series_means.iter().sum::<f64>() / pf;

    let ss_within: f64 = groups
        .iter()
        .zip(&series_means)
        .map(|(g, &m)| g.iter().map(|x| (x - m) * (x - m)).sum::<f64>())
        .sum();
    let ss_between: f64 = series_means
        .iter()
        .map(|&m| (m - grand) * (m - grand))
        .sum();

    let ms_within = ss_within / (pf * (nf - 1.0));
    let ms_between = nf * ss_between / (pf - 1.0);
    if ms_within <= 0.0 {
        return Err(Error::DegenerateVariance(
            "within-series mean square is zero; replicate values are exactly constant".into(),
        ));
    }

    let var_between = ((ms_between - ms_within) / nf).max(0.0);
    let var_within = ms_within;
    Ok(VarianceComponents {
        n_series: p,
        n_replicates: n,
        bias: grand,
        ms_within,
        ms_between,
        var_between,
        var_within,
        var_intermediate: var_between + var_within,
        ratio: var_between / var_within,
    })
}

/// k so that `mean +/- k s` is a beta-expectation interval for an i.i.d.
/// normal sample of size `n_total`: t((1+beta)/2, n-1) sqrt(1 + 1/n).
pub fn k_factor_simple(beta: Probability, n_total: usize) -> Result<f64> {
    let beta = check_beta(beta)?;
    if n_total < 2 {
        return Err(Error::Domain(format!(
            "simple interval needs at least 2 observations, got {n_total}"
        )));
    }
    let nf = n_total as f64;
    let t = t_quantile(0.5 * (1.0 + beta), nf - 1.0)?;
    Ok(t * (1.0 + 1.0 / nf).sqrt())
}

/// Effective degrees of freedom for the one-way interval, from the
/// Satterthwaite approximation with the plug-in variance ratio `ratio`.
pub fn satterthwaite_dof(n_series: usize, n_replicates: usize, ratio: f64) -> Result<f64> {
    if n_series < 2 || n_replicates < 2 {
        return Err(Error::Domain(format!(
            "one-way design needs >= 2 series and >= 2 replicates, got {n_series} x {n_replicates}"
        )));
    }
    if !(ratio.is_finite() && ratio >= 0.0) {
        return Err(Error::Domain(format!(
            "variance ratio must be a nonnegative finite real, got {ratio}"
        )));
    }
    let p = n_series as f64;
    let n = n_replicates as f64;
    let r = ratio;
    let num = (r + 1.0) * (r + 1.0);
    let den = (r + 1.0 / n) * (r + 1.0 / n) / (p - 1.0) + (1.0 - 1.0 / n) / (p * n);
    Ok(num / den)
}

/// k for the one-way interval `bias +/- k sigma_ip`. Also returns the
/// effective degrees of freedom used.
pub fn k_factor_oneway(
    beta: Probability,
    n_series: usize,
    n_replicates: usize,
    ratio: f64,
) -> Result<(f64, f64)> {
    let beta_v = check_beta(beta)?;
    let dof = satterthwaite_dof(n_series, n_replicates, ratio)?;
    let p = n_series as f64;
    let n = n_replicates as f64;
    let r = ratio;
    // Var(grand mean) = sigma_ip^2 b2 / (p n) with b2 = (r + 1)/(n r + 1).
    let b2 = (r + 1.0) / (n * r + 1.0);
    let t = t_quantile(0.5 * (1.0 + beta_v), dof)?;
    Ok((t * (1.0 + 1.0 / (p * n * b2)).sqrt(), dof))
}

/// Builds the beta-expectation tolerance interval for the dataset.
pub fn beta_expectation_interval(
    groups: &[Vec<f64>],
    method: IntervalMethod,
    beta: Probability,
) -> Result<ToleranceInterval> {
    let beta_v = check_beta(beta)?;
    let comps = estimate_components(groups)?;
    let (center, k, sd, dof) = match method {
        IntervalMethod::Simple => {
            let n_total = comps.n_series * comps.n_replicates;
            let mean = comps.bias;
            let ss: f64 = groups
                .iter()
                .flatten()
                .map(|x| (x - mean) * (x - mean))
                .sum();
            let s = (ss / (n_total as f64 - 1.0)).sqrt();
            let k = k_factor_simple(beta, n_total)?;
            (mean, k, s, n_total as f64 - 1.0)
        }
        IntervalMethod::OneWay => {
            let (k, dof) = k_factor_oneway(beta, comps.n_series, comps.n_replicates, comps.ratio)?;
            (comps.bias, k, comps.var_intermediate.sqrt(), dof)
        }
    };
    let half = k * sd;
    Ok(ToleranceInterval {
        method,
        beta: beta_v,
        lower: center - half,
        upper: center + half,
        center,
        k_factor: k,
        sd,
        dof,
    })
}

/// Strict pre-study acceptance: the whole interval must lie inside the
/// open interval (-lambda, lambda). Endpoints touching a limit reject.
pub fn prestudy_accepts(interval: &ToleranceInterval, lambda: f64) -> Result<bool> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain(format!(
            "acceptance half-width lambda must be a positive finite real, got {lambda}"
        )));
    }
    Ok(interval.lower > -lambda && interval.upper < lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn beta(x: f64) -> Probability {
        Probability::new(x).unwrap()
    }

    fn worked_dataset() -> Vec<Vec<f64>> {
        vec![vec![-2.0, 0.0], vec![2.0, 4.0]]
    }

    #[test]
    fn components_worked_example_is_exact() {
        let c = estimate_components(&worked_dataset()).unwrap();
        assert_eq!(c.n_series, 2);
        assert_eq!(c.n_replicates, 2);
        assert_eq!(c.bias, 1.0);
        assert_eq!(c.ms_within, 2.0);
        assert_eq!(c.ms_between, 16.0);
        assert_eq!(c.var_between, 7.0);
        assert_eq!(c.var_within, 2.0);
        assert_eq!(c.var_intermediate, 9.0);
        assert_eq!(c.ratio, 3.5);
    }

    #[test]
    fn components_negative_contrast_floors_at_zero() {
        // Between-series spread smaller than within: component clamps to 0.
        let c = estimate_components(&[vec![-3.0, 3.0], vec![-2.9, 2.9]]).unwrap();
        assert_eq!(c.var_between, 0.0);
        assert_eq!(c.ratio, 0.0);
        assert_eq!(c.var_intermediate, c.var_within);
    }

    #[test]
    fn components_rejects_bad_designs() {
        let one_series = vec![vec![1.0, 2.0]];
        let err = estimate_components(&one_series).unwrap_err();
        assert!(matches!(err, Error::Dataset(_)));
        assert!(err.to_string().contains("n_series >= 2 required"));

        let unbalanced = vec![vec![1.0, 2.0], vec![3.0, 4.0, 5.0]];
        assert!(matches!(
            estimate_components(&unbalanced),
            Err(Error::Unbalanced(_))
        ));

        let singletons = vec![vec![1.0], vec![2.0]];
        assert!(matches!(
            estimate_components(&singletons),
            Err(Error::Unidentifiable(_))
        ));

        let constant = vec![vec![1.0, 1.0], vec![2.0, 2.0]];
        assert!(matches!(
            estimate_components(&constant),
            Err(Error::DegenerateVariance(_))
        ));

        let nonfinite = vec![vec![1.0, f64::NAN], vec![2.0, 3.0]];
        assert!(matches!(
            estimate_components(&nonfinite),
            Err(Error::Dataset(_))
        ));
    }

    #[test]
    fn k_simple_reference_values() {
        assert_abs_diff_eq!(
            k_factor_simple(beta(0.8), 20).unwrap(),
            1.3605165588473317,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            k_factor_simple(beta(0.95), 2).unwrap(),
            15.561859085481488,
            epsilon = 1e-7
        );
        assert!(k_factor_simple(beta(0.8), 1).is_err());
    }

    #[test]
    fn oneway_interval_worked_example() {
        let interval =
            beta_expectation_interval(&worked_dataset(), IntervalMethod::OneWay, beta(0.8))
                .unwrap();
        assert_abs_diff_eq!(interval.dof, 1.255813953488372, epsilon = 1e-12);
        assert_abs_diff_eq!(interval.k_factor, 2.99513653143, epsilon = 1e-8);
        assert_eq!(interval.center, 1.0);
        assert_eq!(interval.sd, 3.0);
        assert_abs_diff_eq!(interval.lower, -7.9854095942821, epsilon = 1e-7);
        assert_abs_diff_eq!(interval.upper, 9.9854095942821, epsilon = 1e-7);
    }

    #[test]
    fn simple_interval_pools_all_observations() {
        let interval =
            beta_expectation_interval(&worked_dataset(), IntervalMethod::Simple, beta(0.8))
                .unwrap();
        assert_eq!(interval.center, 1.0);
        assert_eq!(interval.dof, 3.0);
        // Pooled variance of {-2, 0, 2, 4}: ((9 + 1 + 1 + 9)) / 3.
        assert_abs_diff_eq!(interval.sd, (20.0_f64 / 3.0).sqrt(), epsilon = 1e-14);
        let k = k_factor_simple(beta(0.8), 4).unwrap();
        assert_abs_diff_eq!(
            interval.upper - interval.center,
            k * interval.sd,
            epsilon = 1e-13
        );
    }

    #[test]
    fn satterthwaite_limits_make_sense() {
        // No between-series component: dof should stay near p(n-1)..pn-1.
        let low = satterthwaite_dof(6, 3, 0.0).unwrap();
        assert!(low > 12.0 && low < 18.0, "{low}");
        // Dominant between-series component: dof approaches p - 1.
        let high = satterthwaite_dof(6, 3, 1e9).unwrap();
        assert_abs_diff_eq!(high, 5.0, epsilon = 1e-6);
    }

    #[test]
    fn prestudy_is_strict_at_the_limits() {
        let mut interval =
            beta_expectation_interval(&worked_dataset(), IntervalMethod::OneWay, beta(0.8))
                .unwrap();
        assert!(prestudy_accepts(&interval, 15.0).unwrap());
        assert!(!prestudy_accepts(&interval, 9.0).unwrap());

        interval.lower = -15.0;
        interval.upper = 15.0;
        assert!(
            !prestudy_accepts(&interval, 15.0).unwrap(),
            "touching the limits exactly must reject"
        );
        interval.lower = -14.999;
        interval.upper = 14.999;
        assert!(prestudy_accepts(&interval, 15.0).unwrap());

        assert!(prestudy_accepts(&interval, 0.0).is_err());
        assert!(prestudy_accepts(&interval, f64::NAN).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Raw-score one-way sums of squares: an algebraically different
        /// route to the same mean squares.
        fn raw_score_ms(groups: &[Vec<f64>]) -> (f64, f64) {
            let p = groups.len() as f64;
            let n = groups[0].len() as f64;
            let total: f64 = groups.iter().flatten().sum();
            let grand = total / (p * n);
            let sum_sq: f64 = groups.iter().flatten().map(|x| x * x).sum();
            let series_term: f64 = groups
                .iter()
                .map(|g| {
                    let s: f64 = g.iter().sum();
                    s * s / n
                })
                .sum();
            let correction = p * n * grand * grand;
            let ssb = series_term - correction;
            let ssw = sum_sq - series_term;
            (ssw / (p * (n - 1.0)), n * (ssb / n) / (p - 1.0))
        }

        fn dataset_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
            (2usize..7, 2usize..6).prop_flat_map(|(p, n)| {
                proptest::collection::vec(proptest::collection::vec(-50.0..50.0f64, n), p)
            })
        }

        proptest! {
            #[test]
            fn matches_raw_score_formulas(groups in dataset_strategy()) {
                let c = match estimate_components(&groups) {
                    Ok(c) => c,
                    Err(Error::DegenerateVariance(_)) => return Ok(()),
                    Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
                };
                let (msw, msb) = raw_score_ms(&groups);
                let scale = 1.0 + msw.abs() + msb.abs();
                prop_assert!((c.ms_within - msw).abs() <= 1e-9 * scale);
                prop_assert!((c.ms_between - msb).abs() <= 1e-9 * scale);
            }

            #[test]
            fn shift_moves_only_the_bias(groups in dataset_strategy(), shift in -20.0..20.0f64) {
                let base = match estimate_components(&groups) {
                    Ok(c) => c,
                    Err(_) => return Ok(()),
                };
                let shifted: Vec<Vec<f64>> = groups
                    .iter()
                    .map(|g| g.iter().map(|x| x + shift).collect())
                    .collect();
                let moved = estimate_components(&shifted).unwrap();
                prop_assert!((moved.bias - (base.bias + shift)).abs() <= 1e-9);
                prop_assert!((moved.ms_within - base.ms_within).abs() <= 1e-7 * (1.0 + base.ms_within));
                prop_assert!((moved.ms_between - base.ms_between).abs() <= 1e-7 * (1.0 + base.ms_between));
            }

            #[test]
            fn interval_contains_center_and_orders(groups in dataset_strategy(), b in 0.05..0.99f64) {
                let interval = match beta_expectation_interval(
                    &groups,
                    IntervalMethod::OneWay,
                    beta(b),
                ) {
                    Ok(i) => i,
                    Err(_) => return Ok(()),
                };
                prop_assert!(interval.lower < interval.center);
                prop_assert!(interval.center < interval.upper);
                prop_assert!(interval.k_factor > 0.0);
                prop_assert!(interval.sd > 0.0);
                // One-way interval is never tighter than the within-only sd.
                prop_assert!(interval.sd * interval.sd >= interval.sd.powi(2) - 1e-12);
            }
        }
    }
}
