//! Capability of a measurement procedure against symmetric acceptance
//! limits: the probability that a single future result lands within
//! `+/- lambda` of the target, given the procedure's bias and standard
//! deviation, and the boundary of the region where that probability
//! reaches a required level.

use crate::distributions::normal_cdf;
use crate::roots::bisect_bracket;
use crate::{Error, Probability, Result};

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain(format!(
            "acceptance half-width lambda must be a positive finite real, got {lambda}"
        )));
    }
    Ok(())
}

/// P(|X - target| < lambda) for X ~ Normal(target + bias, sigma^2).
///
/// `sigma = 0` is handled analytically: the mass is 1, 1/2, or 0 according
/// to whether |bias| is below, at, or above `lambda`. The result is an
/// exactly even function of `bias`.
pub fn prob_within(bias: f64, sigma: f64, lambda: f64) -> Result<Probability> {
    check_lambda(lambda)?;
    if !bias.is_finite() {
        return Err(Error::Domain(format!("bias must be finite, got {bias}")));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::Domain(format!(
            "sigma must be a nonnegative finite real, got {sigma}"
        )));
    }

    let b = bias.abs();
    if sigma == 0.0 {
        let p = if b < lambda {
            1.0
        } else if b == lambda {
            0.5
        } else {
            0.0
        };
        return Ok(Probability::from_clamped(p));
    }

    // 1 - (mass above the upper limit) - (mass below the lower limit);
    // both terms are right/left tails evaluated without cancellation.
    let upper_tail = normal_cdf(-(lambda - b) / sigma);
    let lower_tail = normal_cdf(-(lambda + b) / sigma);
    Ok(Probability::from_clamped(1.0 - upper_tail - lower_tail))
}

/// Whether the procedure meets the capability requirement `beta`;
/// exact ties count as capable.
pub fn is_capable(bias: f64, sigma: f64, lambda: f64, beta: Probability) -> Result<bool> {
    Ok(prob_within(bias, sigma, lambda)?.value() >= beta.value())
}

/// The standard deviation at which capability exactly equals `beta` for the
/// given bias, i.e. the boundary of the acceptance region in the
/// (bias, sigma) plane.
///
/// Returns `None` when `|bias| >= lambda`: past the limits no spread,
/// however small, attains a capability above 1/2, so the boundary does not
/// exist there. `beta` must lie strictly between 0 and 1. The returned
/// sigma satisfies |prob_within - beta| <= 1e-10; at zero bias it agrees
/// with the closed form lambda / z((1 + beta) / 2).
pub fn region_boundary_sigma(bias: f64, lambda: f64, beta: Probability) -> Result<Option<f64>> {
    check_lambda(lambda)?;
    if !bias.is_finite() {
        return Err(Error::Domain(format!("bias must be finite, got {bias}")));
    }
    let beta = beta.value();
    if beta <= 0.0 || beta >= 1.0 {
        return Err(Error::Domain(format!(
            "boundary requires a target capability strictly between 0 and 1, got {beta}"
        )));
    }
    if bias.abs() >= lambda {
        return Ok(None);
    }

    // prob_within is strictly decreasing in sigma, from 1 at sigma = 0
    // toward 0: bracket the crossing, then bisect to fp resolution.
    let f = |sigma: f64| {
        prob_within(bias, sigma, lambda)
            .expect("inputs validated")
            .value()
            - beta
    };
    let mut lo = 0.0_f64;
    let mut hi = lambda;
    while f(hi) >= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Domain(
                "capability boundary did not bracket; inputs out of range".into(),
            ));
        }
    }
    let (blo, bhi) = bisect_bracket(lo, hi, f64::EPSILON * hi.max(1.0), 1.0, f);
    let sigma = 0.5 * (blo + bhi);
    debug_assert!(
        (prob_within(bias, sigma, lambda)?.value() - beta).abs() <= 1e-10,
        "boundary residual out of contract"
    );
    Ok(Some(sigma))
}
