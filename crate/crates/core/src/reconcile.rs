//! Reconciliation of the two quality languages: what a run rule demands of
//! the long-run pass probability (consumer protection), and what the
//! pre-study assessment promises about it. The bridge is the required
//! per-run quality: the smallest pass probability the rule accepts with at
//! least the protection level `gamma`.

use crate::runrules::Rule;
use crate::{Error, Probability, Result};
use serde::Serialize;

/// The per-run quality requirement implied by a rule at protection level
/// `gamma`, before and after optional rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RequiredBeta {
    /// Protection level the requirement was derived for.
    pub gamma: f64,
    /// Exact OC inversion result.
    pub raw: f64,
    /// `raw` rounded up to the reporting granularity, when one was given.
    pub rounded: Option<f64>,
    /// The requirement downstream verdicts use: `rounded` if present,
    /// otherwise `raw`.
    pub effective: f64,
}

/// Rounds `x` up to an integer multiple of `granularity`, tolerating
/// values already on the grid to within a relative 1e-9 (so a requirement
/// that is analytically a round number is not pushed a full step up by
/// floating-point fuzz).
pub fn round_up(x: f64, granularity: f64) -> Result<f64> {
    if !(granularity.is_finite() && granularity > 0.0 && granularity < 1.0) {
        return Err(Error::Domain(format!(
            "granularity must lie strictly between 0 and 1, got {granularity}"
        )));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!(
            "cannot round a non-positive requirement, got {x}"
        )));
    }
    let ratio = x / granularity;
    let nearest = ratio.round();
    let steps = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        ratio.ceil()
    };
    let rounded = steps * granularity;
    if rounded >= 1.0 {
        return Err(Error::Domain(format!(
            "requirement {x} rounds to {rounded}; granularity {granularity} is too coarse \
             for a probability target below 1"
        )));
    }
    Ok(rounded)
}

/// Inverts the rule's OC at `gamma` and applies the optional rounding.
///
/// Rounding never weakens the requirement (it always rounds up), so the
/// effective value keeps the guarantee OC(effective) >= gamma.
pub fn required_beta(
    rule: &Rule,
    gamma: Probability,
    granularity: Option<f64>,
) -> Result<RequiredBeta> {
    let raw = rule.invert_oc(gamma)?.value();
    let rounded = granularity.map(|g| round_up(raw, g)).transpose()?;
    let effective = rounded.unwrap_or(raw);
    debug_assert!(rule.oc(effective)?.value() >= gamma.value());
    Ok(RequiredBeta {
        gamma: gamma.value(),
        raw,
        rounded,
        effective,
    })
}

/// Resolves the acceptance half-width to use: the rule's own, unless the
/// caller supplies one, which must then agree with the rule exactly.
pub fn resolve_lambda(rule: &Rule, lambda: Option<f64>) -> Result<f64> {
    match lambda {
        None => Ok(rule.lambda()),
        Some(l) if l == rule.lambda() => Ok(l),
        Some(l) => Err(Error::LambdaMismatch {
            rule_lambda: rule.lambda(),
            limits_lambda: l,
        }),
    }
}

/// One row of the acceptance-risk table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskRow {
    /// Per-run pass probability the row describes.
    pub p: f64,
    /// Probability the rule accepts a block at this quality.
    pub oc: f64,
    /// Acceptance probability when quality falls short of the requirement.
    pub consumer_risk: Option<f64>,
    /// Rejection probability when quality meets the requirement.
    pub producer_risk: Option<f64>,
}

/// Tabulates acceptance probability and the associated risk over a
/// strictly increasing grid of per-run qualities, classified against the
/// requirement `required`.
pub fn risk_table(rule: &Rule, grid: &[f64], required: f64) -> Result<Vec<RiskRow>> {
    if !(required.is_finite() && required > 0.0 && required < 1.0) {
        return Err(Error::Domain(format!(
            "risk classification needs a requirement strictly between 0 and 1, got {required}"
        )));
    }
    let curve = rule.oc_curve(grid)?;
    Ok(curve
        .into_iter()
        .map(|(p, oc)| {
            let oc = oc.value();
            let (consumer, producer) = if p < required {
                (Some(oc), None)
            } else {
                (None, Some(1.0 - oc))
            };
            RiskRow {
                p,
                oc,
                consumer_risk: consumer,
                producer_risk: producer,
            }
        })
        .collect())
}
