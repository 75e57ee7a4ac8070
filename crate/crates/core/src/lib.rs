//! Decision-rule toolkit for quantitative analytical methods.
//!
//! Three views of "the method is fit for routine use" live here, plus the
//! glue that makes them agree:
//!
//! * [`capability`]: probability that a single measurement error falls inside
//!   symmetric acceptance limits, and the bias/precision region where that
//!   probability clears a floor.
//! * [`tolerance`]: beta-expectation tolerance intervals estimated from a
//!   balanced validation experiment (series x replicates), and the pre-study
//!   accept/reject decision against the limits.
//! * [`runrules`]: operating characteristics of k-of-m QC acceptance rules,
//!   including the constrained variant where a concentration level fails the
//!   run when both of its samples are outside the limits.
//! * [`reconcile`]: inverts a rule's OC curve to the per-sample probability
//!   required for a target run pass rate, then re-evaluates capability or a
//!   validation dataset at that requirement.
//! * [`mcoracle`]: seeded, reproducible Monte Carlo to cross-check the
//!   closed forms and the tolerance-interval coverage property.
//! * [`distributions`]: self-contained numeric kernels the rest builds on.
//!
//! All error quantities are expressed in percent of the target value, so an
//! acceptance half-width of 15 means +/-15%.

pub mod capability;
pub mod cli;
pub mod distributions;
mod error;
pub mod mcoracle;
pub mod reconcile;
mod roots;
pub mod runrules;
pub mod tolerance;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Probability validated to lie in `[0, 1]` and be finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(Error::Domain(format!(
                "probability must lie in [0, 1], got {value}"
            )));
        }
        Ok(Self(value))
    }

    /// Wraps a computed value that is in [0, 1] up to rounding noise.
    pub(crate) fn from_clamped(value: f64) -> Self {
        debug_assert!(value.is_finite(), "probability must be finite");
        debug_assert!(
            (-1e-9..=1.0 + 1e-9).contains(&value),
            "value {value} is not a rounded probability"
        );
        Self(value.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl std::fmt::Display for Probability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_accepts_unit_interval() {
        assert_eq!(Probability::new(0.0).unwrap().value(), 0.0);
        assert_eq!(Probability::new(1.0).unwrap().value(), 1.0);
        assert_eq!(Probability::new(0.5).unwrap().value(), 0.5);
    }

    #[test]
    fn probability_rejects_outside_and_non_finite() {
        assert!(Probability::new(-0.1).is_err());
        assert!(Probability::new(1.1).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert!(Probability::new(f64::INFINITY).is_err());
    }
}
