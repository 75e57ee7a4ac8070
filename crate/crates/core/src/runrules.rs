//! k-of-m run rules and their operating characteristic.
//!
//! A rule `k-m-lambda` declares a block of `m` runs accepted when at least
//! `k` individual runs land within `+/- lambda` of target. The constrained
//! variant layers a layout requirement on top: runs come in groups of two,
//! and no group may fail entirely, whatever the overall count says.
//!
//! The operating characteristic (OC) maps the per-run pass probability to
//! the block acceptance probability. It is strictly monotone for
//! non-degenerate rules, which is what makes inversion well defined.

use crate::distributions::binom_tail_geq;
use crate::roots::bisect_bracket;
use crate::{Error, Probability, Result};
use std::fmt;
use std::str::FromStr;

/// Largest supported block size; keeps exhaustive verification tractable.
pub const MAX_RUNS: u32 = 20;

const GRAMMAR: &str = "k-m-lambda[:constrained[g,g,...]]";

/// A parsed acceptance rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    k: u32,
    m: u32,
    lambda: f64,
    groups: Option<Vec<u32>>,
}

impl Rule {
    /// Unconstrained `k`-of-`m` rule with half-width `lambda`.
    pub fn new(k: u32, m: u32, lambda: f64) -> Result<Self> {
        Self::build(k, m, lambda, None)
    }

    /// Constrained variant: `groups` lays the `m` runs out in consecutive
    /// groups that must each keep at least one passing run. Every group
    /// must have size exactly 2 and the sizes must sum to `m`.
    pub fn new_constrained(k: u32, m: u32, lambda: f64, groups: Vec<u32>) -> Result<Self> {
        Self::build(k, m, lambda, Some(groups))
    }

    fn build(k: u32, m: u32, lambda: f64, groups: Option<Vec<u32>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidRule("m must be at least 1".into()));
        }
        if m > MAX_RUNS {
            return Err(Error::TooLarge(format!(
                "rules support at most {MAX_RUNS} runs per block, got m = {m}"
            )));
        }
        if k == 0 {
            return Err(Error::InvalidRule("k must be at least 1".into()));
        }
        if k > m {
            return Err(Error::InvalidRule(format!(
                "k must not exceed m, got {k}-{m}"
            )));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidRule(format!(
                "lambda must be a positive finite real, got {lambda}"
            )));
        }
        if let Some(ref g) = groups {
            if g.is_empty() {
                return Err(Error::InvalidRule(
                    "constrained layout needs at least one group".into(),
                ));
            }
            if let Some(bad) = g.iter().find(|&&s| s != 2) {
                return Err(Error::InvalidRule(format!(
                    "constrained layout requires every group to have size 2, got {bad}"
                )));
            }
            let total: u32 = g.iter().sum();
            if total != m {
                return Err(Error::InvalidRule(format!(
                    "layout groups sum to {total} but the rule has m = {m} runs"
                )));
            }
        }
        Ok(Rule {
            k,
            m,
            lambda,
            groups,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_constrained(&self) -> bool {
        self.groups.is_some()
    }

    pub fn groups(&self) -> Option<&[u32]> {
        self.groups.as_deref()
    }

    /// Acceptance probability of the block when each run independently
    /// passes with probability `p`.
    pub fn oc(&self, p: f64) -> Result<Probability> {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "per-run pass probability must lie in [0, 1], got {p}"
            )));
        }
        let value = match self.groups {
            None => binom_tail_geq(self.k as u64, self.m as u64, p)?,
            Some(ref groups) => constrained_oc(self.k, groups.len() as u32, p),
        };
        Ok(Probability::from_clamped(value))
    }

    /// OC evaluated over a strictly increasing grid of pass probabilities.
    pub fn oc_curve(&self, grid: &[f64]) -> Result<Vec<(f64, Probability)>> {
        for (i, w) in grid.windows(2).enumerate() {
            // partial_cmp also rejects NaN entries, not just wrong order.
            if w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::UnsortedGrid { index: i + 1 });
            }
        }
        let mut out = Vec::with_capacity(grid.len());
        for &p in grid {
            out.push((p, self.oc(p)?));
        }
        // OC of a monotone pass criterion is nondecreasing in p.
        debug_assert!(out
            .windows(2)
            .all(|w| w[1].1.value() >= w[0].1.value() - 1e-12));
        Ok(out)
    }

    /// Smallest per-run pass probability whose OC reaches `target`.
    ///
    /// Solved by bisection on [0, 1] down to a bracket of width 1e-13; the
    /// upper end is returned, so `oc(result) >= target` always holds and
    /// the result overshoots the exact crossing by less than 1e-12.
    pub fn invert_oc(&self, target: Probability) -> Result<Probability> {
        let target = target.value();
        if target <= 0.0 || target >= 1.0 {
            return Err(Error::Domain(format!(
                "OC inversion requires a target strictly between 0 and 1, got {target}"
            )));
        }
        // oc(0) = 0 < target and oc(1) = 1 > target.
        let f = |p: f64| self.oc(p).expect("p within [0, 1]").value() - target;
        let (_, hi) = bisect_bracket(0.0, 1.0, 1e-13, -1.0, f);
        debug_assert!(self.oc(hi)?.value() >= target);
        Ok(Probability::from_clamped(hi))
    }
}

/// OC of the constrained rule with `g` groups of two: condition on `f`
/// groups holding exactly one failure (no group may hold two), which
/// leaves m - f passes; acceptance needs f <= m - k.
fn constrained_oc(k: u32, g: u32, p: f64) -> f64 {
    let m = 2 * g;
    let q = 1.0 - p;
    let one_fail = 2.0 * p * q;
    let both_pass = p * p;
    let f_max = (m - k).min(g);
    let mut sum = 0.0;
    for f in 0..=f_max {
        sum += choose_small(g, f) * one_fail.powi(f as i32) * both_pass.powi((g - f) as i32);
    }
    sum.clamp(0.0, 1.0)
}

/// Exact binomial coefficient for the tiny arguments layouts allow.
fn choose_small(n: u32, r: u32) -> f64 {
    let r = r.min(n - r);
    let mut c = 1u64;
    for i in 0..r {
        c = c * (n - i) as u64 / (i + 1) as u64;
    }
    c as f64
}

impl FromStr for Rule {
    type Err = Error;

    /// Parses `k-m-lambda` or `k-m-lambda:constrained[2,2,...]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad =
            |detail: &str| Error::InvalidRule(format!("rule '{s}': {detail}; expected {GRAMMAR}"));

        let (base, suffix) = match s.split_once(':') {
            None => (s, None),
            Some((b, rest)) => (b, Some(rest)),
        };

        let mut parts = base.split('-');
        let (k, m, lambda) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(k), Some(m), Some(l), None) => (k, m, l),
            _ => return Err(bad("needs exactly three dash-separated fields")),
        };
        let k: u32 = k
            .parse()
            .map_err(|_| bad("k must be a nonnegative integer"))?;
        let m: u32 = m
            .parse()
            .map_err(|_| bad("m must be a nonnegative integer"))?;
        let lambda: f64 = l_parse(lambda).ok_or_else(|| bad("lambda must be a real number"))?;

        let groups = match suffix {
            None => None,
            Some(rest) => {
                let inner = rest
                    .strip_prefix("constrained[")
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| bad("suffix must be constrained[g,g,...]"))?;
                let mut groups = Vec::new();
                for field in inner.split(',') {
                    let size: u32 = field
                        .trim()
                        .parse()
                        .map_err(|_| bad("group sizes must be positive integers"))?;
                    groups.push(size);
                }
                Some(groups)
            }
        };

        Rule::build(k, m, lambda, groups)
    }
}

fn l_parse(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.k, self.m, self.lambda)?;
        if let Some(ref groups) = self.groups {
            write!(f, ":constrained[")?;
            for (i, g) in groups.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rule(s: &str) -> Rule {
        s.parse().unwrap()
    }

    #[test]
    fn parses_plain_rule() {
        let r = rule("4-6-15");
        assert_eq!((r.k(), r.m(), r.lambda()), (4, 6, 15.0));
        assert!(!r.is_constrained());
        assert_eq!(r.to_string(), "4-6-15");
    }

    #[test]
    fn parses_constrained_rule() {
        let r = rule("4-6-15:constrained[2,2,2]");
        assert_eq!((r.k(), r.m(), r.lambda()), (4, 6, 15.0));
        assert_eq!(r.groups(), Some(&[2u32, 2, 2][..]));
        assert_eq!(r.to_string(), "4-6-15:constrained[2,2,2]");
    }

    #[test]
    fn parses_fractional_lambda() {
        assert_eq!(rule("3-4-12.5").lambda(), 12.5);
        assert_eq!(rule("3-4-12.5").to_string(), "3-4-12.5");
    }

    #[test]
    fn rejects_malformed_strings() {
        for s in [
            "",
            "4-6",
            "4-6-15-2",
            "a-6-15",
            "4-b-15",
            "4-6-x",
            "4-6-15:constrained",
            "4-6-15:constrained[",
            "4-6-15:constrained[]",
            "4-6-15:constrained[2,a]",
            "4-6-15:something[2]",
        ] {
            let err = s.parse::<Rule>().unwrap_err();
            assert!(matches!(err, Error::InvalidRule(_)), "'{s}' gave {err:?}");
            assert!(
                err.to_string().contains(GRAMMAR),
                "message for '{s}' should state the grammar: {err}"
            );
        }
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(matches!(
            "0-6-15".parse::<Rule>(),
            Err(Error::InvalidRule(_))
        ));
        assert!(matches!(
            "7-6-15".parse::<Rule>(),
            Err(Error::InvalidRule(_))
        ));
        assert!(matches!(
            "4-6-0".parse::<Rule>(),
            Err(Error::InvalidRule(_))
        ));
        assert!(matches!(
            "4-6--5".parse::<Rule>(),
            Err(Error::InvalidRule(_))
        ));
        assert!(matches!("4-30-15".parse::<Rule>(), Err(Error::TooLarge(_))));
    }

    #[test]
    fn rejects_bad_layouts() {
        // group of three
        assert!(matches!(
            "5-7-15:constrained[2,2,3]".parse::<Rule>(),
            Err(Error::InvalidRule(_))
        ));
        // sizes do not sum to m
        assert!(matches!(
            "4-6-15:constrained[2,2]".parse::<Rule>(),
            Err(Error::InvalidRule(_))
        ));
    }

    #[test]
    fn oc_reference_values() {
        let r = rule("4-6-15");
        assert_abs_diff_eq!(r.oc(0.8).unwrap().value(), 0.90112, epsilon = 1e-12);
        assert_eq!(r.oc(0.5).unwrap().value(), 22.0 / 64.0);
        assert_abs_diff_eq!(
            r.oc(2.0 / 3.0).unwrap().value(),
            496.0 / 729.0,
            epsilon = 1e-12
        );
        assert_eq!(r.oc(0.0).unwrap().value(), 0.0);
        assert_eq!(r.oc(1.0).unwrap().value(), 1.0);
    }

    #[test]
    fn constrained_oc_reference_values() {
        let r = rule("4-6-15:constrained[2,2,2]");
        assert_abs_diff_eq!(r.oc(0.8).unwrap().value(), 0.851968, epsilon = 1e-12);
        // Dyadic p makes every term exact: 19 of 64 equally likely outcomes.
        assert_eq!(r.oc(0.5).unwrap().value(), 19.0 / 64.0);
        assert_eq!(r.oc(0.0).unwrap().value(), 0.0);
        assert_eq!(r.oc(1.0).unwrap().value(), 1.0);
    }

    #[test]
    fn oc_rejects_out_of_range_p() {
        let r = rule("4-6-15");
        assert!(r.oc(-0.1).is_err());
        assert!(r.oc(1.1).is_err());
        assert!(r.oc(f64::NAN).is_err());
    }

    #[test]
    fn oc_curve_requires_increasing_grid() {
        let r = rule("4-6-15");
        let curve = r.oc_curve(&[0.0, 0.5, 0.8, 1.0]).unwrap();
        assert_eq!(curve.len(), 4);
        assert_eq!(curve[1].1.value(), 22.0 / 64.0);

        let err = r.oc_curve(&[0.0, 0.5, 0.5, 1.0]).unwrap_err();
        assert!(matches!(err, Error::UnsortedGrid { index: 2 }));
        let err = r.oc_curve(&[0.5, 0.4]).unwrap_err();
        assert!(matches!(err, Error::UnsortedGrid { index: 1 }));
    }

    #[test]
    fn invert_oc_reference_values() {
        let cases = [
            ("4-6-15", 0.90, 0.7990911211430955),
            ("10-12-15", 0.90, 0.904347094431396),
            ("5-6-15", 0.90, 0.9074047410868713),
        ];
        for (s, target, want) in cases {
            let r = rule(s);
            let p_star = r
                .invert_oc(Probability::new(target).unwrap())
                .unwrap()
                .value();
            assert_abs_diff_eq!(p_star, want, epsilon = 1e-9);
            assert!(r.oc(p_star).unwrap().value() >= target, "rule {s}");
            // Minimality: a point clearly below the bracket fails.
            assert!(r.oc(p_star - 1e-9).unwrap().value() < target, "rule {s}");
        }
    }

    #[test]
    fn invert_oc_rejects_degenerate_targets() {
        let r = rule("4-6-15");
        assert!(r.invert_oc(Probability::new(0.0).unwrap()).is_err());
        assert!(r.invert_oc(Probability::new(1.0).unwrap()).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn constraint_never_helps(p in 0.0..=1.0f64, g in 1u32..=10) {
                let m = 2 * g;
                let k = 1 + (g % m);
                let plain = Rule::new(k, m, 15.0).unwrap();
                let groups = vec![2u32; g as usize];
                let tied = Rule::new_constrained(k, m, 15.0, groups).unwrap();
                prop_assert!(
                    tied.oc(p).unwrap().value() <= plain.oc(p).unwrap().value() + 1e-12
                );
            }

            #[test]
            fn oc_monotone_in_p(
                p in 0.0..0.99f64,
                bump in 1e-6..0.01f64,
                k in 1u32..=6,
            ) {
                let r = Rule::new(k, 6, 15.0).unwrap();
                let lo = r.oc(p).unwrap().value();
                let hi = r.oc(p + bump).unwrap().value();
                prop_assert!(hi >= lo - 1e-13);
            }

            #[test]
            fn inversion_lands_on_target(
                target in 0.05..0.95f64,
                k in 1u32..=6,
            ) {
                let r = Rule::new(k, 6, 15.0).unwrap();
                let p_star = r.invert_oc(Probability::new(target).unwrap()).unwrap();
                let oc = r.oc(p_star.value()).unwrap().value();
                prop_assert!(oc >= target);
                prop_assert!(r.oc((p_star.value() - 1e-9).max(0.0)).unwrap().value() <= target + 1e-7);
            }
        }
    }
}
