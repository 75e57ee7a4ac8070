//! Test-side reference implementations, written independently of the
//! library so agreement between the two is evidence rather than tautology.
//!
//! The normal CDF here uses a cancellation-free center series plus a
//! Mills-ratio continued fraction for the tails; the Student t CDF uses a
//! tangent substitution and adaptive quadrature, which is self-normalizing
//! and needs no gamma function; binomial tail probabilities come from full
//! enumeration of the 2^m outcome vectors.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::{Command, Output};

/// Compensated (Kahan) accumulator; keeps enumeration sums near 1 ulp.
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Kahan {
            sum: 0.0,
            carry: 0.0,
        }
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum
    }
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Phi(a) - 1/2 for a >= 0 via the all-positive-term series
/// phi(a) * sum_k a^(2k+1) / (1 * 3 * ... * (2k+1)).
fn center_mass(a: f64) -> f64 {
    debug_assert!(a >= 0.0);
    let mut term = a;
    let mut sum = a;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= a * a / (2 * k + 1) as f64;
        let prev = sum;
        sum += term;
        if sum == prev || k > 400 {
            break;
        }
    }
    std_normal_pdf(a) * sum
}

/// Upper tail Q(a) for a > 0 via the Mills-ratio continued fraction
/// Q(a) = phi(a) / (a + 1/(a + 2/(a + 3/(...)))), backward recurrence.
fn mills_tail(a: f64) -> f64 {
    debug_assert!(a > 0.0);
    let mut f = a;
    for k in (1..=800u32).rev() {
        f = a + k as f64 / f;
    }
    std_normal_pdf(a) / f
}

/// Reference standard normal CDF, absolute accuracy a few ulps of the
/// result in the center and relative accuracy in the tails.
pub fn normal_cdf_ref(z: f64) -> f64 {
    let a = z.abs();
    if a <= 3.0 {
        let s = center_mass(a);
        if z >= 0.0 {
            0.5 + s
        } else {
            0.5 - s
        }
    } else {
        let q = mills_tail(a);
        if z >= 0.0 {
            1.0 - q
        } else {
            q
        }
    }
}

/// Reference normal quantile by bisection on `normal_cdf_ref`.
pub fn normal_quantile_ref(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile needs p in (0, 1)");
    let mut lo = -42.0f64;
    let mut hi = 42.0f64;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if normal_cdf_ref(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[allow(clippy::too_many_arguments)] // recursion state travels as plain values
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let split = left + right;
    if depth == 0 || (split - whole).abs() <= 15.0 * tol {
        split + (split - whole) / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Adaptive Simpson quadrature.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Reference Student t CDF for dof >= 1 via X = sqrt(dof) tan(theta):
/// P(T <= t) is the ratio of two integrals of cos(theta)^(dof - 1), so no
/// normalizing constant is needed.
pub fn t_cdf_ref(t: f64, dof: f64) -> f64 {
    assert!(dof >= 1.0, "reference t CDF requires dof >= 1");
    let g = move |theta: f64| theta.cos().max(0.0).powf(dof - 1.0);
    let upper = (t / dof.sqrt()).atan();
    let full = integrate(g, -FRAC_PI_2, FRAC_PI_2, 1e-13);
    let part = integrate(g, -FRAC_PI_2, upper, 1e-13);
    (part / full).clamp(0.0, 1.0)
}

/// Reference t quantile by bisection on `t_cdf_ref`.
pub fn t_quantile_ref(p: f64, dof: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile needs p in (0, 1)");
    let mut lo = -1e6f64;
    let mut hi = 1e6f64;
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if t_cdf_ref(mid, dof) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// P(at least k passes out of m) by enumerating all 2^m outcome vectors.
pub fn oc_enum(k: u32, m: u32, p: f64) -> f64 {
    assert!(m <= 20, "enumeration oracle capped at 2^20 outcomes");
    let q = 1.0 - p;
    let mut total = Kahan::new();
    for mask in 0u64..(1u64 << m) {
        let passes = mask.count_ones();
        if passes >= k {
            total.add(p.powi(passes as i32) * q.powi((m - passes) as i32));
        }
    }
    total.total()
}

/// Enumeration for the grouped variant: a block is accepted when at least
/// k of the m runs pass AND no group fails in its entirety. Groups cover
/// the runs in order (`groups[0]` runs come first, and so on).
pub fn constrained_oc_enum(k: u32, groups: &[u32], p: f64) -> f64 {
    let m: u32 = groups.iter().sum();
    assert!(m <= 20, "enumeration oracle capped at 2^20 outcomes");
    let q = 1.0 - p;
    let mut total = Kahan::new();
    'mask: for mask in 0u64..(1u64 << m) {
        if mask.count_ones() < k {
            continue;
        }
        let mut offset = 0u32;
        for &g in groups {
            let span = ((1u64 << g) - 1) << offset;
            if mask & span == 0 {
                continue 'mask;
            }
            offset += g;
        }
        let passes = mask.count_ones();
        total.add(p.powi(passes as i32) * q.powi((m - passes) as i32));
    }
    total.total()
}

/// Reference variance decomposition: plain two-pass loops, no shared code
/// with the library. Mirrors the same conventions (divisors, clamping of a
/// negative between-series component at zero).
pub struct AnovaRef {
    pub grand_mean: f64,
    pub ms_within: f64,
    pub ms_between: f64,
    pub var_between: f64,
    pub var_within: f64,
    pub var_intermediate: f64,
    pub ratio: f64,
}

// Indexed loops on purpose: the reference must not share structure with
// the library's iterator-based implementation.
#[allow(clippy::needless_range_loop)]
pub fn anova_ref(groups: &[Vec<f64>]) -> AnovaRef {
    let p = groups.len();
    let n = groups[0].len();
    assert!(p >= 2 && n >= 2);

    let mut means = vec![0.0f64; p];
    for i in 0..p {
        assert_eq!(groups[i].len(), n, "reference requires a balanced layout");
        let mut s = 0.0;
        for j in 0..n {
            s += groups[i][j];
        }
        means[i] = s / n as f64;
    }
    let mut grand = 0.0;
    for i in 0..p {
        grand += means[i];
    }
    grand /= p as f64;

    let mut ssw = 0.0;
    for i in 0..p {
        for j in 0..n {
            let d = groups[i][j] - means[i];
            ssw += d * d;
        }
    }
    let mut ssb = 0.0;
    for i in 0..p {
        let d = means[i] - grand;
        ssb += d * d;
    }

    let ms_within = ssw / (p as f64 * (n as f64 - 1.0));
    let ms_between = n as f64 * ssb / (p as f64 - 1.0);
    let var_between = ((ms_between - ms_within) / n as f64).max(0.0);
    AnovaRef {
        grand_mean: grand,
        ms_within,
        ms_between,
        var_between,
        var_within: ms_within,
        var_intermediate: var_between + ms_within,
        ratio: var_between / ms_within,
    }
}

/// Records a failed check; `ok` empties mean the criterion passed.
pub fn check(failures: &mut Vec<String>, ok: bool, msg: String) {
    if !ok {
        failures.push(msg);
    }
}

/// Prints the per-criterion verdict line and panics on failure so the
/// cargo test summary agrees with the printed verdicts.
pub fn report(id: &str, description: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {id} PASS: {description}");
    } else {
        println!("criterion {id} FAIL: {description}");
        for f in failures {
            println!("  - {f}");
        }
        panic!("criterion {id} failed {} check(s)", failures.len());
    }
}

/// Runs the installed CLI binary with `args` and captures the result.
pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_methodrisk"))
        .args(args)
        .output()
        .expect("spawning the CLI binary")
}

#[cfg(test)]
mod oracle_self_checks {
    use super::*;

    #[test]
    fn normal_ref_symmetry_and_anchors() {
        assert_eq!(normal_cdf_ref(0.0), 0.5);
        for &z in &[0.3, 1.0, 2.5, 3.5, 6.0] {
            let s = normal_cdf_ref(z) + normal_cdf_ref(-z);
            assert!((s - 1.0).abs() < 1e-14, "symmetry broke at {z}: {s}");
        }
        // Anchors derived from frozen high-precision capability values:
        // P(|X| < 15) for (bias 0, sigma 8) and (bias 0, sigma 12.5).
        let phi_m1875 = (1.0 - 0.939_207_276_469_477_2) / 2.0;
        assert!((normal_cdf_ref(-1.875) - phi_m1875).abs() < 1e-15);
        let phi_m12 = (1.0 - 0.769_860_659_556_583_5) / 2.0;
        assert!((normal_cdf_ref(-1.2) - phi_m12).abs() < 1e-15);
    }

    #[test]
    fn normal_ref_series_and_fraction_agree_at_seam() {
        // Just inside vs just outside the 3.0 switchover, plus the two
        // methods evaluated at the same point.
        let series = 0.5 + center_mass(3.0);
        let fraction = 1.0 - mills_tail(3.0);
        assert!((series - fraction).abs() < 1e-15);
    }

    #[test]
    fn quantile_ref_round_trips() {
        for &p in &[0.001, 0.1, 0.5, 0.9, 0.975, 0.999] {
            let z = normal_quantile_ref(p);
            assert!((normal_cdf_ref(z) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn t_ref_cauchy_closed_form() {
        // dof 1 is Cauchy: F(t) = 1/2 + atan(t)/pi.
        for &t in &[-3.0f64, -0.5, 0.0, 1.0, 12.0] {
            let exact = 0.5 + t.atan() / PI;
            assert!((t_cdf_ref(t, 1.0) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn enumeration_matches_hand_counts() {
        // 1-of-1: accepted iff the single run passes.
        assert_eq!(oc_enum(1, 1, 0.3), 0.3);
        // 2-of-2 at p = 1/2: exactly 1/4.
        assert_eq!(oc_enum(2, 2, 0.5), 0.25);
        // Grouped 2-of-2 in one group of two: both must pass and the
        // group must not fully fail, so still 1/4.
        assert_eq!(constrained_oc_enum(2, &[2], 0.5), 0.25);
        // Grouped 1-of-2: the no-total-failure constraint is the same
        // event, so 3/4.
        assert_eq!(constrained_oc_enum(1, &[2], 0.5), 0.75);
    }
}
