//! C ABI for the method-risk toolkit.
//!
//! Conventions: every fallible call returns an [`MrStatus`] and writes its
//! result through out-pointers, which are only written on `MR_STATUS_OK`.
//! Handles (`MrRule`, `MrDataset`) are opaque; create them with the
//! matching `_new`/`_parse` call and release them with the matching
//! `_free`. All functions are panic-safe: a Rust panic is caught at the
//! boundary and surfaces as `MR_STATUS_INTERNAL_PANIC` instead of
//! unwinding into foreign frames.

use methodrisk::runrules::Rule;
use methodrisk::tolerance::{self, IntervalMethod};
use methodrisk::{capability, distributions, reconcile, Error, Probability};
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status of a toolkit call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrStatus {
    /// Success; out-parameters hold results.
    Ok = 0,
    /// An input lay outside the mathematical domain.
    Domain = 1,
    /// Replicate values were exactly constant (zero within-series spread).
    DegenerateVariance = 2,
    /// The dataset is not balanced.
    Unbalanced = 3,
    /// The design cannot identify the variance components.
    Unidentifiable = 4,
    /// The rule text or parameters are invalid.
    InvalidRule = 5,
    /// The rule's half-width and the supplied limits disagree.
    LambdaMismatch = 6,
    /// A grid was not strictly increasing.
    UnsortedGrid = 7,
    /// The dataset contents are invalid.
    Dataset = 8,
    /// A size limit was exceeded.
    TooLarge = 9,
    /// A required pointer was null.
    NullPointer = 10,
    /// A panic was caught at the ABI boundary.
    InternalPanic = 11,
}

/// Interval construction selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrMethod {
    /// Pool all observations as one i.i.d. sample.
    Simple = 0,
    /// One-way random-effects construction.
    OneWay = 1,
}

/// Variance decomposition of a balanced one-way layout.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MrComponents {
    pub n_series: u64,
    pub n_replicates: u64,
    pub bias: f64,
    pub ms_within: f64,
    pub ms_between: f64,
    pub var_between: f64,
    pub var_within: f64,
    pub var_intermediate: f64,
    pub ratio: f64,
}

/// A two-sided beta-expectation tolerance interval.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MrInterval {
    pub method: MrMethod,
    pub beta: f64,
    pub lower: f64,
    pub upper: f64,
    pub center: f64,
    pub k_factor: f64,
    pub sd: f64,
    pub dof: f64,
}

/// Opaque parsed acceptance rule.
pub struct MrRule {
    inner: Rule,
}

/// Opaque measurement dataset under construction: series of replicates on
/// the percent-of-target error scale.
pub struct MrDataset {
    groups: Vec<Vec<f64>>,
}

fn status_of(err: &Error) -> MrStatus {
    match err {
        Error::Domain(_) => MrStatus::Domain,
        Error::DegenerateVariance(_) => MrStatus::DegenerateVariance,
        Error::Unbalanced(_) => MrStatus::Unbalanced,
        Error::Unidentifiable(_) => MrStatus::Unidentifiable,
        Error::InvalidRule(_) => MrStatus::InvalidRule,
        Error::LambdaMismatch { .. } => MrStatus::LambdaMismatch,
        Error::UnsortedGrid { .. } => MrStatus::UnsortedGrid,
        Error::Dataset(_) => MrStatus::Dataset,
        Error::TooLarge(_) => MrStatus::TooLarge,
        _ => MrStatus::Domain,
    }
}

/// Runs `body` with panics converted to `InternalPanic`.
fn guarded(body: impl FnOnce() -> MrStatus) -> MrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => MrStatus::InternalPanic,
    }
}

fn probability(value: f64) -> Result<Probability, Error> {
    Probability::new(value)
}

/// Stable, human-readable name of a status code. Never null.
#[no_mangle]
pub extern "C" fn mr_status_name(status: MrStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        MrStatus::Ok => b"ok\0",
        MrStatus::Domain => b"domain\0",
        MrStatus::DegenerateVariance => b"degenerate-variance\0",
        MrStatus::Unbalanced => b"unbalanced-design\0",
        MrStatus::Unidentifiable => b"unidentifiable-design\0",
        MrStatus::InvalidRule => b"invalid-rule\0",
        MrStatus::LambdaMismatch => b"limit-mismatch\0",
        MrStatus::UnsortedGrid => b"unsorted-grid\0",
        MrStatus::Dataset => b"dataset\0",
        MrStatus::TooLarge => b"too-large\0",
        MrStatus::NullPointer => b"null-pointer\0",
        MrStatus::InternalPanic => b"internal-panic\0",
    };
    name.as_ptr().cast()
}

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

/// Standard normal CDF. Total function, NaN in gives NaN out.
#[no_mangle]
pub extern "C" fn mr_normal_cdf(z: f64) -> f64 {
    distributions::normal_cdf(z)
}

/// Standard normal quantile for p strictly inside (0, 1).
///
/// # Safety
/// `out` is null-checked; when non-null it must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_normal_quantile(p: f64, out: *mut f64) -> MrStatus {
    if out.is_null() {
        return MrStatus::NullPointer;
    }
    guarded(|| match distributions::normal_quantile(p) {
        Ok(z) => {
            unsafe { *out = z };
            MrStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Student t quantile for p in (0, 1) and dof > 0 (fractional allowed).
///
/// # Safety
/// `out` is null-checked; when non-null it must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_t_quantile(p: f64, dof: f64, out: *mut f64) -> MrStatus {
    if out.is_null() {
        return MrStatus::NullPointer;
    }
    guarded(|| match distributions::t_quantile(p, dof) {
        Ok(t) => {
            unsafe { *out = t };
            MrStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

// ---------------------------------------------------------------------------
// Capability
// ---------------------------------------------------------------------------

/// P(result within +/- lambda of target) for a procedure with this bias
/// and standard deviation.
///
/// # Safety
/// `out` is null-checked; when non-null it must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_prob_within(
    bias: f64,
    sigma: f64,
    lambda: f64,
    out: *mut f64,
) -> MrStatus {
    if out.is_null() {
        return MrStatus::NullPointer;
    }
    guarded(|| match capability::prob_within(bias, sigma, lambda) {
        Ok(p) => {
            unsafe { *out = p.value() };
            MrStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Boundary standard deviation where capability equals `beta` at this
/// bias. When no boundary exists (|bias| >= lambda), `*exists` is set to
/// false and `*out` to NaN.
///
/// # Safety
/// `exists` and `out` are null-checked; when non-null they must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_region_boundary_sigma(
    bias: f64,
    lambda: f64,
    beta: f64,
    exists: *mut bool,
    out: *mut f64,
) -> MrStatus {
    if exists.is_null() || out.is_null() {
        return MrStatus::NullPointer;
    }
    guarded(|| {
        let beta = match probability(beta) {
            Ok(b) => b,
            Err(e) => return status_of(&e),
        };
        match capability::region_boundary_sigma(bias, lambda, beta) {
            Ok(Some(sigma)) => {
                unsafe {
                    *exists = true;
                    *out = sigma;
                }
                MrStatus::Ok
            }
            Ok(None) => {
                unsafe {
                    *exists = false;
                    *out = f64::NAN;
                }
                MrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

/// Parses `text` (k-m-lambda[:constrained[2,2,...]]) into a rule handle.
/// The handle must be released with `mr_rule_free`.
///
/// # Safety
/// `text` is null-checked; when non-null it must point to a
/// NUL-terminated string. `out` likewise must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_rule_parse(text: *const c_char, out: *mut *mut MrRule) -> MrStatus {
    if text.is_null() || out.is_null() {
        return MrStatus::NullPointer;
    }
    guarded(|| {
        let text = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(t) => t,
            Err(_) => return MrStatus::InvalidRule,
        };
        match text.parse::<Rule>() {
            Ok(rule) => {
                let handle = Box::new(MrRule { inner: rule });
                unsafe { *out = Box::into_raw(handle) };
                MrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a rule handle. Null is ignored.
///
/// # Safety
/// `rule` must be null (ignored) or an unreleased handle from
/// `mr_rule_parse`; it is invalid after the call.
#[no_mangle]
pub unsafe extern "C" fn mr_rule_free(rule: *mut MrRule) {
    if !rule.is_null() {
        drop(unsafe { Box::from_raw(rule) });
    }
}

/// The rule's acceptance half-width.
///
/// # Safety
/// `rule` is null-checked; when non-null it must be a live handle from
/// `mr_rule_parse`. `out` likewise must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_rule_lambda(rule: *const MrRule, out: *mut f64) -> MrStatus {
    if rule.is_null() || out.is_null() {
        return MrStatus::NullPointer;
    }
    unsafe { *out = (*rule).inner.lambda() };
    MrStatus::Ok
}

/// Block acceptance probability at per-run pass probability `p`.
///
/// # Safety
/// `rule` is null-checked; when non-null it must be a live handle from
/// `mr_rule_parse`. `out` likewise must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_rule_oc(rule: *const MrRule, p: f64, out: *mut f64) -> MrStatus {
    if rule.is_null() || out.is_null() {
        return MrStatus::NullPointer;
    }
    guarded(|| match unsafe { &(*rule).inner }.oc(p) {
        Ok(oc) => {
            unsafe { *out = oc.value() };
            MrStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Smallest per-run pass probability whose OC reaches `gamma`.
///
/// # Safety
/// `rule` is null-checked; when non-null it must be a live handle from
/// `mr_rule_parse`. `out` likewise must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_rule_invert_oc(
    rule: *const MrRule,
    gamma: f64,
    out: *mut f64,
) -> MrStatus {
    if rule.is_null() || out.is_null() {
        return MrStatus::NullPointer;
    }
    guarded(|| {
        let gamma = match probability(gamma) {
            Ok(g) => g,
            Err(e) => return status_of(&e),
        };
        match unsafe { &(*rule).inner }.invert_oc(gamma) {
            Ok(p) => {
                unsafe { *out = p.value() };
                MrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Required per-run quality: OC inversion at `gamma`, optionally rounded
/// up to `granularity` (pass 0 for no rounding).
///
/// # Safety
/// `rule` is null-checked; when non-null it must be a live handle from
/// `mr_rule_parse`. `out` likewise must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_rule_required_beta(
    rule: *const MrRule,
    gamma: f64,
    granularity: f64,
    out: *mut f64,
) -> MrStatus {
    if rule.is_null() || out.is_null() {
        return MrStatus::NullPointer;
    }
    guarded(|| {
        let gamma = match probability(gamma) {
            Ok(g) => g,
            Err(e) => return status_of(&e),
        };
        let granularity = if granularity == 0.0 {
            None
        } else {
            Some(granularity)
        };
        match reconcile::required_beta(unsafe { &(*rule).inner }, gamma, granularity) {
            Ok(req) => {
                unsafe { *out = req.effective };
                MrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Datasets and tolerance intervals
// ---------------------------------------------------------------------------

/// Creates an empty dataset handle. Release with `mr_dataset_free`.
///
/// # Safety
/// `out` is null-checked; when non-null it must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_dataset_new(out: *mut *mut MrDataset) -> MrStatus {
    if out.is_null() {
        return MrStatus::NullPointer;
    }
    let handle = Box::new(MrDataset { groups: Vec::new() });
    unsafe { *out = Box::into_raw(handle) };
    MrStatus::Ok
}

/// Appends one series of replicate values (copied out of `values`).
///
/// # Safety
/// `dataset` is null-checked; when non-null it must be a live handle
/// from `mr_dataset_new`. `values` likewise must point to `len` readable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn mr_dataset_push_series(
    dataset: *mut MrDataset,
    values: *const f64,
    len: usize,
) -> MrStatus {
    if dataset.is_null() || values.is_null() {
        return MrStatus::NullPointer;
    }
    if len == 0 {
        return MrStatus::Dataset;
    }
    let series = unsafe { std::slice::from_raw_parts(values, len) }.to_vec();
    unsafe { &mut *dataset }.groups.push(series);
    MrStatus::Ok
}

/// Releases a dataset handle. Null is ignored.
///
/// # Safety
/// `dataset` must be null (ignored) or an unreleased handle from
/// `mr_dataset_new`; it is invalid after the call.
#[no_mangle]
pub unsafe extern "C" fn mr_dataset_free(dataset: *mut MrDataset) {
    if !dataset.is_null() {
        drop(unsafe { Box::from_raw(dataset) });
    }
}

fn components_of(c: &tolerance::VarianceComponents) -> MrComponents {
    MrComponents {
        n_series: c.n_series as u64,
        n_replicates: c.n_replicates as u64,
        bias: c.bias,
        ms_within: c.ms_within,
        ms_between: c.ms_between,
        var_between: c.var_between,
        var_within: c.var_within,
        var_intermediate: c.var_intermediate,
        ratio: c.ratio,
    }
}

/// Estimates the variance decomposition of the dataset.
///
/// # Safety
/// `dataset` is null-checked; when non-null it must be a live handle
/// from `mr_dataset_new`. `out` likewise must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_components(
    dataset: *const MrDataset,
    out: *mut MrComponents,
) -> MrStatus {
    if dataset.is_null() || out.is_null() {
        return MrStatus::NullPointer;
    }
    guarded(
        || match tolerance::estimate_components(unsafe { &(*dataset).groups }) {
            Ok(c) => {
                unsafe { *out = components_of(&c) };
                MrStatus::Ok
            }
            Err(e) => status_of(&e),
        },
    )
}

/// Builds the beta-expectation tolerance interval for the dataset.
///
/// # Safety
/// `dataset` is null-checked; when non-null it must be a live handle
/// from `mr_dataset_new`. `out` likewise must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_interval(
    dataset: *const MrDataset,
    method: MrMethod,
    beta: f64,
    out: *mut MrInterval,
) -> MrStatus {
    if dataset.is_null() || out.is_null() {
        return MrStatus::NullPointer;
    }
    guarded(|| {
        let beta = match probability(beta) {
            Ok(b) => b,
            Err(e) => return status_of(&e),
        };
        let core_method = match method {
            MrMethod::Simple => IntervalMethod::Simple,
            MrMethod::OneWay => IntervalMethod::OneWay,
        };
        match tolerance::beta_expectation_interval(unsafe { &(*dataset).groups }, core_method, beta)
        {
            Ok(i) => {
                unsafe {
                    *out = MrInterval {
                        method,
                        beta: i.beta,
                        lower: i.lower,
                        upper: i.upper,
                        center: i.center,
                        k_factor: i.k_factor,
                        sd: i.sd,
                        dof: i.dof,
                    };
                }
                MrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Strict pre-study decision: true only when the whole interval lies
/// strictly inside (-lambda, lambda).
///
/// # Safety
/// `interval` is null-checked; when non-null it must point to a
/// readable `MrInterval`. `out` likewise must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mr_prestudy_accepts(
    interval: *const MrInterval,
    lambda: f64,
    out: *mut bool,
) -> MrStatus {
    if interval.is_null() || out.is_null() {
        return MrStatus::NullPointer;
    }
    guarded(|| {
        let i = unsafe { &*interval };
        let core = tolerance::ToleranceInterval {
            method: match i.method {
                MrMethod::Simple => IntervalMethod::Simple,
                MrMethod::OneWay => IntervalMethod::OneWay,
            },
            beta: i.beta,
            lower: i.lower,
            upper: i.upper,
            center: i.center,
            k_factor: i.k_factor,
            sd: i.sd,
            dof: i.dof,
        };
        match tolerance::prestudy_accepts(&core, lambda) {
            Ok(accepted) => {
                unsafe { *out = accepted };
                MrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    fn parse(text: &str) -> *mut MrRule {
        let c = CString::new(text).unwrap();
        let mut rule: *mut MrRule = ptr::null_mut();
        let status = unsafe { mr_rule_parse(c.as_ptr(), &mut rule) };
        assert_eq!(status, MrStatus::Ok);
        assert!(!rule.is_null());
        rule
    }

    #[test]
    fn rule_lifecycle_and_oc() {
        let rule = parse("4-6-15");
        let mut lambda = 0.0;
        assert_eq!(unsafe { mr_rule_lambda(rule, &mut lambda) }, MrStatus::Ok);
        assert_eq!(lambda, 15.0);

        let mut oc = 0.0;
        assert_eq!(unsafe { mr_rule_oc(rule, 0.5, &mut oc) }, MrStatus::Ok);
        assert_eq!(oc, 22.0 / 64.0);

        let mut p_star = 0.0;
        assert_eq!(
            unsafe { mr_rule_invert_oc(rule, 0.90, &mut p_star) },
            MrStatus::Ok
        );
        assert!((p_star - 0.7990911211430955).abs() < 1e-9);

        let mut required = 0.0;
        assert_eq!(
            unsafe { mr_rule_required_beta(rule, 0.90, 0.05, &mut required) },
            MrStatus::Ok
        );
        assert_eq!(required, 0.8);

        assert_eq!(unsafe { mr_rule_oc(rule, 1.5, &mut oc) }, MrStatus::Domain);
        unsafe { mr_rule_free(rule) };
    }

    #[test]
    fn rule_parse_failures() {
        let c = CString::new("banana").unwrap();
        let mut rule: *mut MrRule = ptr::null_mut();
        assert_eq!(
            unsafe { mr_rule_parse(c.as_ptr(), &mut rule) },
            MrStatus::InvalidRule
        );
        assert!(rule.is_null());
        assert_eq!(
            unsafe { mr_rule_parse(ptr::null(), &mut rule) },
            MrStatus::NullPointer
        );
    }

    #[test]
    fn capability_surface() {
        let mut p = 0.0;
        assert_eq!(
            unsafe { mr_prob_within(0.0, 8.0, 15.0, &mut p) },
            MrStatus::Ok
        );
        assert!((p - 0.9392072764694772).abs() < 1e-12);
        assert_eq!(
            unsafe { mr_prob_within(0.0, -1.0, 15.0, &mut p) },
            MrStatus::Domain
        );

        let mut exists = false;
        let mut sigma = 0.0;
        assert_eq!(
            unsafe { mr_region_boundary_sigma(0.0, 15.0, 0.8, &mut exists, &mut sigma) },
            MrStatus::Ok
        );
        assert!(exists);
        assert!((sigma - 11.704562191085686).abs() < 1e-8);

        assert_eq!(
            unsafe { mr_region_boundary_sigma(20.0, 15.0, 0.8, &mut exists, &mut sigma) },
            MrStatus::Ok
        );
        assert!(!exists);
        assert!(sigma.is_nan());
    }

    #[test]
    fn dataset_components_and_interval() {
        let mut ds: *mut MrDataset = ptr::null_mut();
        assert_eq!(unsafe { mr_dataset_new(&mut ds) }, MrStatus::Ok);
        let s1 = [-2.0, 0.0];
        let s2 = [2.0, 4.0];
        assert_eq!(
            unsafe { mr_dataset_push_series(ds, s1.as_ptr(), s1.len()) },
            MrStatus::Ok
        );
        assert_eq!(
            unsafe { mr_dataset_push_series(ds, s2.as_ptr(), s2.len()) },
            MrStatus::Ok
        );

        let mut comps = MrComponents {
            n_series: 0,
            n_replicates: 0,
            bias: 0.0,
            ms_within: 0.0,
            ms_between: 0.0,
            var_between: 0.0,
            var_within: 0.0,
            var_intermediate: 0.0,
            ratio: 0.0,
        };
        assert_eq!(unsafe { mr_components(ds, &mut comps) }, MrStatus::Ok);
        assert_eq!(comps.bias, 1.0);
        assert_eq!(comps.var_between, 7.0);
        assert_eq!(comps.var_intermediate, 9.0);

        let mut interval = MrInterval {
            method: MrMethod::OneWay,
            beta: 0.0,
            lower: 0.0,
            upper: 0.0,
            center: 0.0,
            k_factor: 0.0,
            sd: 0.0,
            dof: 0.0,
        };
        assert_eq!(
            unsafe { mr_interval(ds, MrMethod::OneWay, 0.8, &mut interval) },
            MrStatus::Ok
        );
        assert!((interval.lower + 7.9854095942766).abs() < 1e-9);
        assert!((interval.upper - 9.9854095942766).abs() < 1e-9);

        let mut accepted = false;
        assert_eq!(
            unsafe { mr_prestudy_accepts(&interval, 15.0, &mut accepted) },
            MrStatus::Ok
        );
        assert!(accepted);
        assert_eq!(
            unsafe { mr_prestudy_accepts(&interval, 9.0, &mut accepted) },
            MrStatus::Ok
        );
        assert!(!accepted);

        unsafe { mr_dataset_free(ds) };
    }

    #[test]
    fn degenerate_dataset_reports_status() {
        let mut ds: *mut MrDataset = ptr::null_mut();
        assert_eq!(unsafe { mr_dataset_new(&mut ds) }, MrStatus::Ok);
        let s = [1.0, 1.0];
        for _ in 0..2 {
            assert_eq!(
                unsafe { mr_dataset_push_series(ds, s.as_ptr(), s.len()) },
                MrStatus::Ok
            );
        }
        let mut comps = unsafe { std::mem::zeroed::<MrComponents>() };
        assert_eq!(
            unsafe { mr_components(ds, &mut comps) },
            MrStatus::DegenerateVariance
        );
        unsafe { mr_dataset_free(ds) };
    }

    #[test]
    fn status_names_are_stable() {
        let name = unsafe { CStr::from_ptr(mr_status_name(MrStatus::LambdaMismatch)) };
        assert_eq!(name.to_str().unwrap(), "limit-mismatch");
        let name = unsafe { CStr::from_ptr(mr_status_name(MrStatus::Ok)) };
        assert_eq!(name.to_str().unwrap(), "ok");
    }

    #[test]
    fn quantile_surface() {
        let mut t = 0.0;
        assert_eq!(unsafe { mr_t_quantile(0.9, 19.0, &mut t) }, MrStatus::Ok);
        assert!((t - 1.327728).abs() < 1e-5);
        assert_eq!(
            unsafe { mr_t_quantile(1.2, 19.0, &mut t) },
            MrStatus::Domain
        );
        assert_eq!(
            unsafe { mr_t_quantile(0.9, 19.0, ptr::null_mut()) },
            MrStatus::NullPointer
        );
        assert!((mr_normal_cdf(0.0) - 0.5).abs() < 1e-15);
    }
}
