//! Report documents and their canonical serialization.
//!
//! Reports exist to be diffed and archived, so serialization is strictly
//! canonical: fields appear in declaration order, every float is written
//! as a 17-significant-digit scientific literal, negative zero is
//! normalized to zero, and no environment-dependent detail (time, locale,
//! host) is ever included. The same byte stream always means the same
//! analysis.

use crate::mcoracle::McEstimate;
use crate::reconcile::{RequiredBeta, RiskRow};
use crate::tolerance::{ToleranceInterval, VarianceComponents};
use crate::{Error, Result};
use serde::Serialize;
use std::io;

/// Version tag for the report layout.
pub const SCHEMA_VERSION: &str = "1";

/// Top-level report envelope shared by the reporting subcommands.
/// Sections that do not apply to the invocation serialize as null.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    pub inputs: Inputs,
    pub required_beta: Option<RequiredBeta>,
    pub capability: Option<Vec<CapabilityAssessment>>,
    pub tolerance_interval: Option<Vec<LevelInterval>>,
    pub prestudy_decision: Option<Vec<LevelDecision>>,
    pub oc_table: Option<Vec<RiskRow>>,
    pub mc_crosschecks: Option<Vec<McCheck>>,
}

/// Echo of the effective inputs after config-file merging. Only inputs
/// that shape the result are echoed; execution details like the worker
/// count are omitted so the report stays byte-identical across them.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Inputs {
    pub command: String,
    pub rule: Option<String>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub granularity: Option<f64>,
    pub beta: Option<f64>,
    pub method: Option<String>,
    pub dataset: Option<String>,
    pub bias: Option<f64>,
    pub sigma: Option<f64>,
    pub p: Option<f64>,
    pub sd_between: Option<f64>,
    pub sd_within: Option<f64>,
    pub series: Option<u64>,
    pub replicates: Option<u64>,
    pub n: Option<u64>,
    pub seed: Option<u64>,
    pub stream: Option<u64>,
}

/// Capability verdict for one parameter point (a dataset level's
/// estimates, or explicitly supplied bias/sigma).
#[derive(Debug, Clone, Serialize)]
pub struct CapabilityAssessment {
    /// Level label; null for an explicit parameter point.
    pub level: Option<String>,
    pub bias: f64,
    pub sigma: f64,
    /// Requirement the verdict is taken against.
    pub beta: f64,
    /// P(result within the limits) at (bias, sigma).
    pub probability: f64,
    pub capable: bool,
    /// Largest sigma still capable at this bias; null past the limits.
    pub boundary_sigma: Option<f64>,
    /// boundary_sigma - sigma; positive means headroom.
    pub margin: Option<f64>,
}

/// Per-level decomposition and tolerance interval.
#[derive(Debug, Clone, Serialize)]
pub struct LevelInterval {
    pub level: String,
    pub components: VarianceComponents,
    pub interval: ToleranceInterval,
    /// Estimated probability content of the acceptance window at the
    /// level's plug-in estimates.
    pub plug_in_content: f64,
}

/// Per-level accept/reject outcome.
#[derive(Debug, Clone, Serialize)]
pub struct LevelDecision {
    pub level: String,
    pub lambda: f64,
    pub lower: f64,
    pub upper: f64,
    pub accepted: bool,
}

/// One Monte Carlo agreement check against an analytic value.
#[derive(Debug, Clone, Serialize)]
pub struct McCheck {
    pub name: String,
    pub seed: u64,
    pub stream: u64,
    pub n: u64,
    pub estimate: f64,
    pub se: f64,
    pub analytic: f64,
    pub abs_diff: f64,
    /// |estimate - analytic| within the check's tolerance: 4 standard
    /// errors for direct Monte Carlo estimates, a fixed calibration band
    /// for checks whose analytic counterpart is itself approximate.
    pub pass: bool,
}

impl McCheck {
    pub fn new(
        name: impl Into<String>,
        seed: u64,
        stream: u64,
        mc: McEstimate,
        analytic: f64,
    ) -> Self {
        let abs_diff = (mc.estimate - analytic).abs();
        McCheck {
            name: name.into(),
            seed,
            stream,
            n: mc.n,
            estimate: mc.estimate,
            se: mc.se,
            analytic,
            abs_diff,
            pass: abs_diff <= 4.0 * mc.se,
        }
    }

    /// Check with a fixed tolerance instead of the 4-standard-error gate.
    #[allow(clippy::too_many_arguments)]
    pub fn with_tolerance(
        name: impl Into<String>,
        seed: u64,
        stream: u64,
        n: u64,
        estimate: f64,
        se: f64,
        analytic: f64,
        tolerance: f64,
    ) -> Self {
        let abs_diff = (estimate - analytic).abs();
        McCheck {
            name: name.into(),
            seed,
            stream,
            n,
            estimate,
            se,
            analytic,
            abs_diff,
            pass: abs_diff <= tolerance,
        }
    }
}

/// Machine-readable failure document: `{"error":{"code":...,"message":...}}`.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorDocument {
    pub error: ErrorBody,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorBody {
    pub code: &'static str,
    pub message: String,
}

impl ErrorDocument {
    pub fn from_error(err: &Error) -> Self {
        ErrorDocument {
            error: ErrorBody {
                code: err.code(),
                message: err.to_string(),
            },
        }
    }
}

/// Canonical float literal: 17 significant digits, scientific form,
/// negative zero normalized. Shared by JSON reports and CSV plot data.
pub fn fmt_float(value: f64) -> String {
    let v = if value == 0.0 { 0.0 } else { value };
    format!("{v:.16e}")
}

struct CanonicalFormatter;

impl serde_json::ser::Formatter for CanonicalFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(fmt_float(value).as_bytes())
    }
}

/// Serializes any report value to its canonical JSON byte form.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Domain(format!("report serialization failed: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::Domain(format!("report is not UTF-8: {e}")))
}
