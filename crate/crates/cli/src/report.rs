//! JSON result reports.
//!
//! Every number appears twice: `exact` as `"a/b"` (re-parses losslessly) and
//! `decimal` rounded to the requested number of places. Vectors over the
//! support carry a `support_order` block naming the row order in use.

use frechet_core::exact::{format_rational, to_fixed, Rational, Sqrt};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scalar {
    pub exact: String,
    pub decimal: String,
    /// `false` when the value went through an irrational square root and
    /// `exact` is a rational approximation.
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub is_exact: bool,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

impl Scalar {
    pub fn new(r: &Rational, places: usize) -> Self {
        Self {
            exact: format_rational(r),
            decimal: to_fixed(r, places),
            is_exact: true,
        }
    }

    pub fn from_sqrt(s: &Sqrt, places: usize) -> Self {
        Self {
            is_exact: s.is_exact(),
            ..Self::new(s.value(), places)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vector {
    pub exact: Vec<String>,
    pub decimal: Vec<String>,
}

impl Vector {
    pub fn new<'a>(values: impl IntoIterator<Item = &'a Rational>, places: usize) -> Self {
        let (exact, decimal) = values
            .into_iter()
            .map(|r| (format_rational(r), to_fixed(r, places)))
            .unzip();
        Self { exact, decimal }
    }
}

/// Row order of every support-indexed vector in the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportOrder {
    /// `canonical` or `paper`.
    pub name: String,
    pub rule: String,
    /// Point in each row, written `x_1 x_2 … x_m`.
    pub points: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairValue {
    pub i: usize,
    pub j: usize,
    #[serde(flatten)]
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairBoundReport {
    pub i: usize,
    pub j: usize,
    pub moment_lo: Scalar,
    pub moment_hi: Scalar,
    pub rho_lo: Scalar,
    pub rho_hi: Scalar,
    /// 1-based ray attaining the lower bound.
    pub lo_ray: usize,
    pub hi_ray: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub label: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub statement: String,
    pub rows: Vec<CertificateRow>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaEntry {
    /// 1-based coordinates of the subset; empty for `θ_0`.
    pub alpha: Vec<usize>,
    #[serde(flatten)]
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub entries: Vec<ThetaEntry>,
    /// `θ_0 = 1` and every `θ_i = 0`.
    pub class_conditions: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub squared: Scalar,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    /// 1-based coordinates: one entry for a margin, two for a pair.
    pub index: Vec<usize>,
    pub target: Scalar,
    pub empirical: Scalar,
    pub standard_error: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub n: usize,
    pub seed: u64,
    pub generator_id: String,
    /// Draw counts per support point, in `support_order`.
    pub counts: Vec<u64>,
    pub moments: Vec<MomentCheck>,
    /// Every moment lies within 4 standard errors of its target.
    pub within_4_se: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub elapsed_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivots: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dd_intermediate_counts: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency_tests: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// `ok`, `feasible` or `infeasible`.
    pub status: String,
    pub m: usize,
    pub p: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_order: Option<SupportOrder>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<PairBoundReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_star: Option<Vec<PairValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu2_star: Option<Vec<PairValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<DistanceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleReport>,
    pub diagnostics: Diagnostics,
}
