//! Exact alpha_G-invariant of a smooth toric Fano manifold.
//!
//! For a symmetric fan the invariant is 1. Otherwise it is `t / (1 + t)`
//! where `t` is the minimum of `|w_v| / |v|` over nonzero fixed points `v`
//! on the boundary of the anticanonical polytope, and `w_v` is the boundary
//! point on the opposite ray. Because `w_v = -v / gauge(-v)`, the ratio is
//! `1 / gauge(-v)`, so no Euclidean norms are needed. `gauge(-.)` is convex,
//! hence its maximum over the fixed section is attained at a vertex.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::fan::{validate_fan, FanData, FanDiagnosis};
use crate::linalg::{RatVector, Rational};
use crate::polytope::{build_polytope, section, AnticanonicalPolytope, Gauge, SectionPolytope};
use crate::serde_util;
use crate::symmetry::{fixed_space, weyl_group, FixedSpace, Side, SymmetryGroup};

#[derive(Debug, Clone, Error)]
pub enum AlphaError {
    #[error("fan does not define a smooth toric Fano manifold")]
    NotFano(FanDiagnosis),
    #[error("minimizer list is empty")]
    EmptyMinimizers,
}

/// Automorphism group, fixed subspace of `M`, and the section of the
/// polytope by that subspace (absent when only the origin is fixed).
#[derive(Debug, Clone)]
pub struct StableSet {
    pub group: SymmetryGroup,
    pub fixed: FixedSpace,
    pub polytope: AnticanonicalPolytope,
    pub section: Option<SectionPolytope>,
}

fn require_fano(fan: &FanData) -> Result<AnticanonicalPolytope, AlphaError> {
    let diagnosis = validate_fan(fan);
    if !diagnosis.is_fano {
        return Err(AlphaError::NotFano(diagnosis));
    }
    Ok(build_polytope(fan).expect("validated Fano fan"))
}

/// The stable set is the relative boundary of the returned section.
pub fn stable_set_data(fan: &FanData) -> Result<StableSet, AlphaError> {
    let polytope = require_fano(fan)?;
    let group = weyl_group(fan);
    let fixed = fixed_space(&group, Side::M);
    let section = if fixed.is_trivial() {
        None
    } else {
        Some(section(&polytope, &fixed.basis).expect("fixed-space basis is independent"))
    };
    Ok(StableSet { group, fixed, polytope, section })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateEntry {
    /// Section vertex, in `M` coordinates.
    #[serde(serialize_with = "serde_util::ratvec_strs")]
    pub vertex: RatVector,
    /// `gauge(-vertex)`.
    #[serde(serialize_with = "serde_util::rational_str")]
    pub opposite_gauge: Rational,
    /// `|w_v| / |v| = 1 / gauge(-vertex)`.
    #[serde(serialize_with = "serde_util::rational_str")]
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimumRatio {
    pub t_star: Rational,
    /// Section vertices attaining `t_star`, in `M` coordinates.
    pub minimizers: Vec<RatVector>,
    pub certificate: Vec<CertificateEntry>,
}

pub fn optimum_ratio(sec: &SectionPolytope) -> OptimumRatio {
    let certificate: Vec<CertificateEntry> = sec
        .vertices()
        .iter()
        .map(|u| {
            let opposite_gauge = sec.gauge(&-u);
            CertificateEntry {
                vertex: sec.lift(u),
                ratio: opposite_gauge.recip(),
                opposite_gauge,
            }
        })
        .collect();
    let worst = certificate
        .iter()
        .map(|e| &e.opposite_gauge)
        .max()
        .expect("a bounded section has vertices")
        .clone();
    let minimizers = certificate
        .iter()
        .filter(|e| e.opposite_gauge == worst)
        .map(|e| e.vertex.clone())
        .collect();
    OptimumRatio { t_star: worst.recip(), minimizers, certificate }
}

/// Least `m >= 1` making some minimizer integral: the stationarity threshold
/// of the sequence alpha_{m,G}.
pub fn m_zero(minimizers: &[RatVector]) -> Result<BigInt, AlphaError> {
    minimizers
        .iter()
        .map(RatVector::denominator_lcm)
        .min()
        .ok_or(AlphaError::EmptyMinimizers)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaReport {
    pub symmetric: bool,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serde_util::opt_rational_str")]
    pub t_star: Option<Rational>,
    #[serde(serialize_with = "serde_util::rational_str")]
    pub alpha: Rational,
    #[serde(skip_serializing_if = "Vec::is_empty", serialize_with = "serde_util::ratvecs_strs")]
    pub minimizers: Vec<RatVector>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serde_util::opt_count")]
    pub m_zero: Option<BigInt>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificate: Vec<CertificateEntry>,
}

pub fn alpha_g(fan: &FanData) -> Result<AlphaReport, AlphaError> {
    let stable = stable_set_data(fan)?;
    let Some(sec) = stable.section else {
        return Ok(AlphaReport {
            symmetric: true,
            t_star: None,
            alpha: Rational::one(),
            minimizers: Vec::new(),
            m_zero: None,
            certificate: Vec::new(),
        });
    };
    let optimum = optimum_ratio(&sec);
    let alpha = &optimum.t_star / (Rational::one() + &optimum.t_star);
    let m0 = m_zero(&optimum.minimizers)?;
    Ok(AlphaReport {
        symmetric: false,
        t_star: Some(optimum.t_star),
        alpha,
        minimizers: optimum.minimizers,
        m_zero: Some(m0),
        certificate: optimum.certificate,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaMValue {
    Exact(Rational),
    /// `lower <= alpha_{m,G} < upper`; the closed formula does not pin the
    /// value below the stationarity threshold.
    Bracket { lower: Rational, upper: Rational },
}

impl fmt::Display for AlphaMValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaMValue::Exact(v) => write!(f, "{v}"),
            AlphaMValue::Bracket { lower, upper } => write!(f, "[{lower}, {upper}) (not determined)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaMRow {
    pub m: u64,
    pub value: AlphaMValue,
}

impl Serialize for AlphaMRow {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row<'a> {
            m: u64,
            #[serde(skip_serializing_if = "Option::is_none")]
            value: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            lower: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            upper_exclusive: Option<String>,
            status: &'a str,
        }
        let row = match &self.value {
            AlphaMValue::Exact(v) => Row {
                m: self.m,
                value: Some(v.to_string()),
                lower: None,
                upper_exclusive: None,
                status: "exact",
            },
            AlphaMValue::Bracket { lower, upper } => Row {
                m: self.m,
                value: None,
                lower: Some(lower.to_string()),
                upper_exclusive: Some(upper.to_string()),
                status: "not_determined",
            },
        };
        row.serialize(s)
    }
}

/// alpha_{m,G} for `m = 1..=max_m`: exact from the threshold `m_0` on, a
/// bracket `[alpha_G, 1)` below it.
pub fn alpha_m_report(fan: &FanData, max_m: u64) -> Result<Vec<AlphaMRow>, AlphaError> {
    let report = alpha_g(fan)?;
    let threshold = report.m_zero.clone().unwrap_or_else(BigInt::one);
    Ok((1..=max_m)
        .map(|m| {
            let value = if BigInt::from(m) >= threshold {
                AlphaMValue::Exact(report.alpha.clone())
            } else {
                AlphaMValue::Bracket { lower: report.alpha.clone(), upper: Rational::one() }
            };
            AlphaMRow { m, value }
        })
        .collect())
}

/// Sanity bounds every report must satisfy.
pub fn report_is_consistent(report: &AlphaReport) -> bool {
    if report.symmetric {
        return report.alpha.is_one() && report.t_star.is_none() && report.minimizers.is_empty();
    }
    let Some(t) = &report.t_star else { return false };
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    t > &Rational::zero()
        && t <= &Rational::one()
        && report.alpha == t / (Rational::one() + t)
        && report.alpha <= half
}
