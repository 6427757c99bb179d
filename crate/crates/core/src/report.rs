//! The JSON report document.
//!
//! Exact quantities are written as `"p/q"` strings. Floating-point numbers
//! only ever appear under the `oracle` key.

use serde::Serialize;

use crate::alpha::{alpha_g, alpha_m_report, AlphaError, AlphaMRow, AlphaReport};
use crate::fan::{validate_fan, FanDiagnosis};
use crate::format::{input_digest, NamedFan};
use crate::linalg::{IntMatrix, RatVector, Rational};
use crate::oracle::{
    exact_convergence_predicate, model_integral_estimate, ConvergenceVerdict, OracleConfig, OracleError,
    PotentialData,
};
use crate::polytope::{barycenter, build_polytope, lattice_points, PolytopeError};
use crate::serde_util;
use crate::symmetry::{fixed_space, weyl_group, Side};

pub const TOOL_NAME: &str = "toric-alpha";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputSummary {
    pub name: String,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetrySummary {
    pub group_order: usize,
    pub fixed_dim_n: usize,
    pub fixed_dim_m: usize,
    #[serde(serialize_with = "serde_util::ratvecs_strs")]
    pub fixed_basis_n: Vec<RatVector>,
    #[serde(serialize_with = "serde_util::ratvecs_strs")]
    pub fixed_basis_m: Vec<RatVector>,
    /// Group elements acting on `N`, as row lists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Vec<Vec<String>>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeSummary {
    pub m: u64,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSection {
    #[serde(serialize_with = "serde_util::rational_str")]
    pub alpha: Rational,
    #[serde(serialize_with = "serde_util::ratvec_strs")]
    pub direction: RatVector,
    pub exact_predicate: bool,
    pub numerical: ConvergenceVerdict,
    pub config: OracleConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub input: InputSummary,
    pub diagnosis: FanDiagnosis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<SymmetrySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_m: Option<Vec<AlphaMRow>>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_ratvec")]
    pub barycenter: Option<RatVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_points: Option<LatticeSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
}

fn opt_ratvec<S: serde::Serializer>(v: &Option<RatVector>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => serde_util::ratvec_strs(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRequest {
    pub alpha: Rational,
    /// Defaults to the first minimizer (the origin for symmetric fans).
    pub direction: Option<RatVector>,
    pub cutoffs: Vec<f64>,
    pub config: OracleConfig,
}

/// Which optional sections to compute.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportOptions {
    pub certificate: bool,
    pub group_elements: bool,
    pub alpha_m_up_to: Option<u64>,
    pub barycenter: bool,
    pub lattice: Option<(u64, bool)>,
    pub oracle: Option<OracleRequest>,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Alpha(#[from] AlphaError),
}

fn matrix_rows(g: &IntMatrix) -> Vec<Vec<String>> {
    (0..g.rows()).map(|i| g.row(i).iter().map(ToString::to_string).collect()).collect()
}

/// Runs the requested computations. For a fan that is not Fano only the
/// diagnosis is filled in.
pub fn build_report(named: &NamedFan, options: &ReportOptions) -> Result<ReportDocument, ReportError> {
    let fan = &named.fan;
    let diagnosis = validate_fan(fan);
    let mut doc = ReportDocument {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        input: InputSummary { name: named.name.clone(), digest: input_digest(fan) },
        diagnosis,
        symmetry: None,
        alpha: None,
        alpha_m: None,
        barycenter: None,
        lattice_points: None,
        oracle: None,
    };
    if !doc.diagnosis.is_fano {
        return Ok(doc);
    }

    let polytope = build_polytope(fan)?;
    let group = weyl_group(fan);
    let fixed_n = fixed_space(&group, Side::N);
    let fixed_m = fixed_space(&group, Side::M);
    doc.symmetry = Some(SymmetrySummary {
        group_order: group.order(),
        fixed_dim_n: fixed_n.dim(),
        fixed_dim_m: fixed_m.dim(),
        fixed_basis_n: fixed_n.basis,
        fixed_basis_m: fixed_m.basis,
        elements: options
            .group_elements
            .then(|| group.elements().iter().map(matrix_rows).collect()),
    });

    let mut alpha = alpha_g(fan)?;
    if !options.certificate {
        alpha.certificate.clear();
    }
    if let Some(max_m) = options.alpha_m_up_to {
        doc.alpha_m = Some(alpha_m_report(fan, max_m)?);
    }
    if options.barycenter {
        doc.barycenter = Some(barycenter(&polytope));
    }
    if let Some((m, list)) = options.lattice {
        let points = lattice_points(&polytope, m)?;
        doc.lattice_points = Some(LatticeSummary { m, count: points.len(), points: list.then_some(points) });
    }
    if let Some(request) = &options.oracle {
        let direction = request
            .direction
            .clone()
            .or_else(|| alpha.minimizers.first().cloned())
            .unwrap_or_else(|| RatVector::zeros(fan.dim()));
        let exact_predicate = exact_convergence_predicate(&polytope, &request.alpha, &direction)?;
        let pot = PotentialData::from_polytope(&polytope)?;
        let alpha_f = num_traits::ToPrimitive::to_f64(&request.alpha).unwrap_or(f64::NAN);
        let numerical =
            model_integral_estimate(&pot, alpha_f, &direction.to_f64(), &request.cutoffs, &request.config)?;
        doc.oracle = Some(OracleSection {
            alpha: request.alpha.clone(),
            direction,
            exact_predicate,
            numerical,
            config: request.config,
        });
    }
    doc.alpha = Some(alpha);
    Ok(doc)
}
