//! Exact computation of the greatest Ricci lower bound of toric Fano
//! manifolds from their fans, with a numerical integral oracle.
//!
//! The pipeline is: [`FanData`] → [`build_polytope`] → [`weyl_group`] and
//! [`fixed_space`] → [`section`] → [`optimum_ratio`] → [`alpha_g`].

pub mod alpha;
pub mod catalog;
pub mod fan;
pub mod format;
pub mod linalg;
pub mod oracle;
pub mod polytope;
pub mod report;
mod serde_util;
pub mod symmetry;

pub use alpha::{alpha_g, alpha_m_report, m_zero, optimum_ratio, AlphaError, AlphaMRow, AlphaMValue, AlphaReport};
pub use catalog::{catalog, catalog_entry, catalog_names};
pub use fan::{validate_fan, FanData, FanDiagnosis, FanError, Finding, FindingReason};
pub use format::{input_digest, parse_fan, serialize_fan, FormatError, NamedFan};
pub use linalg::{parse_rational, IntMatrix, LinalgError, RatMatrix, RatVector, Rational};
pub use oracle::{OracleConfig, OracleError, PotentialData, Verdict};
pub use polytope::{
    barycenter, build_polytope, lattice_points, section, AnticanonicalPolytope, Gauge, PolytopeError,
    SectionPolytope,
};
pub use report::{build_report, OracleRequest, ReportDocument, ReportError, ReportOptions};
pub use symmetry::{fixed_space, is_symmetric, weyl_group, FixedSpace, Side, SymmetryGroup};
