//! Complete regular fans and the checks that decide whether a fan defines a
//! smooth toric Fano manifold.
//!
//! Rays live in the lattice `N`; the anticanonical polytope built from them
//! lives in the dual lattice `M` (see [`crate::polytope`]).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{IntMatrix, RatMatrix, RatVector};
use crate::polytope;
use crate::serde_util;

/// Largest lattice rank accepted unless a caller asks for more.
pub const DEFAULT_MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("lattice rank must be positive")]
    ZeroDimension,
    #[error("lattice rank {dim} exceeds the configured maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("ray {index} has {found} coordinates, expected {expected}")]
    RayDimension { index: usize, expected: usize, found: usize },
    #[error("zero ray at index {index}")]
    ZeroRay { index: usize },
    #[error("non-primitive ray at index {index}")]
    NonPrimitiveRay { index: usize },
    #[error("duplicate ray at index {index} (same as ray {first})")]
    DuplicateRay { index: usize, first: usize },
    #[error("fan has no maximal cones")]
    NoCones,
    #[error("cone {cone} has {found} generators, expected {expected}")]
    ConeSize { cone: usize, expected: usize, found: usize },
    #[error("cone {cone} references ray index {ray}, which is out of range")]
    RayIndexOutOfRange { cone: usize, ray: usize },
    #[error("cone {cone} lists ray {ray} more than once")]
    RepeatedRay { cone: usize, ray: usize },
    #[error("duplicate maximal cone at index {cone} (same as cone {first})")]
    DuplicateCone { cone: usize, first: usize },
    #[error("cone {cone} has linearly dependent generators")]
    DegenerateCone { cone: usize },
    #[error("ray {index} is not contained in any maximal cone")]
    UnusedRay { index: usize },
    #[error("transformation is not a unimodular {dim}x{dim} matrix")]
    BadTransform { dim: usize },
}

/// A simplicial fan given by primitive ray generators and maximal cones.
///
/// Construction enforces the structural invariants: primitive, pairwise
/// distinct rays; cones of exactly `dim` distinct in-range rays with
/// linearly independent generators; every ray used. Whether the fan is
/// complete, regular or Fano is decided separately by [`validate_fan`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanData {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    max_cones: Vec<Vec<usize>>,
}

impl FanData {
    pub fn new<T: Clone + Into<BigInt>>(
        dim: usize,
        rays: Vec<Vec<T>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Self, FanError> {
        Self::with_max_dim(dim, rays, max_cones, DEFAULT_MAX_DIM)
    }

    pub fn with_max_dim<T: Clone + Into<BigInt>>(
        dim: usize,
        rays: Vec<Vec<T>>,
        max_cones: Vec<Vec<usize>>,
        max_dim: usize,
    ) -> Result<Self, FanError> {
        if dim == 0 {
            return Err(FanError::ZeroDimension);
        }
        if dim > max_dim {
            return Err(FanError::DimensionTooLarge { dim, max: max_dim });
        }
        let rays: Vec<Vec<BigInt>> = rays
            .into_iter()
            .map(|r| r.into_iter().map(Into::into).collect())
            .collect();

        let mut seen_rays = BTreeMap::new();
        for (index, ray) in rays.iter().enumerate() {
            if ray.len() != dim {
                return Err(FanError::RayDimension { index, expected: dim, found: ray.len() });
            }
            let content = ray.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
            if content.is_zero() {
                return Err(FanError::ZeroRay { index });
            }
            if content != BigInt::from(1) {
                return Err(FanError::NonPrimitiveRay { index });
            }
            if let Some(&first) = seen_rays.get(ray) {
                return Err(FanError::DuplicateRay { index, first });
            }
            seen_rays.insert(ray.clone(), index);
        }

        if max_cones.is_empty() {
            return Err(FanError::NoCones);
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        let mut seen_cones = BTreeMap::new();
        let mut used = vec![false; rays.len()];
        for (cone, indices) in max_cones.into_iter().enumerate() {
            if indices.len() != dim {
                return Err(FanError::ConeSize { cone, expected: dim, found: indices.len() });
            }
            let mut sorted = indices;
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(FanError::RepeatedRay { cone, ray: w[0] });
                }
            }
            if let Some(&ray) = sorted.iter().find(|&&r| r >= rays.len()) {
                return Err(FanError::RayIndexOutOfRange { cone, ray });
            }
            if let Some(&first) = seen_cones.get(&sorted) {
                return Err(FanError::DuplicateCone { cone, first });
            }
            let generators: Vec<&[BigInt]> = sorted.iter().map(|&r| rays[r].as_slice()).collect();
            let det = IntMatrix::from_columns(&generators)
                .and_then(|m| m.det())
                .map_err(|_| FanError::DegenerateCone { cone })?;
            if det.is_zero() {
                return Err(FanError::DegenerateCone { cone });
            }
            for &r in &sorted {
                used[r] = true;
            }
            seen_cones.insert(sorted.clone(), cone);
            cones.push(sorted);
        }
        if let Some(index) = used.iter().position(|u| !u) {
            return Err(FanError::UnusedRay { index });
        }

        Ok(FanData { dim, rays, max_cones: cones })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ray(&self, index: usize) -> &[BigInt] {
        &self.rays[index]
    }

    /// Maximal cones as sorted ray-index sets, in input order.
    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Generator matrix of a cone: column `j` is the `j`-th ray of the
    /// (sorted) cone.
    pub fn generator_matrix(&self, cone: usize) -> IntMatrix {
        let columns: Vec<&[BigInt]> =
            self.max_cones[cone].iter().map(|&r| self.rays[r].as_slice()).collect();
        IntMatrix::from_columns(&columns).expect("cone generators have the lattice rank")
    }

    pub fn ray_index(&self, ray: &[BigInt]) -> Option<usize> {
        self.rays.iter().position(|r| r.as_slice() == ray)
    }

    /// Image of the fan under a unimodular change of basis of `N`.
    pub fn transformed(&self, u: &IntMatrix) -> Result<FanData, FanError> {
        let ok = u.rows() == self.dim
            && u.cols() == self.dim
            && u.det().map(|d| d.abs() == BigInt::from(1)).unwrap_or(false);
        if !ok {
            return Err(FanError::BadTransform { dim: self.dim });
        }
        let rays = self.rays.iter().map(|r| u.apply(r)).collect();
        FanData::with_max_dim(self.dim, rays, self.max_cones.clone(), usize::MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FindingReason {
    /// Cone generators do not form a lattice basis.
    NotUnimodular {
        #[serde(serialize_with = "serde_util::bigint_str")]
        determinant: BigInt,
    },
    /// A ridge of a maximal cone is not shared by exactly two maximal cones.
    RidgeMultiplicity { ridge: Vec<usize>, count: usize },
    /// Two cones meeting along a ridge lie on the same side of it.
    FoldedRidge { ridge: Vec<usize>, other: usize },
    /// Maximal cones split into several components across shared ridges.
    Disconnected { component_size: usize },
    /// An interior point of this cone is also covered by another cone.
    Overlap { other: usize },
    /// The anticanonical polytope is not the one Demazure's criterion asks for.
    NotFano { detail: String },
}

impl fmt::Display for FindingReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FindingReason::NotUnimodular { determinant } => {
                write!(f, "generators have determinant {determinant}, not ±1")
            }
            FindingReason::RidgeMultiplicity { ridge, count } => {
                write!(f, "ridge {ridge:?} lies in {count} maximal cone(s), expected 2")
            }
            FindingReason::FoldedRidge { ridge, other } => {
                write!(f, "cone {other} lies on the same side of ridge {ridge:?}")
            }
            FindingReason::Disconnected { component_size } => {
                write!(f, "only {component_size} cone(s) reachable across shared ridges")
            }
            FindingReason::Overlap { other } => write!(f, "interior overlaps cone {other}"),
            FindingReason::NotFano { detail } => write!(f, "not Fano: {detail}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub cone: Option<usize>,
    pub reason: FindingReason,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cone {
            Some(c) => write!(f, "cone {c}: {}", self.reason),
            None => write!(f, "{}", self.reason),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanDiagnosis {
    pub is_complete: bool,
    pub is_regular: bool,
    pub is_fano: bool,
    pub failures: Vec<Finding>,
}

/// Maps each ridge (sorted ray-index set of size `dim - 1`) to the maximal
/// cones containing it, in cone order.
pub fn ridge_adjacency(fan: &FanData) -> BTreeMap<Vec<usize>, Vec<usize>> {
    let mut ridges: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (c, cone) in fan.max_cones.iter().enumerate() {
        for skip in 0..cone.len() {
            let ridge: Vec<usize> =
                cone.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &r)| r).collect();
            ridges.entry(ridge).or_default().push(c);
        }
    }
    ridges
}

pub(crate) fn regularity_findings(fan: &FanData) -> Vec<Finding> {
    (0..fan.max_cones.len())
        .filter_map(|c| {
            let det = fan.generator_matrix(c).det().expect("square generator matrix");
            (det.abs() != BigInt::from(1)).then(|| Finding {
                cone: Some(c),
                reason: FindingReason::NotUnimodular { determinant: det },
            })
        })
        .collect()
}

/// Ridge multiplicity, opposite-side and connectivity checks, plus one
/// exact overlap test at an interior point of cone 0. Together these rule
/// out gaps, folds and multiple coverings of `N_R`.
pub(crate) fn completeness_findings(fan: &FanData) -> Vec<Finding> {
    let mut findings = Vec::new();
    let ridges = ridge_adjacency(fan);
    let mut neighbours = vec![Vec::new(); fan.max_cones.len()];

    for (ridge, cones) in &ridges {
        if cones.len() != 2 {
            findings.push(Finding {
                cone: Some(cones[0]),
                reason: FindingReason::RidgeMultiplicity { ridge: ridge.clone(), count: cones.len() },
            });
            continue;
        }
        let (a, b) = (cones[0], cones[1]);
        neighbours[a].push(b);
        neighbours[b].push(a);
        if !opposite_sides(fan, ridge, a, b) {
            findings.push(Finding {
                cone: Some(a),
                reason: FindingReason::FoldedRidge { ridge: ridge.clone(), other: b },
            });
        }
    }

    let mut reached = vec![false; fan.max_cones.len()];
    let mut queue = VecDeque::from([0]);
    reached[0] = true;
    while let Some(c) = queue.pop_front() {
        for &d in &neighbours[c] {
            if !reached[d] {
                reached[d] = true;
                queue.push_back(d);
            }
        }
    }
    let component_size = reached.iter().filter(|&&r| r).count();
    if component_size != fan.max_cones.len() {
        findings.push(Finding { cone: None, reason: FindingReason::Disconnected { component_size } });
    }

    let interior: RatVector = {
        let b0 = fan.generator_matrix(0);
        let sum: Vec<BigInt> = (0..fan.dim).map(|i| b0.row(i).iter().sum()).collect();
        RatVector::from_ints(&sum)
    };
    for other in 1..fan.max_cones.len() {
        let coeffs = fan
            .generator_matrix(other)
            .to_rational()
            .solve_square(&interior)
            .expect("maximal cones are non-degenerate");
        if coeffs.coords().iter().all(|c| !c.is_negative()) {
            findings.push(Finding { cone: Some(0), reason: FindingReason::Overlap { other } });
        }
    }
    findings
}

/// Whether the generators of `a` and `b` outside `ridge` lie strictly on
/// opposite sides of the hyperplane spanned by the ridge.
fn opposite_sides(fan: &FanData, ridge: &[usize], a: usize, b: usize) -> bool {
    let mut rows = RatMatrix::with_cols(fan.dim);
    for &r in ridge {
        rows.push_row(RatVector::from_ints(&fan.rays[r]).coords()).expect("ray length");
    }
    let normal = rows.kernel_basis();
    debug_assert_eq!(normal.len(), 1);
    let ridge_set: BTreeSet<usize> = ridge.iter().copied().collect();
    let apex = |c: usize| {
        let r = fan.max_cones[c].iter().find(|r| !ridge_set.contains(r)).copied().unwrap();
        normal[0].pair(&fan.rays[r])
    };
    let (sa, sb) = (apex(a), apex(b));
    (sa.is_positive() && sb.is_negative()) || (sa.is_negative() && sb.is_positive())
}

/// Decides completeness, regularity and the Fano property.
pub fn validate_fan(fan: &FanData) -> FanDiagnosis {
    let mut failures = regularity_findings(fan);
    let is_regular = failures.is_empty();
    let completeness = completeness_findings(fan);
    let is_complete = completeness.is_empty();
    failures.extend(completeness);

    let mut is_fano = false;
    if is_regular && is_complete {
        match polytope::build_polytope(fan) {
            Ok(_) => is_fano = true,
            Err(err) => failures.push(Finding {
                cone: err.cone(),
                reason: FindingReason::NotFano { detail: err.to_string() },
            }),
        }
    }
    FanDiagnosis { is_complete, is_regular, is_fano, failures }
}
