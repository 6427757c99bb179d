//! The anticanonical polytope `{a in M_R : <a, b_rho> <= 1}` of a Fano fan
//! and exact queries on it.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::fan::{self, FanData};
use crate::linalg::{rat_from_int, RatMatrix, RatVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("cone {cone} is not generated by a lattice basis")]
    NotRegular { cone: usize },
    #[error("fan is not complete: {detail}")]
    NotComplete { cone: Option<usize>, detail: String },
    #[error("vertex of cone {cone} violates the inequality of ray {ray} (pairing {value})")]
    VertexOutside { cone: usize, ray: usize, value: Rational },
    #[error("vertex of cone {cone} lies on the facet of ray {ray}, which does not generate the cone")]
    ExtraSaturation { cone: usize, ray: usize },
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("expected a vector of dimension {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("subspace basis is empty or linearly dependent")]
    DependentBasis,
    #[error("dilation factor must be at least 1")]
    NonPositiveDilation,
    #[error("lattice-point search box does not fit in machine integers or exceeds {limit} points")]
    BoxTooLarge { limit: u64 },
}

impl PolytopeError {
    pub fn cone(&self) -> Option<usize> {
        match self {
            PolytopeError::NotRegular { cone }
            | PolytopeError::VertexOutside { cone, .. }
            | PolytopeError::ExtraSaturation { cone, .. } => Some(*cone),
            PolytopeError::NotComplete { cone, .. } => *cone,
            _ => None,
        }
    }
}

/// Upper bound on the number of candidate points scanned by [`lattice_points`].
pub const LATTICE_BOX_LIMIT: u64 = 50_000_000;

/// Minkowski gauge of a polytope containing the origin in its interior.
///
/// `gauge(x) < 1` for interior points, `= 1` on the boundary, `> 1` outside.
pub trait Gauge {
    /// Dimension of the space the gauge is evaluated on.
    fn space_dim(&self) -> usize;

    fn gauge(&self, x: &RatVector) -> Rational;

    /// The point where the ray from the origin through `direction` leaves
    /// the polytope.
    fn ray_boundary_point(&self, direction: &RatVector) -> Result<RatVector, PolytopeError> {
        if direction.dim() != self.space_dim() {
            return Err(PolytopeError::Dimension { expected: self.space_dim(), found: direction.dim() });
        }
        if direction.is_zero() {
            return Err(PolytopeError::ZeroDirection);
        }
        let g = self.gauge(direction);
        Ok(direction.scale(&g.recip()))
    }

    fn contains(&self, x: &RatVector) -> bool {
        self.gauge(x) <= Rational::one()
    }
}

// Bounded polytope: the maximum is positive for every nonzero argument, so
// starting the fold at zero only matters at the origin.
fn max_pairing(pairings: impl Iterator<Item = Rational>) -> Rational {
    pairings.fold(Rational::zero(), |m, v| if v > m { v } else { m })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnticanonicalPolytope {
    dim: usize,
    facet_normals: Vec<Vec<BigInt>>,
    vertices: Vec<RatVector>,
    vertex_cones: Vec<usize>,
}

impl AnticanonicalPolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// One normal per ray of the fan; every right-hand side is 1.
    pub fn facet_normals(&self) -> &[Vec<BigInt>] {
        &self.facet_normals
    }

    /// Vertices `a_tau`, in maximal-cone order.
    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    /// Maximal cone each vertex was computed from.
    pub fn vertex_cones(&self) -> &[usize] {
        &self.vertex_cones
    }

    /// Indices of the facets a point lies on.
    pub fn saturated_facets(&self, x: &RatVector) -> Vec<usize> {
        let one = Rational::one();
        (0..self.facet_normals.len())
            .filter(|&r| x.pair(&self.facet_normals[r]) == one)
            .collect()
    }

    /// Euclidean volume.
    pub fn volume(&self) -> Rational {
        let (volume, _) = self.volume_and_moment();
        volume
    }

    /// Returns the total volume and the first moment `sum vol(T) * centroid(T)`
    /// over a pulling triangulation.
    fn volume_and_moment(&self) -> (Rational, RatVector) {
        let order: Vec<usize> = (0..self.vertices.len())
            .sorted_by(|&a, &b| self.vertices[a].cmp(&self.vertices[b]))
            .collect();
        let incidence: Vec<BTreeSet<usize>> = self
            .facet_normals
            .iter()
            .map(|b| {
                (0..self.vertices.len())
                    .filter(|&v| self.vertices[v].pair(b).is_one())
                    .collect()
            })
            .collect();
        let all: BTreeSet<usize> = (0..self.vertices.len()).collect();
        let simplices = pulling_triangulation(&self.vertices, &order, &incidence, &all, self.dim);

        let scale = rat_from_int(&factorial(self.dim));
        let mut volume = Rational::zero();
        let mut moment = RatVector::zeros(self.dim);
        let count = Rational::from_integer(BigInt::from(self.dim + 1));
        for simplex in simplices {
            let base = &self.vertices[simplex[0]];
            let rows: Vec<RatVector> =
                simplex[1..].iter().map(|&v| &self.vertices[v] - base).collect();
            let vol = RatMatrix::from_rows(&rows).unwrap().det().unwrap().abs() / &scale;
            let sum = simplex
                .iter()
                .fold(RatVector::zeros(self.dim), |acc, &v| &acc + &self.vertices[v]);
            moment = &moment + &sum.scale(&(&vol / &count));
            volume += vol;
        }
        (volume, moment)
    }
}

impl Gauge for AnticanonicalPolytope {
    fn space_dim(&self) -> usize {
        self.dim
    }

    fn gauge(&self, x: &RatVector) -> Rational {
        max_pairing(self.facet_normals.iter().map(|b| x.pair(b)))
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn affine_rank(points: &[RatVector], subset: &BTreeSet<usize>) -> usize {
    let mut it = subset.iter();
    let Some(&first) = it.next() else { return 0 };
    let rows: Vec<RatVector> = it.map(|&v| &points[v] - &points[first]).collect();
    if rows.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(&rows).unwrap().rank()
}

/// Triangulates the face with vertex set `face` (of dimension `dim`) by
/// coning its smallest vertex over the triangulations of the facets of the
/// face that do not contain it.
fn pulling_triangulation(
    points: &[RatVector],
    order: &[usize],
    incidence: &[BTreeSet<usize>],
    face: &BTreeSet<usize>,
    dim: usize,
) -> Vec<Vec<usize>> {
    let anchor = *order.iter().find(|v| face.contains(v)).expect("nonempty face");
    if dim == 0 {
        return vec![vec![anchor]];
    }
    let mut subfaces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for facet in incidence {
        let sub: BTreeSet<usize> = face.intersection(facet).copied().collect();
        if !sub.contains(&anchor) && sub.len() >= dim && affine_rank(points, &sub) == dim - 1 {
            subfaces.insert(sub);
        }
    }
    let mut simplices = Vec::new();
    for sub in &subfaces {
        for mut simplex in pulling_triangulation(points, order, incidence, sub, dim - 1) {
            simplex.insert(0, anchor);
            simplices.push(simplex);
        }
    }
    simplices
}

/// Builds the anticanonical polytope of a fan and checks Demazure's
/// characterization: the vertices are exactly the points `a_tau` with
/// `<a_tau, b> = 1` on the generators of `tau`, and `a_tau` is strictly
/// inside every other facet.
pub fn build_polytope(fan: &FanData) -> Result<AnticanonicalPolytope, PolytopeError> {
    if let Some(f) = fan::regularity_findings(fan).first() {
        return Err(PolytopeError::NotRegular { cone: f.cone.unwrap_or(0) });
    }
    if let Some(f) = fan::completeness_findings(fan).first() {
        return Err(PolytopeError::NotComplete { cone: f.cone, detail: f.reason.to_string() });
    }
    let n = fan.dim();
    let ones = RatVector::new(vec![Rational::one(); n]);
    let mut vertices: Vec<RatVector> = Vec::with_capacity(fan.max_cones().len());
    let mut vertex_cones = Vec::with_capacity(fan.max_cones().len());
    for (c, cone) in fan.max_cones().iter().enumerate() {
        // rows are the generators: <a, b> = 1 for each b in the cone
        let rows = fan.generator_matrix(c).transpose().to_rational();
        let a = rows
            .solve_square(&ones)
            .map_err(|_| PolytopeError::NotRegular { cone: c })?;
        for (r, ray) in fan.rays().iter().enumerate() {
            let value = a.pair(ray);
            if value > Rational::one() {
                return Err(PolytopeError::VertexOutside { cone: c, ray: r, value });
            }
            if value.is_one() && !cone.contains(&r) {
                return Err(PolytopeError::ExtraSaturation { cone: c, ray: r });
            }
        }
        if !vertices.contains(&a) {
            vertices.push(a);
            vertex_cones.push(c);
        }
    }
    Ok(AnticanonicalPolytope {
        dim: n,
        facet_normals: fan.rays().to_vec(),
        vertices,
        vertex_cones,
    })
}

/// Intersection of the polytope with a linear subspace, written in the
/// coordinates of a chosen subspace basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionPolytope {
    ambient_dim: usize,
    basis: Vec<RatVector>,
    facets: Vec<RatVector>,
    vertices: Vec<RatVector>,
}

impl SectionPolytope {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn subspace_basis(&self) -> &[RatVector] {
        &self.basis
    }

    /// Irredundant facet normals in subspace coordinates; every right-hand
    /// side is 1.
    pub fn induced_facets(&self) -> &[RatVector] {
        &self.facets
    }

    /// Vertices in subspace coordinates, lexicographically sorted.
    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    /// Maps subspace coordinates to the ambient space.
    pub fn lift(&self, y: &RatVector) -> RatVector {
        assert_eq!(y.dim(), self.dim(), "subspace coordinate length");
        self.basis
            .iter()
            .zip(y.coords())
            .fold(RatVector::zeros(self.ambient_dim), |acc, (b, c)| &acc + &b.scale(c))
    }

    pub fn vertices_ambient(&self) -> Vec<RatVector> {
        self.vertices.iter().map(|v| self.lift(v)).collect()
    }
}

impl Gauge for SectionPolytope {
    fn space_dim(&self) -> usize {
        self.dim()
    }

    fn gauge(&self, y: &RatVector) -> Rational {
        max_pairing(self.facets.iter().map(|c| y.dot(c)))
    }
}

/// Vertices of `{y : <y, c> <= 1 for c in normals}` in dimension `d`, by
/// intersecting every `d`-subset of facet hyperplanes.
fn enumerate_vertices(normals: &[RatVector], d: usize) -> BTreeSet<RatVector> {
    let ones = RatVector::new(vec![Rational::one(); d]);
    let one = Rational::one();
    let mut found = BTreeSet::new();
    for subset in (0..normals.len()).combinations(d) {
        let rows: Vec<RatVector> = subset.iter().map(|&i| normals[i].clone()).collect();
        let Ok(y) = RatMatrix::from_rows(&rows).unwrap().solve_square(&ones) else {
            continue;
        };
        if normals.iter().all(|c| y.dot(c) <= one) {
            found.insert(y);
        }
    }
    found
}

/// Intersects the polytope with `span(subspace_basis)`.
pub fn section(
    p: &AnticanonicalPolytope,
    subspace_basis: &[RatVector],
) -> Result<SectionPolytope, PolytopeError> {
    let d = subspace_basis.len();
    if let Some(bad) = subspace_basis.iter().find(|b| b.dim() != p.dim) {
        return Err(PolytopeError::Dimension { expected: p.dim, found: bad.dim() });
    }
    if d == 0 || RatMatrix::from_rows(subspace_basis).unwrap().rank() != d {
        return Err(PolytopeError::DependentBasis);
    }

    let mut normals: Vec<RatVector> = Vec::new();
    for b in &p.facet_normals {
        let c = RatVector::new(subspace_basis.iter().map(|u| u.pair(b)).collect());
        if !c.is_zero() && !normals.contains(&c) {
            normals.push(c);
        }
    }
    let vertex_set = enumerate_vertices(&normals, d);
    let vertices: Vec<RatVector> = vertex_set.into_iter().collect();

    // A bounded full-dimensional polytope is cut out by its facets alone: keep
    // an inequality iff the vertices on it span a hyperplane.
    let one = Rational::one();
    let facets = normals
        .into_iter()
        .filter(|c| {
            let tight: BTreeSet<usize> =
                (0..vertices.len()).filter(|&v| vertices[v].dot(c) == one).collect();
            tight.len() >= d && affine_rank(&vertices, &tight) == d - 1
        })
        .collect();

    Ok(SectionPolytope { ambient_dim: p.dim, basis: subspace_basis.to_vec(), facets, vertices })
}

/// Lattice points of the dilation `m * Sigma`, i.e. integer `x` with
/// `<x, b_rho> <= m` for every ray, sorted lexicographically.
pub fn lattice_points(p: &AnticanonicalPolytope, m: u64) -> Result<Vec<Vec<i64>>, PolytopeError> {
    if m == 0 {
        return Err(PolytopeError::NonPositiveDilation);
    }
    let too_large = PolytopeError::BoxTooLarge { limit: LATTICE_BOX_LIMIT };
    let scale = Rational::from_integer(BigInt::from(m));
    let mut lo = Vec::with_capacity(p.dim);
    let mut hi = Vec::with_capacity(p.dim);
    for i in 0..p.dim {
        let coords = p.vertices.iter().map(|v| &v.coords()[i] * &scale);
        let (min, max) = coords.minmax().into_option().expect("polytope has vertices");
        lo.push(min.floor().to_integer().to_i64().ok_or(too_large.clone())?);
        hi.push(max.ceil().to_integer().to_i64().ok_or(too_large.clone())?);
    }
    let mut total: u64 = 1;
    for (l, h) in lo.iter().zip(&hi) {
        let width = u64::try_from(h - l + 1).map_err(|_| too_large.clone())?;
        total = total.checked_mul(width).ok_or(too_large.clone())?;
    }
    if total > LATTICE_BOX_LIMIT {
        return Err(too_large);
    }
    let normals: Vec<Vec<i128>> = p
        .facet_normals
        .iter()
        .map(|b| b.iter().map(|c| c.to_i128()).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()
        .ok_or(too_large)?;
    let bound = m as i128;

    let mut points = Vec::new();
    let mut x = lo.clone();
    loop {
        let inside = normals.iter().all(|b| {
            b.iter().zip(&x).map(|(c, &xi)| c * xi as i128).sum::<i128>() <= bound
        });
        if inside {
            points.push(x.clone());
        }
        // odometer, last coordinate fastest: lexicographic order
        let mut k = p.dim;
        loop {
            if k == 0 {
                return Ok(points);
            }
            k -= 1;
            if x[k] < hi[k] {
                x[k] += 1;
                break;
            }
            x[k] = lo[k];
        }
    }
}

/// Exact centroid of the polytope.
pub fn barycenter(p: &AnticanonicalPolytope) -> RatVector {
    let (volume, moment) = p.volume_and_moment();
    moment.scale(&volume.recip())
}
