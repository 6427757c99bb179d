//! The finite group of lattice automorphisms of a fan and its fixed
//! subspaces.
//!
//! Elements act on `N` (the ray lattice). The contragredient action on `M`
//! is the inverse transpose, which preserves the pairing and therefore the
//! anticanonical polytope.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::fan::FanData;
use crate::linalg::{IntMatrix, RatMatrix, RatVector, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    N,
    M,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryGroup {
    dim: usize,
    elements: Vec<IntMatrix>,
}

impl SymmetryGroup {
    /// Wraps an explicit list of matrices, sorted and deduplicated. No group
    /// axioms are checked here.
    pub fn from_elements(dim: usize, elements: impl IntoIterator<Item = IntMatrix>) -> Self {
        let set: BTreeSet<IntMatrix> = elements.into_iter().collect();
        SymmetryGroup { dim, elements: set.into_iter().collect() }
    }

    pub fn trivial(dim: usize) -> Self {
        SymmetryGroup { dim, elements: vec![IntMatrix::identity(dim)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements acting on `N`, in lexicographic order of their entries.
    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    /// Elements in the contragredient action on `M`.
    pub fn dual_elements(&self) -> Vec<IntMatrix> {
        self.elements.iter().map(dual).collect()
    }

    pub fn contains(&self, g: &IntMatrix) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Closure under products and inverses, and presence of the identity.
    pub fn satisfies_group_axioms(&self) -> bool {
        let identity = IntMatrix::identity(self.dim);
        self.contains(&identity)
            && self.elements.iter().all(|g| {
                g.inverse_unimodular().map(|inv| self.contains(&inv)).unwrap_or(false)
            })
            && self
                .elements
                .iter()
                .cartesian_product(&self.elements)
                .all(|(a, b)| self.contains(&a.mul(b)))
    }
}

/// Inverse transpose of a unimodular matrix.
pub fn dual(g: &IntMatrix) -> IntMatrix {
    g.inverse_unimodular().expect("group elements are unimodular").transpose()
}

/// Enumerates every lattice automorphism of the fan.
///
/// An automorphism is determined by where it sends the generators of one
/// reference cone, so it suffices to try each maximal cone with each
/// ordering of its generators.
pub fn weyl_group(fan: &FanData) -> SymmetryGroup {
    let n = fan.dim();
    let reference = fan.generator_matrix(0);
    let reference_inv = reference
        .to_rational()
        .inverse()
        .expect("maximal cones are non-degenerate");
    let rays: BTreeSet<&[BigInt]> = fan.rays().iter().map(Vec::as_slice).collect();
    let cones: BTreeSet<&Vec<usize>> = fan.max_cones().iter().collect();

    let candidates: Vec<(usize, Vec<usize>)> = (0..fan.max_cones().len())
        .flat_map(|c| (0..n).permutations(n).map(move |perm| (c, perm)))
        .collect();

    let accepted: Vec<IntMatrix> = candidates
        .par_iter()
        .filter_map(|(c, perm)| {
            let cone = &fan.max_cones()[*c];
            let columns: Vec<&[BigInt]> = perm.iter().map(|&j| fan.ray(cone[j])).collect();
            let target = IntMatrix::from_columns(&columns).ok()?.to_rational();
            let gamma = rational_product(&target, &reference_inv);
            let gamma = integral(&gamma)?;
            if !gamma.det().ok()?.abs().eq(&BigInt::from(1)) {
                return None;
            }
            // ray permutation
            let mut image = Vec::with_capacity(fan.rays().len());
            for ray in fan.rays() {
                let moved = gamma.apply(ray);
                if !rays.contains(moved.as_slice()) {
                    return None;
                }
                image.push(fan.ray_index(&moved)?);
            }
            for cone in fan.max_cones() {
                let mut mapped: Vec<usize> = cone.iter().map(|&r| image[r]).collect();
                mapped.sort_unstable();
                if !cones.contains(&mapped) {
                    return None;
                }
            }
            Some(gamma)
        })
        .collect();

    SymmetryGroup::from_elements(n, accepted)
}

fn rational_product(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let mut out = RatMatrix::with_cols(b.cols());
    for i in 0..a.rows() {
        let row: Vec<Rational> = (0..b.cols())
            .map(|j| (0..a.cols()).map(|k| a.get(i, k) * b.get(k, j)).sum())
            .collect();
        out.push_row(&row).expect("row length");
    }
    out
}

fn integral(m: &RatMatrix) -> Option<IntMatrix> {
    let mut entries = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for c in m.row(i) {
            if !c.is_integer() {
                return None;
            }
            entries.push(c.to_integer());
        }
    }
    IntMatrix::new(m.rows(), m.cols(), entries).ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedSpace {
    pub side: Side,
    /// Primitive integer basis, empty when only the origin is fixed.
    pub basis: Vec<RatVector>,
}

impl FixedSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Vectors fixed by every element, as the kernel of the stacked
/// matrices `rho(g) - I`.
pub fn fixed_space(group: &SymmetryGroup, side: Side) -> FixedSpace {
    let n = group.dim;
    let mut stacked = RatMatrix::with_cols(n);
    for g in &group.elements {
        let action = match side {
            Side::N => g.clone(),
            Side::M => dual(g),
        };
        for i in 0..n {
            let row: Vec<Rational> = (0..n)
                .map(|j| {
                    let mut e = Rational::from_integer(action.get(i, j).clone());
                    if i == j {
                        e -= Rational::from_integer(BigInt::from(1));
                    }
                    e
                })
                .collect();
            stacked.push_row(&row).expect("row length");
        }
    }
    FixedSpace { side, basis: stacked.kernel_basis() }
}

/// A fan is symmetric when its automorphism group fixes no nonzero
/// character.
pub fn is_symmetric(fan: &FanData) -> bool {
    let group = weyl_group(fan);
    let n_side = fixed_space(&group, Side::N);
    let m_side = fixed_space(&group, Side::M);
    assert_eq!(
        n_side.dim(),
        m_side.dim(),
        "a finite group and its contragredient have fixed spaces of equal dimension"
    );
    n_side.is_trivial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::build_polytope;

    fn fan(rays: &[[i64; 2]], cones: &[[usize; 2]]) -> FanData {
        FanData::new(2, rays.iter().map(|r| r.to_vec()).collect(), cones.iter().map(|c| c.to_vec()).collect())
            .unwrap()
    }

    fn p2() -> FanData {
        fan(&[[1, 0], [0, 1], [-1, -1]], &[[0, 1], [1, 2], [2, 0]])
    }

    fn dp1() -> FanData {
        fan(&[[1, 0], [0, 1], [1, 1], [-1, -1]], &[[0, 2], [2, 1], [1, 3], [3, 0]])
    }

    fn dp3() -> FanData {
        fan(
            &[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]],
            &[[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [5, 0]],
        )
    }

    #[test]
    fn group_orders() {
        assert_eq!(weyl_group(&p2()).order(), 6);
        assert_eq!(weyl_group(&dp3()).order(), 12);
        assert_eq!(weyl_group(&dp1()).order(), 2);
    }

    #[test]
    fn dp1_group_is_the_swap() {
        let g = weyl_group(&dp1());
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(g.contains(&swap));
        assert!(g.contains(&IntMatrix::identity(2)));
    }

    #[test]
    fn groups_are_closed() {
        for f in [p2(), dp1(), dp3()] {
            assert!(weyl_group(&f).satisfies_group_axioms());
        }
    }

    #[test]
    fn fixed_spaces() {
        let g = weyl_group(&p2());
        assert!(fixed_space(&g, Side::N).is_trivial());
        assert!(fixed_space(&g, Side::M).is_trivial());

        let g = weyl_group(&dp1());
        assert_eq!(fixed_space(&g, Side::M).basis, vec![RatVector::from_i64(&[1, 1])]);

        let t = SymmetryGroup::trivial(3);
        assert_eq!(fixed_space(&t, Side::N).dim(), 3);
        assert_eq!(fixed_space(&t, Side::M).dim(), 3);
    }

    #[test]
    fn symmetric_classification() {
        assert!(is_symmetric(&p2()));
        assert!(is_symmetric(&dp3()));
        assert!(!is_symmetric(&dp1()));
    }

    #[test]
    fn dual_action_preserves_vertices() {
        for f in [p2(), dp1(), dp3()] {
            let poly = build_polytope(&f).unwrap();
            let vertices: BTreeSet<RatVector> = poly.vertices().iter().cloned().collect();
            for g in weyl_group(&f).dual_elements() {
                for a in &vertices {
                    assert!(vertices.contains(&g.apply_rat(a)));
                }
            }
        }
    }
}
