#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toric_alpha::{FanData, IntMatrix};

/// Random element of GL(n, Z) as a product of elementary row operations,
/// swaps and sign changes. Entries stay small for modest `steps`.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        match rng.gen_range(0..4) {
            0 | 1 if i != j => {
                let c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
                for k in 0..n {
                    rows[i][k] += c * rows[j][k];
                }
            }
            2 => rows.swap(i, j),
            _ => rows[i].iter_mut().for_each(|x| *x = -*x),
        }
    }
    IntMatrix::from_rows(&rows).unwrap()
}

pub fn fan(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> FanData {
    FanData::new(dim, rays.iter().map(|r| r.to_vec()).collect(), cones.iter().map(|c| c.to_vec()).collect())
        .unwrap()
}

/// Product fan of `a` and `b` in the direct sum of their lattices.
pub fn product(a: &FanData, b: &FanData) -> FanData {
    let (da, db) = (a.dim(), b.dim());
    let zero = BigInt::from(0);
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    for r in a.rays() {
        rays.push(r.iter().cloned().chain(std::iter::repeat(zero.clone()).take(db)).collect());
    }
    for r in b.rays() {
        rays.push(std::iter::repeat(zero.clone()).take(da).chain(r.iter().cloned()).collect());
    }
    let offset = a.rays().len();
    let mut cones = Vec::new();
    for ca in a.max_cones() {
        for cb in b.max_cones() {
            cones.push(ca.iter().copied().chain(cb.iter().map(|&j| j + offset)).collect::<Vec<_>>());
        }
    }
    FanData::new(da + db, rays, cones).unwrap()
}

pub fn p1() -> FanData {
    fan(1, &[&[1], &[-1]], &[&[0], &[1]])
}

pub fn p3() -> FanData {
    fan(
        3,
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
        &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
    )
}

/// P^3 blown up at the fixed point of the cone spanned by e1, e2, e3.
pub fn p3_blown_up_at_point() -> FanData {
    fan(
        3,
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1], &[1, 1, 1]],
        &[&[0, 1, 4], &[0, 2, 4], &[1, 2, 4], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
    )
}

/// Three-dimensional Fano fans with known symmetry type: `(name, fan, symmetric)`.
pub fn three_folds() -> Vec<(&'static str, FanData, bool)> {
    let cat = |n: &str| toric_alpha::catalog_entry(n).unwrap().fan;
    vec![
        ("p3", p3(), true),
        ("p1^3", product(&product(&p1(), &p1()), &p1()), true),
        ("p1 x p2", product(&p1(), &cat("p2")), true),
        ("p1 x dp3", product(&p1(), &cat("dp3")), true),
        ("p1 x dp1", product(&p1(), &cat("dp1")), false),
        ("p1 x dp2", product(&p1(), &cat("dp2")), false),
        ("bl_p p3", p3_blown_up_at_point(), false),
    ]
}
