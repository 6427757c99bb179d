mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_alpha::linalg::rat;
use toric_alpha::oracle::exact_convergence_predicate;
use toric_alpha::*;

fn small_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, n), n)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(p, q)| rat(p, q))
}

fn rat_vector(n: usize) -> impl Strategy<Value = RatVector> {
    prop::collection::vec(rational(), n).prop_map(RatVector::new)
}

fn rat_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(rat_vector(cols), rows).prop_map(|r| RatMatrix::from_rows(&r).unwrap())
}

fn catalog_polytope() -> impl Strategy<Value = AnticanonicalPolytope> {
    prop::sample::select(catalog_names()).prop_map(|n| build_polytope(&catalog_entry(n).unwrap().fan).unwrap())
}

proptest! {
    #[test]
    fn det_is_multiplicative(a in small_matrix(3), b in small_matrix(3)) {
        let a = IntMatrix::from_rows(&a).unwrap();
        let b = IntMatrix::from_rows(&b).unwrap();
        prop_assert_eq!(a.mul(&b).det().unwrap(), a.det().unwrap() * b.det().unwrap());
        prop_assert_eq!(a.transpose().det().unwrap(), a.det().unwrap());
        prop_assert_eq!(a.to_rational().det().unwrap(), Rational::from_integer(a.det().unwrap()));
    }

    #[test]
    fn solve_round_trip(a in rat_matrix(3, 3), x in rat_vector(3)) {
        let b = a.mul_vec(&x);
        match a.solve_square(&b) {
            Ok(sol) => prop_assert_eq!(sol, x),
            Err(_) => prop_assert!(a.det().unwrap().is_zero()),
        }
    }

    #[test]
    fn kernel_is_annihilated(a in rat_matrix(2, 4), extra in rat_vector(4)) {
        // a dependent third row keeps the rank below the number of rows sometimes
        let mut rows: Vec<RatVector> = (0..2).map(|i| RatVector::new(a.row(i).to_vec())).collect();
        rows.push(&rows[0] + &rows[1]);
        rows.push(extra);
        let m = RatMatrix::from_rows(&rows).unwrap();
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for k in &kernel {
            prop_assert!(m.mul_vec(k).is_zero());
            prop_assert!(k.is_integral());
        }
        if !kernel.is_empty() {
            prop_assert_eq!(RatMatrix::from_rows(&kernel).unwrap().rank(), kernel.len());
        }
    }

    #[test]
    fn gauge_is_homogeneous_and_subadditive(
        p in catalog_polytope(),
        x in rat_vector(2),
        y in rat_vector(2),
        t in (0i64..=12, 1i64..=5),
    ) {
        let t = rat(t.0, t.1);
        prop_assert_eq!(p.gauge(&x.scale(&t)), &t * p.gauge(&x));
        prop_assert!(p.gauge(&(&x + &y)) <= p.gauge(&x) + p.gauge(&y));
        prop_assert!(p.gauge(&x) >= Rational::zero());
    }

    #[test]
    fn predicate_is_monotone(p in catalog_polytope(), v in rat_vector(2), a in 1i64..99, b in 1i64..99) {
        let (lo, hi) = (a.min(b), a.max(b));
        if exact_convergence_predicate(&p, &rat(hi, 100), &v).unwrap() {
            prop_assert!(exact_convergence_predicate(&p, &rat(lo, 100), &v).unwrap());
        }
    }

    #[test]
    fn relabelling_changes_nothing(name in prop::sample::select(catalog_names()), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let fan = catalog_entry(name).unwrap().fan;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..fan.rays().len()).collect();
        order.shuffle(&mut rng);
        let mut position = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let rays: Vec<Vec<BigInt>> = order.iter().map(|&i| fan.ray(i).to_vec()).collect();
        let mut cones: Vec<Vec<usize>> =
            fan.max_cones().iter().map(|c| c.iter().map(|&i| position[i]).collect()).collect();
        cones.shuffle(&mut rng);
        let relabelled = FanData::new(2, rays, cones).unwrap();

        let (a, b) = (validate_fan(&fan), validate_fan(&relabelled));
        prop_assert_eq!((a.is_complete, a.is_regular, a.is_fano), (b.is_complete, b.is_regular, b.is_fano));
        let (a, b) = (alpha_g(&fan).unwrap(), alpha_g(&relabelled).unwrap());
        prop_assert_eq!(a.alpha, b.alpha);
        prop_assert_eq!(a.t_star, b.t_star);
        prop_assert_eq!(a.minimizers, b.minimizers);
        prop_assert_eq!(weyl_group(&fan), weyl_group(&relabelled));
    }
}

#[test]
fn diagnosis_is_basis_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let broken = common::fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2]]);
    let f2 = common::fan(2, &[&[1, 0], &[0, 1], &[-1, 2], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]]);
    let mut fans: Vec<FanData> = catalog().into_iter().map(|e| e.fan).collect();
    fans.extend([broken, f2]);
    for fan in fans {
        let base = validate_fan(&fan);
        for _ in 0..20 {
            let u = common::random_unimodular(&mut rng, 2, 10);
            let moved = validate_fan(&fan.transformed(&u).unwrap());
            assert_eq!(moved, base);
        }
    }
}

#[test]
fn certificates_are_sound() {
    for entry in catalog() {
        let stable = toric_alpha::alpha::stable_set_data(&entry.fan).unwrap();
        let report = alpha_g(&entry.fan).unwrap();
        let Some(sec) = stable.section else {
            assert!(report.certificate.is_empty());
            continue;
        };
        let t_star = report.t_star.clone().unwrap();
        let vertices: BTreeSet<RatVector> = sec.vertices_ambient().into_iter().collect();
        let listed: BTreeSet<RatVector> = report.certificate.iter().map(|c| c.vertex.clone()).collect();
        assert_eq!(listed, vertices);
        let mut minimizers = BTreeSet::new();
        for entry in &report.certificate {
            assert_eq!(entry.opposite_gauge, stable.polytope.gauge(&-&entry.vertex));
            assert_eq!(stable.polytope.gauge(&entry.vertex), Rational::one());
            assert_eq!(entry.ratio, entry.opposite_gauge.recip());
            assert!(entry.ratio >= t_star);
            if entry.ratio == t_star {
                minimizers.insert(entry.vertex.clone());
            }
        }
        assert_eq!(minimizers, report.minimizers.iter().cloned().collect());
        assert!(toric_alpha::alpha::report_is_consistent(&report));
        assert_eq!(report.alpha, &t_star / (Rational::one() + &t_star));
    }
}

#[test]
fn three_folds_follow_the_dichotomy() {
    let half = rat(1, 2);
    for (name, fan, symmetric) in common::three_folds() {
        let diagnosis = validate_fan(&fan);
        assert!(diagnosis.is_fano, "{name}: {:?}", diagnosis.failures);
        assert_eq!(is_symmetric(&fan), symmetric, "{name}");
        let report = alpha_g(&fan).unwrap();
        assert_eq!(report.alpha.is_one(), symmetric, "{name}: alpha {}", report.alpha);
        if !symmetric {
            assert!(report.alpha <= half, "{name}: alpha {}", report.alpha);
        }
        let p = build_polytope(&fan).unwrap();
        assert_eq!(p.vertices().len(), fan.max_cones().len(), "{name}");
        assert_eq!(barycenter(&p).is_zero(), symmetric, "{name}");
    }
}

#[test]
fn three_fold_values() {
    let folds = common::three_folds();
    let get = |n: &str| alpha_g(&folds.iter().find(|f| f.0 == n).unwrap().1).unwrap();
    // a product is only as symmetric as its least symmetric factor
    assert_eq!(get("p1 x dp1").alpha, rat(1, 2));
    assert_eq!(get("p1 x dp2").alpha, rat(1, 3));
    assert_eq!(get("p1 x dp2").m_zero, Some(BigInt::from(1)));
    // the stable segment s(1, 1, 1), |s| <= 1/3, is centrally symmetric
    let blown_up = get("bl_p p3");
    assert_eq!(blown_up.t_star, Some(Rational::one()));
    assert_eq!(blown_up.alpha, rat(1, 2));
    assert_eq!(blown_up.m_zero, Some(BigInt::from(3)));
}

#[test]
fn three_fold_lattice_points() {
    let p3 = build_polytope(&common::p3()).unwrap();
    assert_eq!(lattice_points(&p3, 1).unwrap().len(), 35);
    assert_eq!(p3.volume(), rat(64, 6));
    let cube = build_polytope(&common::product(&common::product(&common::p1(), &common::p1()), &common::p1())).unwrap();
    assert_eq!(lattice_points(&cube, 1).unwrap().len(), 27);
    assert_eq!(lattice_points(&cube, 2).unwrap().len(), 125);
    assert_eq!(cube.volume(), rat(8, 1));
}

#[test]
fn three_fold_groups() {
    let folds = common::three_folds();
    let order = |n: &str| weyl_group(&folds.iter().find(|f| f.0 == n).unwrap().1).order();
    assert_eq!(order("p3"), 24);
    assert_eq!(order("p1^3"), 48);
    assert_eq!(order("p1 x p2"), 12);
    assert_eq!(order("bl_p p3"), 6);
}
