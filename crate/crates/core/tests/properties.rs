use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbitmetric::applications::{bispectrum, bispectrum_map};
use orbitmetric::distortion::{
    circle_distortion, gaussian_vector, gram_to_embedding, sdp_distortion, unit_vector, FiniteMetric,
};
use orbitmetric::embeddings::{
    complex_phase_embed, homogeneous_extension, max_filter_map, power_map_embed, power_map_raw, radial_distance,
    real_projective_embed, sphere_lift,
};
use orbitmetric::linalg::{dist, norm_sq};
use orbitmetric::poly::{
    abelian_exponents, abelian_invariant, acts_freely_on_sphere, gradient_interpolate, local_immersion_poly,
    reynolds_average, AbelianExponents,
};
use orbitmetric::sequence::{
    aligned_distance, circular_embed, circular_max_filter, multiset_distance, shift_max_filter, sort_embed,
};
use orbitmetric::{CharacterTable, GroupAction, InvariantMap, MultiPoly, SparseSeq};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Actions with their representative dimension, one per kind.
fn actions() -> Vec<(GroupAction, usize)> {
    let th = 2.0 * PI / 3.0;
    let rot = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
    let flip = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let d3 = vec![
        DMatrix::identity(2, 2),
        rot.clone(),
        &rot * &rot,
        flip.clone(),
        &rot * &flip,
        &rot * &rot * &flip,
    ];
    vec![
        (GroupAction::finite_matrix(d3).unwrap(), 2),
        (GroupAction::sign(3), 3),
        (GroupAction::phase(2), 4),
        (GroupAction::cyclic_rotation(3, 2).unwrap(), 4),
        (GroupAction::permutation_coordinates(4), 4),
        (GroupAction::permutation_columns(3, 2), 6),
        (GroupAction::circular_shift(5), 5),
        (GroupAction::diagonal_unitary(CharacterTable::cyclic(4, &[1, 3]).unwrap()), 4),
        (GroupAction::product(GroupAction::sign(1), GroupAction::circular_shift(3)).unwrap(), 4),
    ]
}

fn finite_actions() -> Vec<(GroupAction, usize)> {
    actions().into_iter().filter(|(g, _)| g.is_finite()).collect()
}

/// Rotates every complex coordinate by `e^{iθ}`.
fn rotate_phase(x: &[f64], th: f64) -> Vec<f64> {
    let (c, s) = (th.cos(), th.sin());
    x.chunks(2).flat_map(|p| [c * p[0] - s * p[1], s * p[0] + c * p[1]]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        for (g, dim) in actions() {
            let (x, y, z) = (gaussian_vector(&mut r, dim), gaussian_vector(&mut r, dim), gaussian_vector(&mut r, dim));
            let dxy = g.quotient_distance(&x, &y).unwrap();
            prop_assert!((dxy - g.quotient_distance(&y, &x).unwrap()).abs() <= 1e-12);
            prop_assert!(g.quotient_distance(&x, &x).unwrap() <= 1e-12);
            let via = g.quotient_distance(&x, &z).unwrap() + g.quotient_distance(&z, &y).unwrap();
            prop_assert!(dxy <= via + 1e-9, "{}: {} > {}", g.kind().name(), dxy, via);
        }
    }

    #[test]
    fn distance_is_invariant_under_the_group(seed in any::<u64>()) {
        let mut r = rng(seed);
        for (g, dim) in finite_actions() {
            let (x, y) = (gaussian_vector(&mut r, dim), gaussian_vector(&mut r, dim));
            let k = r.gen_range(0..g.order().unwrap());
            let moved = g.quotient_distance(&g.apply(k, &x).unwrap(), &y).unwrap();
            prop_assert!((moved - g.quotient_distance(&x, &y).unwrap()).abs() <= 1e-10);
        }
        let g = GroupAction::phase(2);
        let (x, y) = (gaussian_vector(&mut r, 4), gaussian_vector(&mut r, 4));
        let moved = g.quotient_distance(&rotate_phase(&x, r.gen_range(0.0..2.0 * PI)), &y).unwrap();
        prop_assert!((moved - g.quotient_distance(&x, &y).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn max_filter_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        for (g, dim) in actions() {
            let (x, y) = (gaussian_vector(&mut r, dim), gaussian_vector(&mut r, dim));
            let d = g.quotient_distance(&x, &y).unwrap();
            let m = g.max_filter(&x, &y).unwrap();
            prop_assert!((d * d - (norm_sq(&x) - 2.0 * m + norm_sq(&y))).abs() <= 1e-9);
        }
    }

    #[test]
    fn closed_forms_match_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let kinds = [
            (GroupAction::sign(3), 3),
            (GroupAction::cyclic_rotation(5, 2).unwrap(), 4),
            (GroupAction::circular_shift(6), 6),
            (GroupAction::permutation_coordinates(4), 4),
        ];
        for (g, dim) in kinds {
            let (x, y) = (gaussian_vector(&mut r, dim), gaussian_vector(&mut r, dim));
            let closed = g.quotient_distance(&x, &y).unwrap();
            prop_assert!((closed - g.enumerated_distance(&x, &y).unwrap()).abs() <= 1e-12);
        }
        // The phase group through its finite subgroup of 720th roots of unity.
        let (x, y) = (gaussian_vector(&mut r, 2), gaussian_vector(&mut r, 2));
        let closed = GroupAction::phase(1).quotient_distance(&x, &y).unwrap();
        let sampled = GroupAction::cyclic_rotation(720, 1).unwrap().quotient_distance(&x, &y).unwrap();
        prop_assert!(sampled >= closed - 1e-12 && sampled - closed <= 5e-3 * (norm_sq(&x) * norm_sq(&y)).sqrt().sqrt());
    }

    #[test]
    fn radial_identity(seed in any::<u64>(), a in 0.01f64..10.0, b in 0.01f64..10.0) {
        let mut r = rng(seed);
        let kinds = [
            (GroupAction::sign(3), 3),
            (GroupAction::phase(2), 4),
            (GroupAction::cyclic_rotation(3, 1).unwrap(), 2),
            (GroupAction::permutation_coordinates(4), 4),
        ];
        for (g, dim) in kinds {
            let (u, v) = (unit_vector(&mut r, dim), unit_vector(&mut r, dim));
            let au: Vec<f64> = u.iter().map(|t| a * t).collect();
            let bv: Vec<f64> = v.iter().map(|t| b * t).collect();
            let lhs = g.quotient_distance(&au, &bv).unwrap();
            let rhs = radial_distance(a, b, g.quotient_distance(&u, &v).unwrap()).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10, "{}: {} vs {}", g.kind().name(), lhs, rhs);
        }
    }

    #[test]
    fn constructed_maps_are_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let templates: Vec<Vec<f64>> = (0..3).map(|_| gaussian_vector(&mut r, 4)).collect();
        let power = power_map_raw(3).unwrap();
        let table = CharacterTable::cyclic(4, &[1, 3]).unwrap();
        let AbelianExponents::Found(m) = abelian_exponents(&table) else { panic!("diag(i,−i) is free") };
        let maps: Vec<InvariantMap> = vec![
            real_projective_embed(3).unwrap(),
            sphere_lift(&power_map_raw(2).unwrap(), 0.7).unwrap(),
            homogeneous_extension(&power).unwrap(),
            power,
            power_map_embed(3, None).unwrap(),
            max_filter_map(Arc::new(GroupAction::circular_shift(4)), templates).unwrap(),
            abelian_invariant(&table, &m).unwrap(),
            bispectrum_map(4).unwrap(),
        ];
        for f in &maps {
            let g = f.action();
            let dim = g.ambient_dim().unwrap();
            let x = gaussian_vector(&mut r, dim);
            let k = r.gen_range(0..g.order().unwrap());
            let gap = dist(&f.eval(&g.apply(k, &x).unwrap()).unwrap(), &f.eval(&x).unwrap());
            prop_assert!(gap <= 1e-10 * (1.0 + norm_sq(&x)).powi(2), "{}: {}", f.name(), gap);
        }
        let f = complex_phase_embed(2).unwrap();
        let x = gaussian_vector(&mut r, 4);
        let gap = dist(&f.eval(&rotate_phase(&x, r.gen_range(0.0..2.0 * PI))).unwrap(), &f.eval(&x).unwrap());
        prop_assert!(gap <= 1e-10 * (1.0 + norm_sq(&x)));
    }

    #[test]
    fn freeness_matches_exponent_search(order in 2usize..9, exps in proptest::collection::vec(0i64..9, 1..4)) {
        let table = CharacterTable::cyclic(order, &exps).unwrap();
        let found = matches!(abelian_exponents(&table), AbelianExponents::Found(_));
        prop_assert_eq!(found, acts_freely_on_sphere(&table));
    }

    #[test]
    fn reynolds_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let terms: Vec<(Vec<u32>, f64)> =
            (0..4).map(|_| ((0..3).map(|_| r.gen_range(0..3)).collect(), r.gen_range(-1.0..1.0))).collect();
        let p = MultiPoly::from_terms(3, terms).unwrap();
        for g in [GroupAction::sign(3), GroupAction::permutation_coordinates(3), GroupAction::circular_shift(3)] {
            let once = reynolds_average(&p, &g).unwrap();
            let twice = reynolds_average(&once, &g).unwrap();
            for (e, c) in once.terms() {
                prop_assert!((twice.coefficient(e) - c).abs() <= 1e-12);
            }
            prop_assert_eq!(once.num_terms(), twice.num_terms());
            let x = gaussian_vector(&mut r, 3);
            let k = r.gen_range(0..g.order().unwrap());
            let gx = g.apply(k, &x).unwrap();
            prop_assert!((once.eval(&gx) - once.eval(&x)).abs() <= 1e-9 * (1.0 + once.eval(&x).abs()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gradient_interpolation_round_trip(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let points: Vec<Vec<f64>> = (0..n).map(|_| gaussian_vector(&mut r, 2)).collect();
        let grads: Vec<Vec<f64>> = (0..n).map(|_| gaussian_vector(&mut r, 2)).collect();
        let p = gradient_interpolate(&points, &grads).unwrap();
        for (u, v) in points.iter().zip(&grads) {
            prop_assert!(dist(&p.gradient(u), v) <= 1e-6 * (1.0 + norm_sq(v).sqrt()));
        }
    }

    #[test]
    fn local_immersion_has_identity_jacobian(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = GroupAction::sign(2);
        // Points off the coordinate axes have trivial stabilizer under sign flips.
        let u = loop {
            let u = unit_vector(&mut r, 2);
            if u.iter().all(|c| c.abs() > 0.2) {
                break u;
            }
        };
        let polys = local_immersion_poly(&g, &u).unwrap();
        let h = 1e-5;
        let mut worst = 0.0f64;
        for (i, p) in polys.iter().enumerate() {
            for j in 0..2 {
                let mut plus = u.clone();
                let mut minus = u.clone();
                plus[j] += h;
                minus[j] -= h;
                let fd = (p.eval(&plus) - p.eval(&minus)) / (2.0 * h);
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((fd - expect).abs());
            }
        }
        prop_assert!(worst <= 1e-5, "{}", worst);
    }

    #[test]
    fn sdp_duality_and_subsets(seed in any::<u64>(), n in 3usize..7) {
        let mut r = rng(seed);
        let g = GroupAction::sign(3);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| gaussian_vector(&mut r, 3)).collect();
        let m = FiniteMetric::from_quotient_points(&g, &pts).unwrap();
        let sol = orbitmetric::distortion::solve_distortion_sdp(&m, &Default::default()).unwrap();
        let (plus, minus) = sol.dual.pairings(&m).unwrap();
        prop_assert!(plus <= sol.certificate.t * minus + 1e-9);

        let sub = m.subset(&(0..n - 1).collect::<Vec<_>>()).unwrap();
        let c_sub = sdp_distortion(&sub, 1e-8).unwrap().c2();
        prop_assert!(c_sub <= sol.c2() + 1e-6, "{} > {}", c_sub, sol.c2());

        let y = gram_to_embedding(&sol.certificate);
        for i in 0..n {
            for j in 0..n {
                let q = &sol.certificate.q;
                let form = q[(i, i)] - 2.0 * q[(i, j)] + q[(j, j)];
                prop_assert!((dist(&y[i], &y[j]).powi(2) - form).abs() <= 1e-7 * (1.0 + form));
            }
        }
    }

    #[test]
    fn circle_distortion_is_at_most_half_pi(p in 0.2f64..1.0) {
        // Concave power metrics d(t) = t^p give decreasing g on (0, 1/2].
        let g = |t: f64| (PI * t).sin() / t.powf(p);
        let c = circle_distortion(g);
        if let Ok(c) = c {
            prop_assert!(c <= PI / 2.0 + 1e-6);
        }
    }

    #[test]
    fn bispectrum_is_shift_invariant(seed in any::<u64>(), d in 1usize..12, s in 0usize..12) {
        let mut r = rng(seed);
        let x: Vec<Complex64> = (0..d).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
        let shifted: Vec<Complex64> = (0..d).map(|i| x[(i + d - s % d) % d]).collect();
        let (a, b) = (bispectrum(&x).unwrap(), bispectrum(&shifted).unwrap());
        prop_assert!((a - b).iter().all(|z| z.norm() <= 1e-9));
    }
}

fn random_seq(r: &mut ChaCha8Rng, max_support: usize) -> SparseSeq {
    let len = r.gen_range(1..=max_support);
    SparseSeq::from_scalars(r.gen_range(-4..=4), &gaussian_vector(r, len))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sorting_embedding_is_an_isometry(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = (random_seq(&mut r, 8), random_seq(&mut r, 8));
        let lhs = aligned_distance(&sort_embed(&x).unwrap(), &sort_embed(&y).unwrap()).unwrap();
        prop_assert!((lhs - multiset_distance(&x, &y).unwrap()).abs() <= 1e-9);
        prop_assert!(multiset_distance(&sort_embed(&x).unwrap(), &x).unwrap() <= 1e-9);
    }

    #[test]
    fn multiset_distance_ignores_positions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = (random_seq(&mut r, 6), random_seq(&mut r, 6));
        let mut idx: Vec<i64> = (0..20).collect();
        for i in (1..idx.len()).rev() {
            idx.swap(i, r.gen_range(0..=i));
        }
        let moved = y.reindexed(&idx[..y.entries().len()]).unwrap();
        prop_assert_eq!(multiset_distance(&x, &y).unwrap(), multiset_distance(&x, &moved).unwrap());
    }

    /// Whenever the cyclic window leaves room for a rotation with no overlap,
    /// or the linear max filter is attained by an overlapping shift, the
    /// circular and linear max filters coincide.
    #[test]
    fn circular_window_preserves_max_filter(seed in any::<u64>(), big_n in 0usize..11, extra in 0usize..8) {
        let mut r = rng(seed);
        let a = SparseSeq::from_scalars(0, &gaussian_vector(&mut r, big_n + 1));
        let b = SparseSeq::from_scalars(0, &gaussian_vector(&mut r, big_n + 1));
        let n = 2 * big_n + 1 + extra;
        let circ = circular_max_filter(&circular_embed(&a, n).unwrap(), &circular_embed(&b, n).unwrap(), n).unwrap();
        let linear = shift_max_filter(&a, &b).unwrap();
        if n > 2 * big_n + 1 || circ >= 0.0 {
            prop_assert!((circ - linear).abs() <= 1e-12, "{} vs {}", circ, linear);
        } else {
            prop_assert_eq!(linear, 0.0);
        }
    }
}
