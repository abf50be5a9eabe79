// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

use linnik::arith::{self, Valuation};
use linnik::experiments;
use linnik::forms::{self, BinaryForm};
use linnik::hurwitz::{self, Quaternion};
use linnik::reps;
use linnik::spheres::{self, LatticePoint3};
use linnik::surface::{self, HalfPlanePoint, NeighborRule};
use num_rational::Ratio;
use proptest::prelude::*;

const PRIMES: [u64; 8] = [3, 5, 7, 11, 13, 17, 101, 7919];

fn odd_prime() -> impl Strategy<Value = u64> {
    proptest::sample::select(PRIMES.to_vec())
}

fn hurwitz_quaternion() -> impl Strategy<Value = Quaternion> {
    (any::<bool>(), prop::array::uniform4(-20i64..=20))
        .prop_filter_map("nonzero", |(half, c)| {
            let d = c.map(|x| 2 * x + half as i64);
            (d != [0; 4]).then(|| Quaternion::from_doubled(d).unwrap())
        })
}

fn definite_form() -> impl Strategy<Value = BinaryForm> {
    (1i64..200, -400i64..400, 1i64..200)
        .prop_map(|(a, b, c)| BinaryForm::new(a, b, c))
        .prop_filter("definite", |f| f.discriminant() < 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn legendre_symbol_is_multiplicative(a in -10_000i64..10_000, b in -10_000i64..10_000, p in odd_prime()) {
        let lhs = arith::legendre_symbol(a * b, p).unwrap();
        let rhs = arith::legendre_symbol(a, p).unwrap() * arith::legendre_symbol(b, p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn legendre_symbol_matches_euler(a in 0i64..100_000, p in odd_prime()) {
        let e = arith::pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
        let expect = match e { 0 => 0, 1 => 1, _ => -1 };
        prop_assert_eq!(arith::legendre_symbol(a, p).unwrap(), expect);
    }

    #[test]
    fn valuation_is_additive(a in 1i64..1_000_000, b in 1i64..1_000_000, p in odd_prime()) {
        let v = |n: i128| match arith::padic_valuation(n, p) {
            Valuation::Finite(k) => k,
            Valuation::Infinite => unreachable!(),
        };
        prop_assert_eq!(v(a as i128 * b as i128), v(a as i128) + v(b as i128));
    }

    #[test]
    fn hensel_roots_square_back(a in 1i64..1_000_000, p in odd_prime(), k in 1u32..5) {
        prop_assume!(a % p as i64 != 0);
        let modulus = (p as i128).pow(k);
        prop_assume!(modulus < 1 << 40);
        match arith::hensel_sqrt(a, p, k).unwrap() {
            Some(r) => {
                let x = r.residue() as i128;
                prop_assert_eq!((x * x - a as i128).rem_euclid(modulus), 0);
                prop_assert_eq!(arith::legendre_symbol(a, p).unwrap(), 1);
            }
            None => prop_assert_eq!(arith::legendre_symbol(a, p).unwrap(), -1),
        }
    }

    #[test]
    fn quaternion_norm_is_multiplicative(a in hurwitz_quaternion(), b in hurwitz_quaternion()) {
        prop_assert_eq!((a * b).norm(), a.norm() * b.norm());
        prop_assert_eq!((a * a.conjugate()).trace(), a.norm() * Ratio::from_integer(2));
    }

    #[test]
    fn rotation_is_a_homomorphism(a in hurwitz_quaternion(), b in hurwitz_quaternion()) {
        let r = |q: &Quaternion| hurwitz::rotation_of(q).unwrap();
        prop_assert_eq!(r(&(a * b)), hurwitz::mat_mul(&r(&a), &r(&b)));
        prop_assert_eq!(hurwitz::determinant(&r(&a)), Ratio::from_integer(1));
    }

    #[test]
    fn reduction_is_idempotent(f in definite_form()) {
        let (g, t) = forms::reduce(&f).unwrap();
        prop_assert!(g.is_reduced());
        prop_assert_eq!(f.transform(&t), g);
        prop_assert_eq!(forms::reduced(&g).unwrap(), g);
        prop_assert_eq!(g.discriminant(), f.discriminant());
    }

    #[test]
    fn composition_preserves_discriminant_and_commutes(f in definite_form(), g in definite_form()) {
        let d = f.discriminant();
        prop_assume!(f.is_primitive());
        prop_assume!(g.discriminant() != d);
        let ff = forms::compose(&f, &f).unwrap();
        prop_assert_eq!(ff.discriminant(), d);
        let f2 = forms::reduced(&f).unwrap();
        let fff = forms::compose(&ff, &f2).unwrap();
        prop_assert_eq!(fff, forms::compose(&f2, &ff).unwrap());
        prop_assert!(fff.is_reduced());
    }

    #[test]
    fn float_reduction_lands_in_domain(x in -50.0f64..50.0, y in 0.001f64..30.0) {
        let z = HalfPlanePoint::float(x, y).unwrap();
        let (w, word) = surface::reduce_to_fundamental_domain(&z).unwrap();
        prop_assert!(w.is_reduced());
        let (wx, wy) = w.to_float();
        let (rx, ry) = z.apply_word(&word).to_float();
        prop_assert!((wx - rx).abs() <= 1e-9 * (1.0 + wx.abs()) && (wy - ry).abs() <= 1e-9 * wy);
        let (w2, word2) = surface::reduce_to_fundamental_domain(&w).unwrap();
        prop_assert!(word2.is_empty());
        prop_assert_eq!(w2, w);
    }

    #[test]
    fn cm_reduction_agrees_with_form_reduction(f in definite_form()) {
        prop_assume!(f.is_primitive());
        let z = surface::reduce_point(&forms::cm_point(&f).unwrap()).unwrap();
        prop_assert_eq!(z, HalfPlanePoint::Cm(forms::reduced(&f).unwrap()));
    }

    #[test]
    fn rotations_preserve_norm_and_classes(x in -100i64..100, y in -100i64..100, z in -100i64..100) {
        let v = LatticePoint3::new(x, y, z);
        let canon = spheres::canonical_representative(&v);
        for g in spheres::rotation_group() {
            let w = v.rotate(g);
            prop_assert_eq!(w.norm(), v.norm());
            prop_assert_eq!(spheres::canonical_representative(&w), canon);
        }
    }

    #[test]
    fn census_classes_bounded_by_pairs(d in 1i64..3000, m in 1u32..3) {
        prop_assume!(d % 3 != 0);
        let c = reps::basic_lemma_census(d, 3, m).unwrap();
        prop_assert!(c.classes <= c.ordered_pairs);
        prop_assert!(c.middle_coefficients_consistent());
        prop_assert_eq!(c.middle_coefficients.values().sum::<u64>(), c.ordered_pairs);
    }

    #[test]
    fn cap_discrepancy_in_unit_interval(d in 1i64..5000, seed in any::<u64>()) {
        let pts = spheres::enumerate_primitive_points(d).unit_vectors();
        prop_assume!(!pts.is_empty());
        let v = experiments::cap_discrepancy(&pts, 20, seed).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn hecke_steps_change_height_by_at_most_root_p(x in -0.5f64..0.5, y in 0.9f64..40.0, p in proptest::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let z = HalfPlanePoint::float(x, y).unwrap();
        let z = surface::reduce_point(&z).unwrap();
        let h = surface::height(&z).unwrap();
        let nbrs = surface::hecke_neighbors(&z, p).unwrap();
        prop_assert_eq!(nbrs.len() as u64, p + 1);
        let s = (p as f64).sqrt();
        for w in &nbrs {
            let r = surface::height(&surface::reduce_point(w).unwrap()).unwrap() / h;
            prop_assert!(r <= s * (1.0 + 1e-9) && r >= (1.0 - 1e-9) / s);
        }
    }

    /// An excursion below H that starts at height at least H needs at
    /// least 2⌊log_p(H²)⌋ steps before the walk is back at height H.
    #[test]
    fn excursions_below_h_are_long(x in -0.5f64..0.5, y in 1.0f64..1e5, p in proptest::sample::select(vec![2u64, 3, 5, 7]), t in 0.0f64..1.0, seed in any::<u64>()) {
        let s = (p as f64).sqrt();
        let top = y.sqrt().max(s * 1.01);
        let h = s * (top / s).powf(t);
        let z = HalfPlanePoint::float(x, y).unwrap();
        let it = surface::nonbacktracking_walk(&z, p, 40, seed, h).unwrap();
        let bound = 2 * ((h * h).ln() / (p as f64).ln()).floor() as usize;
        let mut last_above: Option<usize> = None;
        for (i, &above) in it.flags.iter().enumerate() {
            if above {
                if let Some(j) = last_above {
                    if i > j + 1 {
                        prop_assert!(i - j >= bound, "H = {h}, left at {j}, back at {i}, heights {:?}", it.heights);
                    }
                }
                last_above = Some(i);
            }
        }
    }

    /// After a step down that lands at height at least √p, the only
    /// neighbour going up is the parent, so the walk keeps descending by
    /// exactly √p.
    #[test]
    fn forced_descent(x in -0.5f64..0.5, y in 1.0f64..4000.0, p in proptest::sample::select(vec![2u64, 3, 5, 7]), seed in any::<u64>()) {
        let z = HalfPlanePoint::float(x, y).unwrap();
        let it = surface::nonbacktracking_walk(&z, p, 30, seed, 1.0).unwrap();
        let s = (p as f64).sqrt();
        for i in 1..it.heights.len() - 1 {
            let came_down = it.heights[i] < it.heights[i - 1] * (1.0 - 1e-9);
            if came_down && it.heights[i] >= s * (1.0 + 1e-6) {
                let r = it.heights[i + 1] / it.heights[i];
                prop_assert!((r * s - 1.0).abs() < 1e-9, "step {i}: ratio {r}");
            }
        }
    }
}

#[test]
fn cusp_mass_is_monotone_in_h() {
    for d in [-23i64, -1_000, -9_999, -30_004] {
        let g = forms::class_group(d).unwrap();
        let mut last = 1.0f64;
        for k in 1..200 {
            let m = experiments::cusp_mass(g.forms(), Ratio::new(k, 20)).unwrap();
            assert!(m <= last, "d = {d}, H = {k}/20");
            last = m;
        }
    }
}

#[test]
fn odd_weyl_sums_vanish() {
    for d in 1..400i64 {
        let pts = spheres::enumerate_primitive_points(d).unit_vectors();
        if pts.is_empty() {
            continue;
        }
        for h in experiments::weyl_harmonic_sums(&pts, 8).unwrap() {
            if h.l % 2 == 1 {
                assert!(h.value.abs() <= 1e-12, "d = {d}: {h:?}");
            }
        }
    }
}

/// No degree-2 harmonic is invariant under the rotation group, so those
/// averages vanish; degree 4 is the first that can carry a trend.
#[test]
fn weyl_degree_two_vanishes_and_degree_four_decreases() {
    let mut maxima = Vec::new();
    for k in 11..=16u32 {
        let lo = 1i64 << k;
        let mut block_max = Vec::new();
        for d in (lo..2 * lo).filter(|&d| spheres::linnik_admissible(d, 3).unwrap()).step_by(7) {
            let pts = spheres::enumerate_primitive_points(d).unit_vectors();
            let avgs = experiments::weyl_harmonic_sums(&pts, 4).unwrap();
            assert!(experiments::weyl_degree_max(&avgs, 2) <= 1e-12, "d = {d}");
            block_max.push(experiments::weyl_degree_max(&avgs, 4));
        }
        maxima.push(experiments::median(&mut block_max).unwrap());
    }
    for w in maxima.windows(2) {
        assert!(w[1] < w[0], "{maxima:?}");
    }
}

#[test]
fn embedding_class_ratios_take_few_values() {
    let rows = experiments::embedding_class_ratio_scan(1, 2000).unwrap();
    let hist = experiments::ratio_histogram(&rows);
    assert!(hist.len() <= 8, "{hist:?}");
}

#[test]
fn itinerary_pattern_counts() {
    let g = forms::class_group(-40_004).unwrap();
    assert!(g.order() >= 100);
    let pts: Vec<_> = g.forms().iter().map(|f| forms::cm_point(f).unwrap()).collect();
    let n = surface::itinerary_patterns(&pts, 3, NeighborRule::Seeded(0), 2.0, 10).unwrap();
    assert!(n as f64 <= surface::pattern_count_bound(3, 2.0, 10, 1.0));
    assert!(n <= pts.len());
    let zero = surface::itinerary_patterns(&pts, 3, NeighborRule::Seeded(0), 2.0, 0).unwrap();
    assert!(zero <= 2);
    let high = surface::itinerary_patterns(&pts, 3, NeighborRule::Fixed(0), 1e6, 10).unwrap();
    assert_eq!(high, 1);
}
