use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sonc_core::certificate::{even_pool, sample_circuit, InnerCoeffMode, RandomSoncConfig};
use sonc_core::experiment::grid_sup_norm_exact;
use sonc_core::separation::{build_witness, log_phi_min_second_difference, separation_bound};
use sonc_core::{
    detect_circuit, parse, random_sonc, verify, BoxRegion, ExponentVector, Rational,
    SeparatingFunctional, SoncCertificate, SparsePolynomial,
};

fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=9).prop_map(|(a, b)| q(a, b))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (prop_oneof![-9i64..=-1, 1i64..=9], 1i64..=5).prop_map(|(a, b)| q(a, b))
}

fn poly(n: usize) -> impl Strategy<Value = SparsePolynomial> {
    prop::collection::vec((prop::collection::vec(0u32..5, n), rational()), 0..7).prop_map(
        move |terms| {
            SparsePolynomial::from_terms(
                n,
                terms.into_iter().map(|(e, c)| (ExponentVector::new(e), c)),
            )
            .unwrap()
        },
    )
}

fn poly_and_point() -> impl Strategy<Value = (SparsePolynomial, SparsePolynomial, Vec<Rational>)> {
    (1usize..=3).prop_flat_map(|n| (poly(n), poly(n), prop::collection::vec(rational(), n)))
}

fn circuit_pool(n: usize) -> Vec<ExponentVector> {
    even_pool(n, if n == 1 { 12 } else { 8 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn print_then_parse_is_identity((f, _, _) in poly_and_point()) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text, f.n()).unwrap(), f);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism((f, g, x) in poly_and_point()) {
        let fx = f.evaluate(&x).unwrap();
        let gx = g.evaluate(&x).unwrap();
        prop_assert_eq!((&f + &g).evaluate(&x).unwrap(), &fx + &gx);
        prop_assert_eq!((&f - &g).evaluate(&x).unwrap(), &fx - &gx);
        prop_assert_eq!((&f * &g).evaluate(&x).unwrap(), &fx * &gx);
        prop_assert_eq!(f.pow(2).evaluate(&x).unwrap(), &fx * &fx);
    }

    #[test]
    fn rescale_matches_scaled_evaluation(
        (f, x, a) in (1usize..=3).prop_flat_map(|n| (
            poly(n),
            prop::collection::vec(rational(), n),
            prop::collection::vec(nonzero_rational(), n),
        ))
    ) {
        let ax: Vec<Rational> = a.iter().zip(&x).map(|(ai, xi)| ai * xi).collect();
        prop_assert_eq!(
            f.rescale(&a).unwrap().evaluate(&x).unwrap(),
            f.evaluate(&ax).unwrap()
        );
    }

    #[test]
    fn rescaled_region_membership(
        (k, a, x) in (1usize..=3).prop_flat_map(|n| (
            prop::collection::vec((rational(), 1i64..20), n),
            prop::collection::vec(nonzero_rational(), n),
            prop::collection::vec(rational(), n),
        ))
    ) {
        let region = BoxRegion::new(
            k.into_iter().map(|(lo, w)| (lo.clone(), lo + q(w, 3))).collect(),
        ).unwrap();
        let h = region.rescale_region(&a).unwrap();
        let ax: Vec<Rational> = a.iter().zip(&x).map(|(ai, xi)| ai * xi).collect();
        prop_assert_eq!(h.contains(&x), region.contains(&ax));
    }

    #[test]
    fn grid_norm_invariant_under_rescaling(
        (f, a) in (1usize..=2).prop_flat_map(|n| (
            poly(n),
            prop::collection::vec(nonzero_rational(), n),
        )),
        res in 2usize..7,
    ) {
        let n = f.n();
        let region = BoxRegion::cube(n, q(-3, 2), q(2, 1)).unwrap();
        let h = f.rescale(&a).unwrap();
        let scaled = region.rescale_region(&a).unwrap();
        prop_assert_eq!(
            grid_sup_norm_exact(&h, &scaled, res, &[]).unwrap(),
            grid_sup_norm_exact(&f, &region, res, &[]).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn detect_reconstructs_sampled_circuits(n in 1usize..=3, seed: u64, free: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mode = if free { InnerCoeffMode::Unconstrained } else { InnerCoeffMode::Nonnegative };
        let c = sample_circuit(&mut rng, &circuit_pool(n), mode).unwrap();
        let f = c.to_polynomial();
        let d = detect_circuit(&f).unwrap();
        prop_assert_eq!(d.to_polynomial(), f);
        if !c.inner_coeff().is_zero() || c.is_degenerate() {
            prop_assert_eq!(d, c);
        }
    }

    #[test]
    fn positive_scaling_is_covariant(n in 1usize..=3, seed: u64, t in 1i64..30, s in 1i64..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = sample_circuit(&mut rng, &circuit_pool(n), InnerCoeffMode::Unconstrained).unwrap();
        let t = q(t, s);
        let scaled = detect_circuit(&c.to_polynomial().scale(&t)).unwrap();
        let c = detect_circuit(&c.to_polynomial()).unwrap();
        prop_assert_eq!(scaled.is_nonnegative(), c.is_nonnegative());
        prop_assert_eq!(scaled.weights(), c.weights());
        let p = c.circuit_number_power();
        let ps = scaled.circuit_number_power();
        prop_assert_eq!(ps.q, p.q);
        let tq = num_traits::pow(t, p.q as usize);
        prop_assert_eq!(ps.theta_q, p.theta_q * tq);
    }

    #[test]
    fn verify_ignores_part_order(n in 1usize..=3, seed: u64, parts in 1usize..6) {
        let cfg = RandomSoncConfig::new(n, 8, parts);
        let cert = random_sonc(&cfg, seed).unwrap();
        let mut shuffled = cert.parts().to_vec();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
        let permuted = SoncCertificate::new(cert.target().clone(), shuffled).unwrap();
        let a = verify(&cert);
        let b = verify(&permuted);
        prop_assert!(a.ok);
        prop_assert_eq!(a.ok, b.ok);
        prop_assert_eq!(a.sum_matches, b.sum_matches);
    }

    #[test]
    fn broken_part_is_reported(n in 1usize..=2, seed: u64) {
        let cfg = RandomSoncConfig::new(n, 8, 3);
        let cert = random_sonc(&cfg, seed).unwrap();
        let mut parts = cert.parts().to_vec();
        let bad = SparsePolynomial::monomial(ExponentVector::unit(n, 0, 2), q(-1, 1));
        parts.push(bad.clone());
        let target = cert.target() + &bad;
        let report = verify(&SoncCertificate::new(target, parts).unwrap());
        prop_assert!(!report.ok);
        prop_assert!(report.sum_matches);
        prop_assert_eq!(report.first_failure, Some(cert.parts().len()));
    }

    #[test]
    fn four_point_gap_dominates_bound(seed: u64, parts in 1usize..6, k in 4i64..12) {
        let region = BoxRegion::cube(1, q(-2, 1), q(2, 1)).unwrap();
        let report = separation_bound(&region, 3, Some(q(k + 1, k))).unwrap();
        let functional = report.functional();
        let cert = random_sonc(&RandomSoncConfig::new(1, 10, parts), seed).unwrap();
        let g = cert.target();
        let gap = functional.four_point_gap(&report.witness, g).unwrap();
        prop_assert!(gap >= report.lower_bound, "gap {} below {}", gap, report.lower_bound);
        let points = functional.points().to_vec();
        let norm = grid_sup_norm_exact(&(g - &report.witness), &region, 9, &points).unwrap();
        prop_assert!(norm >= gap);
    }

    #[test]
    fn nonnegative_verdict_survives_grid(n in 1usize..=2, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = sample_circuit(&mut rng, &circuit_pool(n), InnerCoeffMode::Unconstrained).unwrap();
        let f = c.to_polynomial();
        let region = BoxRegion::cube(n, q(-3, 1), q(3, 1)).unwrap();
        let grid = region.grid(if n == 1 { 61 } else { 13 }).unwrap();
        if c.is_nonnegative() {
            for x in &grid {
                prop_assert!(!f.evaluate(x).unwrap().is_negative(), "{} < 0 at {:?}", f, x);
            }
        } else if let Some(x) = c.find_negative_point(5000) {
            prop_assert!(f.evaluate(&x).unwrap().is_negative());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witness_cancels(d in 3u32..8, k in 2i64..40, n in 1usize..=3) {
        let u = q(k + 1, k);
        let w = build_witness(&u, d, n).unwrap();
        let functional = SeparatingFunctional::new(n, u.clone()).unwrap();
        let mut at_u = vec![Rational::one(); n];
        at_u[0] = u;
        let fu = w.poly.evaluate(&at_u).unwrap();
        prop_assert!(fu.is_positive());
        prop_assert_eq!(functional.apply(&w.poly).unwrap(), -fu);
    }

    #[test]
    fn nonnegative_circuits_have_nonnegative_l(n in 1usize..=3, seed: u64, k in 1i64..60) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = sample_circuit(&mut rng, &circuit_pool(n), InnerCoeffMode::Nonnegative).unwrap();
        prop_assert!(c.is_nonnegative());
        let functional = SeparatingFunctional::new(n, q(k + 1, k)).unwrap();
        prop_assert!(!functional.apply(&c.to_polynomial()).unwrap().is_negative());
    }
}

#[test]
fn monomial_values_are_positive() {
    for k in 1..50 {
        let functional = SeparatingFunctional::new(2, q(k + 1, k)).unwrap();
        for b in 0..200u32 {
            let v = functional.monomial_value(b);
            assert!(v.is_positive());
            let m = SparsePolynomial::monomial(ExponentVector::new(vec![b, 2]), Rational::one());
            assert_eq!(functional.apply(&m).unwrap(), v);
        }
    }
}

#[test]
fn log_phi_is_convex() {
    assert!(log_phi_min_second_difference(0.0, 5.0, 0.01) >= -1e-9);
    assert!(log_phi_min_second_difference(0.0, 2.0, 0.01) >= -1e-9);
}

#[test]
fn max_dominates_mean_of_four_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let h = SparsePolynomial::from_terms(
            1,
            (0..5u32).map(|e| {
                let c: i64 = rand::Rng::random_range(&mut rng, -50..=50);
                (ExponentVector::new(vec![e]), q(c, 7))
            }),
        )
        .unwrap();
        let functional = SeparatingFunctional::new(1, q(6, 5)).unwrap();
        let zero = SparsePolynomial::zero(1);
        let max = functional.four_point_gap(&zero, &h).unwrap();
        let l = functional.apply(&h).unwrap().abs();
        assert!(l <= max * q(4, 1));
    }
}
