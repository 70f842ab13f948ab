use num_traits::{Signed, Zero};
use proptest::prelude::*;
use sedlab::cd_algebra::{CdElement, Sedenion};
use sedlab::coeff_solver::{build_system, TestPair};
use sedlab::holonomy::{run_great_circle, unwrap, TransportConfig};
use sedlab::invariants::{
    check_full_factorization, d1, d2_component, d2_full, d2_geometric, delta, find_annihilator, invariant_triple,
    is_zero_divisor, on_d2_locus,
};
use sedlab::mult_operator::{
    det_exact, left_mult_matrix, nullspace_exact, rational_pow, right_mult_matrix, sedenion_block_matrix,
};
use sedlab::rng::SeededRng;
use sedlab::sampling::exact_zero_divisor;
use sedlab::scalar::ratio;
use sedlab::slice_model::{closed_form, d2_on_slice, quadric, slice_point};
use sedlab::{join, split, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-3i64..=3, 1i64..=3).prop_map(|(p, q)| ratio(p, q))
}

fn element(level: u32) -> impl Strategy<Value = CdElement<Rational>> {
    prop::collection::vec(rational(), 1usize << level).prop_map(move |c| CdElement::new(level, c).unwrap())
}

fn nonzero_sedenion() -> impl Strategy<Value = Sedenion<Rational>> {
    element(4).prop_filter("nonzero", |v| !v.is_zero())
}

/// Random sedenions mixed with exact zero divisors.
fn mixed_sedenion() -> impl Strategy<Value = Sedenion<Rational>> {
    prop_oneof![nonzero_sedenion(), any::<u64>().prop_map(|s| exact_zero_divisor(&mut SeededRng::new(s)))]
}

fn mul(x: &CdElement<Rational>, y: &CdElement<Rational>) -> CdElement<Rational> {
    x.multiply(y).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn octonion_norm_is_multiplicative(x in element(3), y in element(3)) {
        prop_assert_eq!(mul(&x, &y).norm_sq(), x.norm_sq() * y.norm_sq());
    }

    #[test]
    fn octonions_are_left_alternative(x in element(3), y in element(3)) {
        prop_assert_eq!(mul(&mul(&x, &x), &y), mul(&x, &mul(&x, &y)));
    }

    #[test]
    fn conjugation_reverses_products(level in 0u32..=3, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let draw = |rng: &mut SeededRng| {
            CdElement::new(level, (0..1usize << level).map(|_| rng.rational(3, 3)).collect()).unwrap()
        };
        let (x, y) = (draw(&mut rng), draw(&mut rng));
        prop_assert_eq!(mul(&x, &y).conjugate(), mul(&y.conjugate(), &x.conjugate()));
    }

    #[test]
    fn multiplication_is_bilinear(x in element(4), x2 in element(4), y in element(4), a in rational(), b in rational()) {
        let lhs = mul(&x.scale(&a).add(&x2.scale(&b)).unwrap(), &y);
        let rhs = mul(&x, &y).scale(&a).add(&mul(&x2, &y).scale(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn split_join_round_trip(v in element(4)) {
        prop_assert_eq!(join(&split(&v).unwrap()), v);
    }

    #[test]
    fn d2_forms_agree(v in element(4)) {
        let a: [Rational; 16] = v.coeffs().to_vec().try_into().unwrap();
        prop_assert_eq!(d2_component(&a), d2_geometric(&v).unwrap());
    }

    #[test]
    fn triples_are_realizable(v in nonzero_sedenion()) {
        let t = invariant_triple(&v).unwrap();
        prop_assert!(t.a >= t.b.abs());
        prop_assert!(ratio(4, 1) * &t.c * &t.c <= &t.a * &t.a - &t.b * &t.b);
        prop_assert!(t.is_realizable());
    }

    #[test]
    fn invariants_are_homogeneous(v in nonzero_sedenion(), s in rational().prop_filter("nonzero", |s| !s.is_zero())) {
        let sv = v.scale(&s);
        prop_assert_eq!(d1(&sv).unwrap(), d1(&v).unwrap() * rational_pow(&s, 2));
        prop_assert_eq!(d2_geometric(&sv).unwrap(), d2_geometric(&v).unwrap() * rational_pow(&s, 4));
        prop_assert_eq!(d2_full(&sv).unwrap(), d2_full(&v).unwrap() * rational_pow(&s, 4));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn octonion_determinant_law(x in element(3)) {
        let n4 = rational_pow(&x.norm_sq(), 4);
        prop_assert_eq!(det_exact(&left_mult_matrix(&x)), n4.clone());
        prop_assert_eq!(det_exact(&right_mult_matrix(&x)), n4);
    }

    #[test]
    fn block_form_matches_operator(v in element(4)) {
        prop_assert_eq!(sedenion_block_matrix(&split(&v).unwrap()), left_mult_matrix(&v));
    }

    #[test]
    fn full_factorization_holds(v in nonzero_sedenion()) {
        prop_assert!(check_full_factorization(&v).unwrap().holds);
    }

    #[test]
    fn pure_imaginary_factorization_holds(v in nonzero_sedenion()) {
        let mut c = v.coeffs().to_vec();
        c[0] = Rational::zero();
        c[8] = Rational::zero();
        let w = CdElement::new(4, c).unwrap();
        prop_assume!(!w.is_zero());
        let t = invariant_triple(&w).unwrap();
        prop_assert_eq!(delta(&w), t.closed_form());
    }

    #[test]
    fn delta_is_homogeneous_of_degree_16(v in element(4), s in rational()) {
        prop_assert_eq!(delta(&v.scale(&s)), delta(&v) * rational_pow(&s, 16));
    }

    #[test]
    fn delta_swap_and_sign_symmetry(v in element(4)) {
        let p = split(&v).unwrap();
        let d = delta(&v);
        prop_assert_eq!(delta(&join(&p.swapped())), d.clone());
        prop_assert_eq!(delta(&join(&p.with_negated_second())), d);
    }

    #[test]
    fn zero_divisor_predicate_matches_kernel(v in mixed_sedenion()) {
        let zd = is_zero_divisor(&v, 0.0).unwrap();
        let m = left_mult_matrix(&v);
        prop_assert_eq!(zd, det_exact(&m).is_zero());
        prop_assert_eq!(zd, !nullspace_exact(&m).is_empty());
        if zd {
            let a = find_annihilator(&v.to_f64()).unwrap();
            prop_assert!(a.residual <= 1e-10);
        }
    }

    #[test]
    fn zero_divisor_predicate_is_scale_invariant(v in mixed_sedenion(), k in 1i64..=9, q in 1i64..=9) {
        let s = ratio(k, q);
        prop_assert_eq!(is_zero_divisor(&v, 0.0).unwrap(), is_zero_divisor(&v.scale(&s), 0.0).unwrap());
        let f = v.to_f64();
        let sf = v.scale(&s).to_f64();
        prop_assert_eq!(is_zero_divisor(&f, 1e-10).unwrap(), is_zero_divisor(&sf, 1e-10).unwrap());
        prop_assert_eq!(on_d2_locus(&f, 1e-10).unwrap(), on_d2_locus(&sf, 1e-10).unwrap());
    }

    #[test]
    fn system_rows_depend_only_on_triples(v in nonzero_sedenion()) {
        // (v1, v2) and (-v1, -v2) share (a, b, c).
        let p = split(&v).unwrap();
        let a = TestPair::new(p.v1.clone(), p.v2.clone()).unwrap();
        let b = TestPair::new(p.v1.neg(), p.v2.neg()).unwrap();
        prop_assert_eq!(&a.triple, &b.triple);
        let sys = build_system(&[a.clone(), a.clone(), a.clone(), a.clone(), a, b]).unwrap();
        prop_assert!(sys.rows.windows(2).all(|w| w[0].0 == w[1].0));
    }

    #[test]
    fn slice_closed_form(x in rational(), y in rational(), z in rational(), c in rational()) {
        prop_assert_eq!(d2_on_slice(&x, &y, &z, &c), closed_form(&x, &y, &z));
        let p = slice_point(&x, &y, &z, &c);
        prop_assert_eq!(p.v1.norm_sq(), p.v2.norm_sq());
    }

    #[test]
    fn slice_cyclic_symmetry(x in rational(), y in rational(), z in rational(), c in rational()) {
        let d = d2_on_slice(&x, &y, &z, &c);
        prop_assert_eq!(d2_on_slice(&y, &z, &x, &c), d.clone());
        prop_assert_eq!(d2_on_slice(&z, &x, &y, &c), d);
    }

    #[test]
    fn quadric_is_homogeneous(x in rational(), y in rational(), z in rational(), s in rational()) {
        prop_assert_eq!(quadric(&(&s * &x), &(&s * &y), &(&s * &z)), &s * &s * quadric(&x, &y, &z));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn transport_preserves_orthonormality(steps in 8usize..600, seed in any::<u64>()) {
        let tr = run_great_circle(&TransportConfig::new(steps, seed)).unwrap();
        prop_assert_eq!(tr.steps.len(), steps + 1);
        prop_assert!(tr.max_orth_err() <= 1e-12);
        prop_assert!(tr.max_norm_err() <= 1e-12);
        let again = run_great_circle(&TransportConfig::new(steps, seed)).unwrap();
        prop_assert_eq!(&tr.steps, &again.steps);
    }

    #[test]
    fn unwrap_is_congruent_and_continuous(xs in prop::collection::vec(-20.0f64..20.0, 0..200)) {
        let u = unwrap(&xs);
        prop_assert_eq!(u.len(), xs.len());
        for (a, b) in u.iter().zip(&xs) {
            let k = (a - b) / std::f64::consts::TAU;
            prop_assert!((k - k.round()).abs() < 1e-9);
        }
        for w in u.windows(2) {
            let d = w[1] - w[0];
            prop_assert!(d > -std::f64::consts::PI - 1e-9 && d <= std::f64::consts::PI + 1e-9);
        }
    }
}

#[test]
fn sedenion_norm_is_not_multiplicative() {
    let v = Sedenion::<Rational>::from_i64s(4, &[0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0]).unwrap();
    let a = find_annihilator(&v.to_f64()).unwrap();
    assert!(a.residual <= 1e-10);
    let z = exact_zero_divisor(&mut SeededRng::new(3));
    let w = sedlab::invariants::find_annihilator_exact(&z).unwrap().w;
    let prod = mul(&z, &w);
    assert!(prod.is_zero());
    assert_ne!(prod.norm_sq(), z.norm_sq() * w.norm_sq());
}
