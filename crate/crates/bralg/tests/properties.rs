//! Property-based checks of the algebra kernel across all three coefficient
//! fields: ring and field axioms, parser round trips, reduction invariants,
//! automorphism coherence, graded multiplication, and matrix normal forms.

use bralg::bralgebra::{parse_graded_element, BRAlgebra, GradedElement};
use bralg::linalg::{invariant_factors, Matrix, UPoly};
use bralg::polyring::{
    parse_polynomial, parse_scalar, Ideal, PolyRing, Polynomial, RingAutomorphism,
};
use bralg::scalars::{FieldElement, FieldSpec};
use bralg::spectrum::OrbitPoint;
use proptest::prelude::*;
use std::sync::Arc;

fn specs() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::rationals()),
        Just(FieldSpec::cyclotomic(3).unwrap()),
        Just(FieldSpec::prime(7).unwrap()),
    ]
}

/// Raw term data: exponent pair and integer coefficient. Mapped into a
/// polynomial only once the field is known.
type Terms = Vec<(Vec<u32>, i64)>;

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec(
        (prop::collection::vec(0u32..=2, 2), -6i64..=6),
        0..=4,
    )
}

fn poly(ring: &Arc<PolyRing>, data: &Terms) -> Polynomial {
    let terms = data
        .iter()
        .map(|(e, c)| (e.clone(), FieldElement::from_int(ring.field(), *c)))
        .collect();
    Polynomial::from_terms(ring, terms)
}

fn ring2(spec: FieldSpec) -> Arc<PolyRing> {
    PolyRing::new(spec, &["z1", "z2"]).unwrap()
}

/// A scalar from two integers: num/den over QQ, a + b zeta over QQ(zeta_3),
/// the residue of the first over F_p.
fn scalar(spec: FieldSpec, a: i64, b: i64) -> FieldElement {
    if spec.is_rationals() {
        FieldElement::from_ratio(spec, a, b.rem_euclid(5) + 1).unwrap()
    } else if spec.cyclotomic_order().is_some() {
        let zeta = FieldElement::zeta(spec).unwrap();
        FieldElement::from_int(spec, a)
            .add(&FieldElement::from_int(spec, b).mul(&zeta).unwrap())
            .unwrap()
    } else {
        FieldElement::from_int(spec, a)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms_and_scalar_round_trip(
        spec in specs(),
        (a1, a2) in (-9i64..=9, -9i64..=9),
        (b1, b2) in (-9i64..=9, -9i64..=9),
        (c1, c2) in (-9i64..=9, -9i64..=9),
    ) {
        let a = scalar(spec, a1, a2);
        let b = scalar(spec, b1, b2);
        let c = scalar(spec, c1, c2);
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
        }
        let parsed = parse_scalar(spec, &a.to_string()).unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn polynomial_ring_axioms(
        spec in specs(),
        ta in terms(),
        tb in terms(),
        tc in terms(),
    ) {
        let ring = ring2(spec);
        let a = poly(&ring, &ta);
        let b = poly(&ring, &tb);
        let c = poly(&ring, &tc);
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            let m = a.monic();
            prop_assert!(m.leading_term().unwrap().1.is_one());
            prop_assert_eq!(m.monic(), m.clone());
        }
    }

    #[test]
    fn polynomial_display_parse_round_trip(spec in specs(), ta in terms()) {
        let ring = ring2(spec);
        let a = poly(&ring, &ta);
        let parsed = parse_polynomial(&ring, &a.to_string()).unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn evaluation_is_a_ring_map(
        spec in specs(),
        ta in terms(),
        tb in terms(),
        p0 in -4i64..=4,
        p1 in -4i64..=4,
    ) {
        let ring = ring2(spec);
        let a = poly(&ring, &ta);
        let b = poly(&ring, &tb);
        let at = [
            FieldElement::from_int(spec, p0),
            FieldElement::from_int(spec, p1),
        ];
        prop_assert_eq!(
            a.mul(&b).evaluate(&at).unwrap(),
            a.evaluate(&at).unwrap().mul(&b.evaluate(&at).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.add(&b).evaluate(&at).unwrap(),
            a.evaluate(&at).unwrap().add(&b.evaluate(&at).unwrap()).unwrap()
        );
    }

    #[test]
    fn maximal_ideal_membership_is_vanishing(
        spec in specs(),
        ta in terms(),
        p0 in -4i64..=4,
        p1 in -4i64..=4,
    ) {
        let ring = ring2(spec);
        let f = poly(&ring, &ta);
        let coords = vec![
            FieldElement::from_int(spec, p0),
            FieldElement::from_int(spec, p1),
        ];
        let p = OrbitPoint::new(&ring, coords.clone()).unwrap();
        let vanishes = f.evaluate(&coords).unwrap().is_zero();
        prop_assert_eq!(p.maximal_ideal().unwrap().contains(&f).unwrap(), vanishes);
    }
}

proptest! {
    // Groebner-backed properties are costlier per case.
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_form_is_idempotent_and_congruent(
        spec in specs(),
        tg1 in terms(),
        tg2 in terms(),
        tf in terms(),
    ) {
        let ring = ring2(spec);
        let g1 = poly(&ring, &tg1);
        let g2 = poly(&ring, &tg2);
        prop_assume!(!g1.is_zero() || !g2.is_zero());
        let ideal = Ideal::new(&ring, vec![g1.clone(), g2.clone()]).unwrap();
        let f = poly(&ring, &tf);
        let nf = ideal.normal_form(&f).unwrap();
        prop_assert_eq!(ideal.normal_form(&nf).unwrap(), nf.clone());
        prop_assert!(ideal.contains(&f.sub(&nf)).unwrap());
        // Multiples of the generators are members and reduce to zero.
        prop_assert!(ideal.contains(&g1.mul(&f)).unwrap());
        prop_assert!(ideal.contains(&g2.mul(&f).add(&g1)).unwrap());
    }

    #[test]
    fn diagonal_affine_automorphism_coherence(
        spec in specs(),
        ta in terms(),
        tb in terms(),
        c0 in 1i64..=3,
        c1 in 1i64..=3,
        d0 in -3i64..=3,
        d1 in -3i64..=3,
        flip in any::<bool>(),
    ) {
        let ring = ring2(spec);
        let sign = if flip { -1 } else { 1 };
        let mut fwd = vec![];
        let mut bwd = vec![];
        for (i, (c, d)) in [(c0 * sign, d0), (c1, d1)].into_iter().enumerate() {
            let cf = FieldElement::from_int(spec, c);
            let z = Polynomial::var(&ring, i);
            fwd.push(z.scale(&cf).add(&Polynomial::from_int(&ring, d)));
            bwd.push(
                z.sub(&Polynomial::from_int(&ring, d)).scale(&cf.inv().unwrap()),
            );
        }
        let sigma = RingAutomorphism::new(&ring, fwd, bwd).unwrap();
        let a = poly(&ring, &ta);
        let b = poly(&ring, &tb);
        // Inverse round trip, multiplicativity, and power composition.
        prop_assert_eq!(sigma.apply(&sigma.apply(&a, 1).unwrap(), -1).unwrap(), a.clone());
        prop_assert_eq!(sigma.apply(&sigma.apply(&a, -1).unwrap(), 1).unwrap(), a.clone());
        prop_assert_eq!(
            sigma.apply(&a.mul(&b), 1).unwrap(),
            sigma.apply(&a, 1).unwrap().mul(&sigma.apply(&b, 1).unwrap())
        );
        prop_assert_eq!(
            sigma.apply(&a, 2).unwrap(),
            sigma.apply(&sigma.apply(&a, 1).unwrap(), 1).unwrap()
        );
    }
}

/// The order-3 scaling algebra from the worked fixture, built directly.
fn cyclotomic_algebra() -> Arc<BRAlgebra> {
    let spec = FieldSpec::cyclotomic(3).unwrap();
    let ring = PolyRing::new(spec, &["z1", "z2"]).unwrap();
    let sigma = RingAutomorphism::new(
        &ring,
        vec![
            parse_polynomial(&ring, "q*z1").unwrap(),
            parse_polynomial(&ring, "q^2*z2").unwrap(),
        ],
        vec![
            parse_polynomial(&ring, "q^2*z1").unwrap(),
            parse_polynomial(&ring, "q*z2").unwrap(),
        ],
    )
    .unwrap();
    let j = Ideal::new(
        &ring,
        vec![
            parse_polynomial(&ring, "z1 - 1").unwrap(),
            parse_polynomial(&ring, "z2 - 1").unwrap(),
        ],
    )
    .unwrap();
    let h = Ideal::new(
        &ring,
        vec![
            parse_polynomial(&ring, "z1 - q^2").unwrap(),
            parse_polynomial(&ring, "z2 - q").unwrap(),
        ],
    )
    .unwrap();
    BRAlgebra::new(&ring, sigma, h, j).unwrap()
}

/// Maps raw term data into the degree-n component by multiplying against
/// its reduced basis.
fn component_element(b: &Arc<BRAlgebra>, n: i64, data: &[Terms]) -> Polynomial {
    let mut acc = Polynomial::zero(b.ring());
    for (g, t) in b.component(n).reduced_basis().iter().zip(data.iter().cycle()) {
        acc = acc.add(&g.mul(&poly(b.ring(), t)));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn graded_element_round_trip_and_degree_additivity(
        n in -2i64..=2,
        m in -2i64..=2,
        ta in prop::collection::vec(terms(), 2),
        tb in prop::collection::vec(terms(), 2),
    ) {
        let b = cyclotomic_algebra();
        let ga = component_element(&b, n, &ta);
        let gb = component_element(&b, m, &tb);
        prop_assume!(!ga.is_zero() && !gb.is_zero());
        let u = GradedElement::new(&b, vec![(n, ga)]).unwrap();
        let v = GradedElement::new(&b, vec![(m, gb)]).unwrap();
        // Round trip through the display syntax.
        let parsed = parse_graded_element(&b, &u.to_string()).unwrap();
        prop_assert_eq!(&parsed, &u);
        // Products of nonzero homogeneous elements are nonzero of summed
        // degree: the algebra is a domain.
        let prod = u.multiply(&v).unwrap();
        prop_assert!(!prod.is_zero());
        prop_assert_eq!(prod.degrees(), vec![n + m]);
    }
}

fn matrix(spec: FieldSpec, d: usize, data: &[i64]) -> Matrix {
    let entries = data[..d * d]
        .iter()
        .map(|&c| FieldElement::from_int(spec, c))
        .collect();
    Matrix::new(spec, d, d, entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matrix_algebra_and_inverse(
        spec in specs(),
        d in 2usize..=3,
        da in prop::collection::vec(-4i64..=4, 9),
        db in prop::collection::vec(-4i64..=4, 9),
        dc in prop::collection::vec(-4i64..=4, 9),
    ) {
        let a = matrix(spec, d, &da);
        let b = matrix(spec, d, &db);
        let c = matrix(spec, d, &dc);
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        if let Some(inv) = a.inverse() {
            prop_assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(spec, d));
            prop_assert_eq!(inv.mul(&a).unwrap(), Matrix::identity(spec, d));
        }
    }

    #[test]
    fn invariant_factors_are_conjugation_invariant(
        d in 2usize..=3,
        da in prop::collection::vec(-3i64..=3, 9),
        dp in prop::collection::vec(-3i64..=3, 9),
    ) {
        let spec = FieldSpec::rationals();
        let a = matrix(spec, d, &da);
        let p = matrix(spec, d, &dp);
        prop_assume!(p.inverse().is_some());
        let conj = p.mul(&a).unwrap().mul(&p.inverse().unwrap()).unwrap();
        prop_assert_eq!(invariant_factors(&a), invariant_factors(&conj));
        // The invariant factors form a divisibility chain multiplying to
        // the characteristic polynomial degree.
        let factors = invariant_factors(&a);
        let total: usize = factors.iter().map(|f| f.degree().unwrap()).sum();
        prop_assert_eq!(total, d);
        for w in factors.windows(2) {
            let (_, rem) = w[1].divrem(&w[0]);
            prop_assert!(rem.is_zero());
        }
    }

    #[test]
    fn upoly_division_and_gcd(
        spec in specs(),
        cf in prop::collection::vec(-5i64..=5, 0..=5),
        cg in prop::collection::vec(-5i64..=5, 1..=4),
    ) {
        let f = UPoly::from_ints(spec, &cf);
        let g = UPoly::from_ints(spec, &cg);
        prop_assume!(!g.is_zero());
        let (quo, rem) = f.divrem(&g);
        prop_assert_eq!(quo.mul(&g).add(&rem), f.clone());
        prop_assert!(rem.degree().unwrap_or(0) < g.degree().unwrap() || rem.is_zero());
        let d = f.gcd(&g);
        if !d.is_zero() {
            prop_assert!(f.divrem(&d).1.is_zero());
            prop_assert!(g.divrem(&d).1.is_zero());
            prop_assert!(d.leading().unwrap().is_one());
        }
    }
}
