//! Toric classes on the built-in surfaces: worked examples and random invariants.

use mirror_core::lattice::{LatticeVector, RationalPoint};
use mirror_core::toric::{
    build_phi, degenerate_product, stanley_reisner_product, straight_count, toric_product, toric_product_at, tripod,
    Bound, CurveClass, Fan, PlSegment, Spine, SpineEdge,
};
use num_rational::BigRational;
use proptest::prelude::*;

fn v(c: &[i64]) -> LatticeVector {
    LatticeVector::new(c.to_vec())
}

fn line_class() -> CurveClass {
    CurveClass(vec![1, 1, 1])
}

fn fans() -> Vec<Fan> {
    vec![Fan::p2(), Fan::p1xp1(), Fan::bl1_p2()]
}

#[test]
fn p2_examples() {
    let fan = Fan::p2();
    let phi = build_phi(&fan).unwrap();
    for i in 0..3 {
        assert_eq!(fan.kink(i), line_class());
    }
    let p = RationalPoint::from_fractions(&[(0, 1), (3, 10)]);
    let line = PlSegment { point: p.clone(), velocity: v(&[1, 0]), from: Bound::Infinite, to: Bound::Infinite };
    assert_eq!(phi.segment_class(&line).unwrap(), line_class());
    let doubled = PlSegment { velocity: v(&[2, 0]), ..line };
    assert_eq!(phi.segment_class(&doubled).unwrap(), line_class().scale(2));
    let inside = PlSegment::finite(RationalPoint::from_fractions(&[(1, 3), (1, 2)]), v(&[1, 1]), BigRational::from_integer(5.into()));
    assert!(phi.segment_class(&inside).unwrap().is_zero());
    assert_eq!(toric_product(&phi, &v(&[1, 0]), &v(&[-1, 0])).unwrap(), (v(&[0, 0]), line_class()));
    assert_eq!(fan.weight(&v(&[1, 0])).0, vec![1, 0, 0]);
    assert_eq!(fan.weight(&v(&[-1, 0])).0, vec![0, 1, 1]);
}

#[test]
fn straight_count_examples() {
    let phi = build_phi(&Fan::p2()).unwrap();
    let x = RationalPoint::from_fractions(&[(1, 3), (1, 7)]);
    let line = Spine {
        vertices: vec![x.clone()],
        edges: vec![
            SpineEdge { from: 0, to: None, velocity: v(&[1, 0]) },
            SpineEdge { from: 0, to: None, velocity: v(&[-1, 0]) },
        ],
    };
    assert_eq!(straight_count(&phi, &line, &line_class()).unwrap(), 1);
    assert_eq!(straight_count(&phi, &line, &line_class().scale(2)).unwrap(), 0);
    let bent = tripod(&x, &v(&[1, 0]), &v(&[0, 1]));
    assert_eq!(straight_count(&phi, &bent, &CurveClass::zero(3)).unwrap(), 0);
}

fn vector() -> impl Strategy<Value = LatticeVector> {
    (-4i64..=4, -4i64..=4).prop_map(|(a, b)| v(&[a, b]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weight_identity_and_support(f in 0usize..3, a in vector(), b in vector()) {
        let fan = &fans()[f];
        let phi = build_phi(fan).unwrap();
        let (s, g) = toric_product(&phi, &a, &b).unwrap();
        prop_assert_eq!(&s, &(&a + &b));
        prop_assert_eq!(fan.weight(&a).add(&fan.weight(&b)), fan.weight(&s).add(&g));
        prop_assert_eq!(g.is_zero(), fan.share_cone(&a, &b));
        prop_assert_eq!(&toric_product_at(&phi, &a, &b, 2).unwrap().1, &g);
        prop_assert!(fan.nef_generators().iter().all(|n| g.pair_divisor(n) >= 0));
        prop_assert_eq!(degenerate_product(&phi, &a, &b).unwrap(), stanley_reisner_product(fan, &a, &b));
    }

    #[test]
    fn cocycle(f in 0usize..3, a in vector(), b in vector(), c in vector()) {
        let phi = build_phi(&fans()[f]).unwrap();
        let g = |x: &LatticeVector, y: &LatticeVector| toric_product(&phi, x, y).unwrap().1;
        prop_assert_eq!(g(&a, &b).add(&g(&(&a + &b), &c)), g(&b, &c).add(&g(&a, &(&b + &c))));
    }

    #[test]
    fn segment_classes_add(
        f in 0usize..3,
        p in ((-20i64..=20, 1i64..=7), (-20i64..=20, 1i64..=7)),
        vel in vector(),
        t1 in (1i64..=20, 1i64..=5),
        t2 in (1i64..=20, 1i64..=5),
    ) {
        prop_assume!(!vel.is_zero());
        let phi = build_phi(&fans()[f]).unwrap();
        let start = RationalPoint::from_fractions(&[p.0, p.1]);
        let t1 = BigRational::new(t1.0.into(), t1.1.into());
        let t2 = BigRational::new(t2.0.into(), t2.1.into());
        let mid = start.offset(&t1, &vel);
        let whole = phi.segment_class(&PlSegment::finite(start.clone(), vel.clone(), &t1 + &t2));
        let first = phi.segment_class(&PlSegment::finite(start, vel.clone(), t1));
        let second = phi.segment_class(&PlSegment::finite(mid, vel, t2));
        if let (Ok(w), Ok(a), Ok(b)) = (whole, first, second) {
            prop_assert_eq!(w, a.add(&b));
        }
    }
}
