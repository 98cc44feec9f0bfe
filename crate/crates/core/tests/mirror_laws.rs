//! Ring laws, unit, trace and Frobenius identities of the theta basis.

use std::sync::OnceLock;

use mirror_core::lattice::{LatticeVector, RationalPoint, Seed, SkewForm};
use mirror_core::mirror::{generic_basepoints, trace, MirrorAlgebra, ThetaExpansion};
use mirror_core::scattering::{complete, ScatteringDiagram};
use proptest::prelude::*;

const K: u32 = 4;

type E = ThetaExpansion<i64>;

fn v(c: &[i64]) -> LatticeVector {
    LatticeVector::new(c.to_vec())
}

fn a2() -> &'static ScatteringDiagram<i64> {
    static D: OnceLock<ScatteringDiagram<i64>> = OnceLock::new();
    D.get_or_init(|| complete(&Seed::a2(), K).unwrap())
}

fn algebra(d: &ScatteringDiagram<i64>) -> MirrorAlgebra<'_, i64> {
    let near = RationalPoint::from_fractions(&[(5, 7), (3, 11)]);
    let bp = generic_basepoints(d, &near, 1, 2 * K as i64 + 8).unwrap().remove(0);
    MirrorAlgebra::new(d, bp, K).unwrap()
}

fn exponent() -> impl Strategy<Value = LatticeVector> {
    (-2i64..=2, -2i64..=2).prop_map(|(a, b)| v(&[a, b]))
}

/// Small nonnegative combination of theta functions above a random base.
fn expansion() -> impl Strategy<Value = E> {
    (exponent(), prop::collection::vec(((0i64..=1, 0i64..=1), 1i64..=3), 1..3)).prop_map(|(base, ts)| {
        let terms = ts.into_iter().map(|((a, b), c)| (&base + &v(&[a, b]), c));
        E::from_terms(a2(), base.clone(), terms, K).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn commutative_and_associative(a in expansion(), b in expansion(), c in expansion()) {
        let alg = algebra(a2());
        let ab = alg.multiply(&a, &b).unwrap();
        prop_assert_eq!(&ab, &alg.multiply(&b, &a).unwrap());
        let left = alg.multiply(&ab, &c).unwrap();
        let right = alg.multiply(&a, &alg.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(ab.is_nonnegative());
    }

    #[test]
    fn unit_law(a in expansion()) {
        let alg = algebra(a2());
        prop_assert_eq!(alg.multiply(&E::basis(LatticeVector::zero(2), K), &a).unwrap(), a);
    }

    #[test]
    fn frobenius(ps in prop::collection::vec(exponent(), 1..=4)) {
        let alg = algebra(a2());
        let xs: Vec<E> = ps.iter().map(|p| E::basis(p.clone(), K)).collect();
        prop_assert_eq!(alg.pairing(&xs).unwrap(), alg.pairing_direct(&xs).unwrap());
    }

    #[test]
    fn pairing_is_symmetric(p in exponent(), q in exponent()) {
        let alg = algebra(a2());
        let (a, b) = (E::basis(p, K), E::basis(q, K));
        prop_assert_eq!(alg.pairing(&[a.clone(), b.clone()]).unwrap(), alg.pairing(&[b, a]).unwrap());
    }

    #[test]
    fn torus_pairing_is_a_delta(p in exponent(), q in exponent()) {
        let seed = Seed::new(SkewForm::rank2(1), vec![]).unwrap();
        let d = ScatteringDiagram::<i64>::initial(&seed, K);
        let alg = algebra(&d);
        let t = alg.structure_constants(&[p.clone(), q.clone()], K).unwrap();
        prop_assert_eq!(t.entries.len(), 1);
        prop_assert_eq!(t.get(&(&p + &q)), 1);
        let pair = alg.pairing(&[E::basis(p.clone(), K), E::basis(q.clone(), K)]).unwrap();
        prop_assert_eq!(pair, i64::from(p == -&q));
    }
}

#[test]
fn trace_reads_the_unit_coefficient() {
    let d = a2();
    let zero = LatticeVector::zero(2);
    assert_eq!(trace(&E::basis(zero.clone(), K)), 1);
    assert_eq!(trace(&E::basis(v(&[1, 0]), K)), 0);
    let e = E::from_terms(d, zero.clone(), [(zero, 3), (v(&[1, 0]), 5)], K).unwrap();
    assert_eq!(trace(&e), 3);
}

#[test]
fn gram_matrix_has_full_rank_on_a_ball() {
    let alg = algebra(a2());
    let pts: Vec<LatticeVector> =
        (-1..=1).flat_map(|a| (-1..=1).map(move |b| v(&[a, b]))).collect();
    let (m, rank) = alg.gram_matrix(&pts, K).unwrap();
    assert_eq!(m.len(), pts.len());
    assert_eq!(rank, pts.len());
}
