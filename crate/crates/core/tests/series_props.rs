//! Algebraic invariants of truncated series, checked against a dense convolution oracle.

use std::collections::HashMap;

use mirror_core::lattice::{LatticeVector, Seed};
use mirror_core::series::{TruncatedSeries, WallFunction};
use num_bigint::BigInt;
use proptest::prelude::*;

type S = TruncatedSeries<i64>;

const K: u32 = 5;

fn series(base: (i64, i64), terms: Vec<((i64, i64), i64)>) -> S {
    let seed = Seed::a2();
    let terms = terms.into_iter().map(|((a, b), c)| (LatticeVector::new(vec![a, b]), c));
    S::from_terms(&seed, LatticeVector::new(vec![base.0, base.1]), terms, K).unwrap()
}

fn arb_series() -> impl Strategy<Value = S> {
    let base = (-3i64..=3, -3i64..=3);
    let terms = prop::collection::vec(((0i64..=K as i64, 0i64..=K as i64), -4i64..=4), 0..8);
    (base, terms).prop_map(|(b, t)| series(b, t))
}

fn arb_unit() -> impl Strategy<Value = S> {
    (arb_series(), prop::bool::ANY).prop_map(|(s, neg)| {
        let mut s = s.clone();
        let c = s.constant_term();
        s.add_term(LatticeVector::zero(2), if neg { -1 - c } else { 1 - c });
        s
    })
}

/// Dense product of absolute exponents with degree filter.
fn oracle_mul(a: &S, b: &S) -> HashMap<(i64, i64), i64> {
    let mut out = HashMap::new();
    for (p, x) in a.terms() {
        for (q, y) in b.terms() {
            let (s0, s1) = (p[0] + q[0], p[1] + q[1]);
            if s0 + s1 <= K as i64 {
                let e = (a.base()[0] + b.base()[0] + s0, a.base()[1] + b.base()[1] + s1);
                *out.entry(e).or_insert(0) += x * y;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn absolute(s: &S) -> HashMap<(i64, i64), i64> {
    s.exponents().map(|(e, c)| ((e[0], e[1]), *c)).collect()
}

proptest! {
    #[test]
    fn product_matches_oracle(a in arb_series(), b in arb_series()) {
        prop_assert_eq!(absolute(&a.multiply(&b).unwrap()), oracle_mul(&a, &b));
    }

    #[test]
    fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
        prop_assert_eq!(
            a.multiply(&b).unwrap().multiply(&c).unwrap(),
            a.multiply(&b.multiply(&c).unwrap()).unwrap()
        );
        let c0 = S::from_terms(&Seed::a2(), b.base().clone(), c.terms().map(|(p, x)| (p.clone(), *x)), K).unwrap();
        prop_assert_eq!(
            a.multiply(&b.add(&c0).unwrap()).unwrap(),
            a.multiply(&b).unwrap().add(&a.multiply(&c0).unwrap()).unwrap()
        );
    }

    #[test]
    fn truncation_is_a_homomorphism(a in arb_series(), b in arb_series(), k in 0u32..=K) {
        prop_assert_eq!(
            a.multiply(&b).unwrap().truncate(k),
            a.truncate(k).multiply(&b.truncate(k)).unwrap()
        );
    }

    #[test]
    fn units_invert(u in arb_unit()) {
        let inv = u.inverse().unwrap();
        let one = u.multiply(&inv).unwrap();
        prop_assert_eq!(one, S::one(2, K));
        prop_assert_eq!(u.pow(-1).unwrap(), inv);
    }

    #[test]
    fn powers_are_repeated_products(a in arb_series(), n in 0i64..4) {
        let mut acc = S::one(2, K);
        for _ in 0..n {
            acc = acc.multiply(&a).unwrap();
        }
        prop_assert_eq!(a.pow(n).unwrap(), acc);
    }

    #[test]
    fn coefficient_rings_agree(a in arb_series(), b in arb_series()) {
        let big = |s: &S| {
            TruncatedSeries::<BigInt>::from_terms(
                &Seed::a2(),
                s.base().clone(),
                s.terms().map(|(p, c)| (p.clone(), BigInt::from(*c))),
                K,
            )
            .unwrap()
        };
        let p = big(&a).multiply(&big(&b)).unwrap();
        let q = a.multiply(&b).unwrap();
        let ps: Vec<(LatticeVector, String)> = p.terms().map(|(e, c)| (e.clone(), c.to_string())).collect();
        let qs: Vec<(LatticeVector, String)> = q.terms().map(|(e, c)| (e.clone(), c.to_string())).collect();
        prop_assert_eq!(ps, qs);
    }

    #[test]
    fn wall_function_powers(cs in prop::collection::vec(-3i64..=3, 0..4), a in -3i64..=3) {
        let seed = Seed::a2();
        let f = WallFunction::new(&seed, LatticeVector::new(vec![1, 1]), cs, 4).unwrap();
        let lhs = f.power(a);
        let rhs = f.to_series().pow(a);
        if let Ok(rhs) = rhs {
            for (j, c) in lhs.iter().enumerate() {
                let e = LatticeVector::new(vec![j as i64, j as i64]);
                prop_assert_eq!(*c, rhs.coeff(&e));
            }
        }
    }
}

#[test]
fn non_monoid_offsets_rejected() {
    let seed = Seed::a2();
    let r = S::from_terms(&seed, LatticeVector::new(vec![0, 0]), [(LatticeVector::new(vec![-1, 0]), 1)], 3);
    assert!(r.is_err());
}
