//! Theta functions from broken lines against the cluster mutation oracle (A2), plus
//! positivity, validation and chamber-invariance properties.

use std::sync::OnceLock;

use mirror_core::broken_lines::{
    chamber_basepoints, chamber_representatives, enumerate_broken_lines, positive_chamber_basepoint, theta,
    validate_broken_line,
};
use mirror_core::cluster::{alternating_sequence, mutation_sequence, ClusterSeed};
use mirror_core::lattice::{LatticeVector, RationalPoint, Seed};
use mirror_core::scattering::{complete, ScatteringDiagram};
use proptest::prelude::*;

fn v(c: &[i64]) -> LatticeVector {
    LatticeVector::new(c.to_vec())
}

fn kronecker2() -> &'static ScatteringDiagram<i64> {
    static D: OnceLock<ScatteringDiagram<i64>> = OnceLock::new();
    D.get_or_init(|| complete(&Seed::kronecker(2), 4).unwrap())
}

/// Every cluster variable equals the theta function at its minimal exponent, up to order `k`.
fn cluster_variables_match(seed: &Seed, k: u32, depth: usize) {
    let d = complete::<i64>(seed, k).unwrap();
    let cs = ClusterSeed::from_seed(seed);
    let trace = mutation_sequence::<i64>(&cs, &alternating_sequence(&cs, depth)).unwrap();
    let vars = trace.distinct_variables();
    let gs: Vec<LatticeVector> = vars.iter().map(|x| x.minimal_exponent(seed).unwrap()).collect();
    let q = positive_chamber_basepoint(&d, &gs, k).unwrap();
    for (x, g) in vars.iter().zip(&gs) {
        let th = theta(&d, g, &q.point, k).unwrap();
        let mut expected: Vec<(LatticeVector, i64)> = x
            .terms()
            .map(|(e, c)| (LatticeVector::new(e.clone()), *c))
            .filter(|(e, _)| seed.degree(&(e - g)).is_some_and(|deg| deg <= k))
            .collect();
        expected.sort();
        let mut got: Vec<(LatticeVector, i64)> = th.series.exponents().map(|(e, c)| (e, *c)).collect();
        got.sort();
        assert_eq!(got, expected, "theta_{g} vs cluster variable {x}");
    }
}

#[test]
fn a2_thetas_are_cluster_variables() {
    cluster_variables_match(&Seed::a2(), 4, 5);
}

#[test]
fn kronecker_theta_bends_with_the_form_multiplicity() {
    let d = kronecker2();
    let m = v(&[-1, 0]);
    let q = positive_chamber_basepoint(d, std::slice::from_ref(&m), 4).unwrap();
    let got: Vec<(LatticeVector, i64)> = theta(d, &m, &q.point, 4).unwrap().series.exponents().map(|(e, c)| (e, *c)).collect();
    assert_eq!(got, vec![(v(&[-1, 0]), 1), (v(&[-1, 1]), 2), (v(&[-1, 2]), 1)]);
}

#[test]
fn a2_cluster_monomial_is_a_theta() {
    let d = complete::<i64>(&Seed::a2(), 4).unwrap();
    let m = v(&[1, 1]);
    let q = positive_chamber_basepoint(&d, std::slice::from_ref(&m), 4).unwrap();
    let got: Vec<(LatticeVector, i64)> = theta(&d, &m, &q.point, 4).unwrap().series.exponents().map(|(e, c)| (e, *c)).collect();
    assert_eq!(got, vec![(m, 1)]);
}

#[test]
fn representatives_cover_every_chamber() {
    let d = complete::<i64>(&Seed::a2(), 4).unwrap();
    assert_eq!(chamber_representatives(&d).unwrap().len(), 6);
    let d = kronecker2();
    assert_eq!(chamber_representatives(d).unwrap().len(), d.wall_hyperplanes().len() * 2);
}

fn near_point() -> impl Strategy<Value = RationalPoint> {
    ((-30i64..=30, 1i64..=9), (-30i64..=30, 1i64..=9))
        .prop_filter("off the axes", |((a, _), (b, _))| *a != 0 && *b != 0)
        .prop_map(|(x, y)| RationalPoint::from_fractions(&[x, y]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lines_are_valid_and_positive(m in (-2i64..=2, -2i64..=2), near in near_point()) {
        let d = kronecker2();
        let m = v(&[m.0, m.1]);
        let Ok(mut qs) = chamber_basepoints(d, &near, 1, std::slice::from_ref(&m), 4) else {
            return Err(TestCaseError::reject("near point on a wall"));
        };
        let q = qs.remove(0).point;
        let lines = enumerate_broken_lines(d, &m, &q, 4).unwrap();
        prop_assert!(!lines.is_empty());
        for l in &lines {
            validate_broken_line(d, l, 4).unwrap();
            let (c, e) = l.final_monomial();
            prop_assert!(*c > 0);
            prop_assert!(d.seed().degree(&(e - &m)).is_some_and(|g| g <= 4));
        }
    }

    #[test]
    fn theta_is_constant_on_chambers(m in (-2i64..=2, -2i64..=2), near in near_point()) {
        let d = kronecker2();
        let m = v(&[m.0, m.1]);
        let Ok(qs) = chamber_basepoints(d, &near, 3, std::slice::from_ref(&m), 4) else {
            return Err(TestCaseError::reject("near point on a wall"));
        };
        let t0 = theta(d, &m, &qs[0].point, 4).unwrap().series;
        for q in &qs[1..] {
            prop_assert_eq!(&theta(d, &m, &q.point, 4).unwrap().series, &t0);
        }
    }
}
