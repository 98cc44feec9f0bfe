//! Completion against an independent brute-force oracle, plus loop and
//! confinement properties of completed diagrams.

use std::collections::BTreeMap;

use mirror_core::cone::Cone;
use mirror_core::lattice::{LatticeVector, RationalPoint, Seed};
use mirror_core::linalg::{self, q};
use mirror_core::scattering::{complete, cwall_supports, Path, Provenance, ScatteringDiagram, Wall};
use mirror_core::series::{TruncatedSeries, WallFunction};
use num_traits::{ToPrimitive, Zero};

type S = TruncatedSeries<i64>;

fn v(c: &[i64]) -> LatticeVector {
    LatticeVector::new(c.to_vec())
}

/// Square-ish loop whose vertices avoid every ray of bounded degree.
fn oracle_loop() -> Path {
    let pts = [[7919, 13], [-17, 7907], [-7901, -7883], [29, -7877]];
    Path::closed(pts.iter().map(|c| RationalPoint::from_ints(c)).collect()).unwrap()
}

fn diagram(seed: &Seed, k: u32, extra: &BTreeMap<LatticeVector, Vec<i64>>) -> ScatteringDiagram<i64> {
    let mut walls = ScatteringDiagram::<i64>::initial(seed, k).walls().to_vec();
    for (n0, coeffs) in extra {
        let f = WallFunction::new(seed, n0.clone(), coeffs.clone(), k).unwrap();
        walls.push(Wall::new(seed, Cone::ray(&-n0), f, Provenance::Generated).unwrap());
    }
    ScatteringDiagram::new(seed.clone(), k, walls).unwrap()
}

/// Degree-`l` coefficients of the loop product on `z^(e1)`, `z^(e2)`.
fn defect(d: &ScatteringDiagram<i64>, l: u32, monomials: &[LatticeVector]) -> Vec<i64> {
    let lp = oracle_loop();
    let mut out = Vec::new();
    for i in 0..2 {
        let s = S::monomial(LatticeVector::basis(2, i), l);
        let r = d.path_ordered_product(&lp, &s).unwrap();
        for p in monomials {
            out.push(r.coeff(p));
        }
    }
    out
}

/// Solves for every generated wall coefficient by a linear solve per degree.
fn oracle_completion(seed: &Seed, k: u32) -> BTreeMap<LatticeVector, Vec<i64>> {
    let mut extra: BTreeMap<LatticeVector, Vec<i64>> = BTreeMap::new();
    for l in 1..=k {
        let ps: Vec<LatticeVector> = seed.monoid_elements(l).into_iter().filter(|p| seed.degree(p) == Some(l)).collect();
        let base = defect(&diagram(seed, k, &extra), l, &ps);
        if base.iter().all(|&c| c == 0) {
            continue;
        }
        let mut columns = Vec::new();
        for p in &ps {
            let (n0, j) = p.primitive_part().unwrap();
            let mut trial = extra.clone();
            let e = trial.entry(n0).or_default();
            if e.len() < j as usize {
                e.resize(j as usize, 0);
            }
            e[j as usize - 1] += 1;
            let dp = defect(&diagram(seed, k, &trial), l, &ps);
            columns.push(dp.iter().zip(&base).map(|(a, b)| a - b).collect::<Vec<_>>());
        }
        // least-squares-free exact solve: rows = defect entries, columns = unknowns
        let rows = base.len();
        let mut aug: Vec<Vec<_>> = (0..rows)
            .map(|r| {
                let mut row: Vec<_> = columns.iter().map(|c| q(c[r])).collect();
                row.push(q(-base[r]));
                row
            })
            .collect();
        let pivots = linalg::rref(&mut aug);
        assert!(!pivots.contains(&ps.len()), "oracle system inconsistent at degree {l}");
        assert_eq!(pivots.len(), ps.len(), "oracle system underdetermined at degree {l}");
        for (row, &pc) in pivots.iter().enumerate() {
            let c = &aug[row][ps.len()];
            if c.is_zero() {
                continue;
            }
            assert!(c.is_integer());
            let (n0, j) = ps[pc].primitive_part().unwrap();
            let e = extra.entry(n0).or_default();
            if e.len() < j as usize {
                e.resize(j as usize, 0);
            }
            e[j as usize - 1] += c.to_integer().to_i64().unwrap();
        }
    }
    extra.retain(|_, c| c.iter().any(|&x| x != 0));
    extra
}

fn generated(d: &ScatteringDiagram<i64>) -> BTreeMap<LatticeVector, Vec<i64>> {
    d.generated_walls().map(|w| (w.direction().clone(), w.function().coeffs().to_vec())).collect()
}

#[test]
fn a2_matches_oracle() {
    let seed = Seed::a2();
    let oracle = oracle_completion(&seed, 6);
    assert_eq!(oracle, BTreeMap::from([(v(&[1, 1]), vec![1])]));
    assert_eq!(generated(&complete(&seed, 6).unwrap()), oracle);
}

#[test]
fn kronecker_two_matches_oracle() {
    let seed = Seed::kronecker(2);
    let oracle = oracle_completion(&seed, 4);
    let d = complete::<i64>(&seed, 4).unwrap();
    assert_eq!(generated(&d), oracle);
    assert!(d.loop_is_identity(&oracle_loop()).unwrap());
}

#[test]
fn kronecker_three_matches_oracle() {
    let seed = Seed::kronecker(3);
    let oracle = oracle_completion(&seed, 4);
    assert_eq!(generated(&complete(&seed, 4).unwrap()), oracle);
}

#[test]
fn a2_loop_identity_explicit() {
    let d = complete::<i64>(&Seed::a2(), 5).unwrap();
    let lp = oracle_loop();
    assert_eq!(d.crossings(&lp).unwrap().len(), 5);
    let s = S::monomial(v(&[1, 0]), 5);
    assert_eq!(d.path_ordered_product(&lp, &s).unwrap(), s);
}

#[test]
fn random_loops_are_identity() {
    for seed in [Seed::a2(), Seed::kronecker(2)] {
        let d = complete::<i64>(&seed, 5).unwrap();
        let loops = d.random_loops(16, 7).unwrap();
        assert_eq!(d.loop_failures(&loops).unwrap(), 0);
        let broken = d.without_wall(d.walls().iter().position(|w| !w.is_initial()).unwrap());
        assert_eq!(broken.loop_failures(&loops).unwrap(), loops.len());
    }
}

#[test]
fn crossing_back_is_identity() {
    let d = complete::<i64>(&Seed::kronecker(2), 5).unwrap();
    let there = Path::segment(RationalPoint::from_ints(&[-5, -3]), RationalPoint::from_ints(&[-3, -5]));
    for e in [v(&[1, 0]), v(&[-2, 1]), v(&[3, -4]), v(&[0, -1])] {
        let s = S::monomial(e, 5);
        let t = d.path_ordered_product(&there, &s).unwrap();
        assert_ne!(t, s);
        assert_eq!(d.path_ordered_product(&there.reversed(), &t).unwrap(), s);
    }
}

#[test]
fn order_coherence() {
    for seed in [Seed::a2(), Seed::kronecker(2), Seed::kronecker(3)] {
        let big = complete::<i64>(&seed, 6).unwrap();
        for k in 0..6 {
            assert_eq!(big.truncate(k), complete(&seed, k).unwrap(), "k={k}");
        }
    }
}

#[test]
fn generated_walls_are_confined_and_outgoing() {
    for seed in [Seed::a2(), Seed::kronecker(2), Seed::kronecker(3)] {
        let k = 6;
        let d = complete::<i64>(&seed, k).unwrap();
        let w = cwall_supports(&seed, k);
        for g in d.generated_walls() {
            assert!(!g.is_incoming());
            assert!(g.function().is_nonnegative());
            assert!(w.iter().any(|c| c.confines(g.support(), g.direction())), "{g:?}");
        }
    }
}

#[test]
fn bigint_and_i64_agree() {
    use num_bigint::BigInt;
    let a = complete::<i64>(&Seed::kronecker(2), 6).unwrap();
    let b = complete::<BigInt>(&Seed::kronecker(2), 6).unwrap();
    let am: Vec<Vec<String>> = a.walls().iter().map(|w| w.function().coeffs().iter().map(|c| c.to_string()).collect()).collect();
    let bm: Vec<Vec<String>> = b.walls().iter().map(|w| w.function().coeffs().iter().map(|c| c.to_string()).collect()).collect();
    assert_eq!(am, bm);
}
