use std::collections::HashSet;

use crate::cone::Cone;
use crate::lattice::{LatticeVector, Seed};

/// Support cone paired with the monomial exponent it may carry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CWall {
    pub support: Cone,
    pub monomial: LatticeVector,
}

impl CWall {
    pub fn is_incoming(&self) -> bool {
        self.support.contains_vector(&self.monomial)
    }

    /// Whether `support` lies inside this cone with a monomial parallel to `direction`.
    pub fn confines(&self, support: &Cone, direction: &LatticeVector) -> bool {
        parallel(&self.monomial, direction) && self.support.contains_cone(support)
    }
}

fn parallel(a: &LatticeVector, b: &LatticeVector) -> bool {
    match (a.primitive_part(), b.primitive_part()) {
        (Some((pa, _)), Some((pb, _))) => pa == pb || pa == -pb,
        _ => false,
    }
}

/// The saturated set `W_d`: initial pairs `(e^perp, j e)` closed under the sum rule
/// `(d1, n1) + (d2, n2) = (d1 cap d2 - R_{>=0}(n1 + n2), n1 + n2)`, applied when
/// `pair(n1, n2) != 0` or `n1` and `n2` are parallel, up to degree `d`.
pub fn cwall_supports(seed: &Seed, d: u32) -> Vec<CWall> {
    let r = seed.rank();
    let mut all: Vec<CWall> = Vec::new();
    let mut seen: HashSet<CWall> = HashSet::new();
    for &i in seed.unfrozen() {
        let e = seed.generator(i);
        let support = Cone::hyperplane(&seed.form().functional(&e));
        for j in 1..=d as i64 {
            let w = CWall { support: support.clone(), monomial: e.scale(j) };
            if seen.insert(w.clone()) {
                all.push(w);
            }
        }
    }
    let mut frontier = 0;
    while frontier < all.len() {
        let end = all.len();
        let mut fresh = Vec::new();
        for a in frontier..end {
            for b in 0..end {
                if b >= frontier && b < a {
                    continue;
                }
                let (w1, w2) = (&all[a], &all[b]);
                let n = &w1.monomial + &w2.monomial;
                if seed.degree(&n).is_none_or(|deg| deg > d) {
                    continue;
                }
                if seed.pair(&w1.monomial, &w2.monomial) == 0 && !parallel(&w1.monomial, &w2.monomial) {
                    continue;
                }
                let support = w1.support.intersect(&w2.support).add_ray(&-&n);
                if support.dim() + 1 != r {
                    continue;
                }
                let w = CWall { support, monomial: n };
                if seen.insert(w.clone()) {
                    fresh.push(w);
                }
            }
        }
        frontier = end;
        all.extend(fresh);
    }
    all.sort_by(|a, b| {
        let da = seed.degree(&a.monomial);
        let db = seed.degree(&b.monomial);
        da.cmp(&db)
            .then_with(|| a.monomial.cmp(&b.monomial))
            .then_with(|| a.support.generators().cmp(&b.support.generators()))
    });
    all
}
