use std::collections::BTreeMap;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, Seed};
use crate::scalar::Coefficient;
use crate::series::{offset_degree, TruncatedSeries, WallFunction};

use super::{ScatteringDiagram, Wall};
use super::wall::Provenance;

/// Consistent completion of the initial diagram, order by order (rank 2 only).
///
/// At order `l` the loop product is the identity modulo `J^l`, so its degree-`l`
/// part is a derivation `z^v -> z^v sum_p D_p(v) z^p`. Each `p = j n0` is canceled
/// by adding `c z^(j n0)` to the outgoing wall on `-R_{>=0} n0`.
pub fn complete<C: Coefficient>(seed: &Seed, k: u32) -> Result<ScatteringDiagram<C>> {
    let r = seed.rank();
    if r > 2 {
        return Err(Error::UnsupportedRank(r));
    }
    let mut d = ScatteringDiagram::<C>::initial(seed, k);
    if r < 2 || d.walls.len() < 2 {
        return Ok(d);
    }
    // generated walls keyed by primitive direction
    let mut generated: BTreeMap<LatticeVector, WallFunction<C>> = BTreeMap::new();
    let initial = d.walls.clone();
    for l in 1..=k {
        let mut defects: BTreeMap<LatticeVector, Vec<C>> = BTreeMap::new();
        for i in 0..r {
            let e = LatticeVector::basis(r, i);
            let s = TruncatedSeries::monomial(e.clone(), l);
            let out = d.angular_loop_product(&s);
            for (p, c) in out.terms() {
                let dp = offset_degree(p);
                if dp == 0 {
                    if !c.is_one() {
                        return Err(Error::Completion(format!("loop changes the leading coefficient of z^{e}")));
                    }
                    continue;
                }
                if dp < l {
                    return Err(Error::Completion(format!("uncanceled term z^{p} below order {l}")));
                }
                defects.entry(p.clone()).or_insert_with(|| vec![C::zero(); r])[i] = c.clone();
            }
        }
        if defects.is_empty() {
            continue;
        }
        for (p, dv) in defects {
            let (n0, j) = p.primitive_part().expect("defect exponent is nonzero");
            let normal = seed.form().functional(&n0);
            // just before the ray -n0 counterclockwise, pair(n0, .) has sign -sign(normal . J(-n0))
            let jg = LatticeVector::new(vec![n0[1], -n0[0]]);
            let eps: i64 = if normal.dot(&jg) > 0 { -1 } else { 1 };
            let mut coeff: Option<C> = None;
            for (i, di) in dv.iter().enumerate() {
                let a = eps * normal[i];
                if a == 0 {
                    if !di.is_zero() {
                        return Err(Error::Completion(format!("defect at z^{p} is not a wall-crossing derivation")));
                    }
                    continue;
                }
                let c = (-di.clone())
                    .exact_div(&C::from_i64_exact(a))
                    .ok_or_else(|| Error::Completion(format!("non-integral wall coefficient at z^{p}")))?;
                match &coeff {
                    None => coeff = Some(c),
                    Some(prev) if *prev != c => {
                        return Err(Error::Completion(format!("inconsistent wall coefficient at z^{p}")));
                    }
                    _ => {}
                }
            }
            let c = coeff.ok_or_else(|| Error::Completion(format!("defect direction {n0} is skew-radical")))?;
            let f = match generated.get_mut(&n0) {
                Some(f) => f,
                None => generated.entry(n0.clone()).or_insert(WallFunction::new(seed, n0.clone(), vec![], k)?),
            };
            f.add_to_coeff(j as usize, c);
        }
        let mut walls = initial.clone();
        for (n0, f) in &generated {
            walls.push(Wall::new(seed, Cone::ray(&-n0), f.clone(), Provenance::Generated)?);
        }
        d = ScatteringDiagram::new(seed.clone(), k, walls)?;
    }
    for i in 0..r {
        let s = TruncatedSeries::monomial(LatticeVector::basis(r, i), k);
        if d.angular_loop_product(&s) != s {
            return Err(Error::Completion("loop product is not the identity after completion".into()));
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SkewForm;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    #[test]
    fn a2_pentagon() {
        let d = complete::<i64>(&Seed::a2(), 6).unwrap();
        assert_eq!(d.walls().len(), 3);
        let g: Vec<_> = d.generated_walls().collect();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].direction(), &v(&[1, 1]));
        assert_eq!(g[0].support().rays(), &[v(&[-1, -1])]);
        assert_eq!(g[0].function().coeffs(), &[1]);
    }

    #[test]
    fn single_unfrozen_direction() {
        let s = Seed::new(SkewForm::rank2(1), vec![0]).unwrap();
        let d = complete::<i64>(&s, 5).unwrap();
        assert_eq!(d.walls().len(), 1);
    }

    #[test]
    fn rank_three_is_unsupported() {
        let form = SkewForm::new(vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        let s = Seed::new(form, vec![0, 1, 2]).unwrap();
        assert_eq!(complete::<i64>(&s, 2), Err(Error::UnsupportedRank(3)));
    }

    #[test]
    fn order_zero_is_initial() {
        let d = complete::<i64>(&Seed::a2(), 0).unwrap();
        assert_eq!(d, ScatteringDiagram::initial(&Seed::a2(), 0));
    }
}
