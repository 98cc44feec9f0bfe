//! Structure constants of the theta basis, multiplication, trace and pairings.
//!
//! Products are evaluated as Laurent series at one certified basepoint and then
//! decomposed back into theta functions at the same basepoint: every
//! `theta_q = z^q (1 + eta)` with `eta` in `J`, so peeling off the lowest-degree
//! term repeatedly is a unitriangular solve with a unique answer.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use rayon::prelude::*;

use crate::broken_lines::{chamber_signature, theta};
use crate::error::{Error, Result};
use crate::lattice::{CertifiedPoint, LatticeVector, RationalPoint};
use crate::linalg;
use crate::scalar::Coefficient;
use crate::scattering::ScatteringDiagram;
use crate::series::{offset_degree, TruncatedSeries};

/// `sum_q c_q theta_q` with every `q - base` in `P` of degree at most `order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaExpansion<C> {
    base: LatticeVector,
    terms: BTreeMap<LatticeVector, C>,
    order: u32,
}

impl<C: Coefficient> ThetaExpansion<C> {
    pub fn zero(base: LatticeVector, order: u32) -> Self {
        ThetaExpansion { base, terms: BTreeMap::new(), order }
    }

    /// The basis element `theta_p`.
    pub fn basis(p: LatticeVector, order: u32) -> Self {
        let mut e = Self::zero(p.clone(), order);
        e.terms.insert(p, C::one());
        e
    }

    pub fn from_terms(
        d: &ScatteringDiagram<C>,
        base: LatticeVector,
        terms: impl IntoIterator<Item = (LatticeVector, C)>,
        order: u32,
    ) -> Result<Self> {
        let mut e = Self::zero(base, order);
        for (q, c) in terms {
            let off = &q - &e.base;
            let deg = d.seed().degree(&off).ok_or_else(|| Error::NotInMonoid(off.to_string()))?;
            if deg <= order {
                e.add_term(q, c);
            }
        }
        Ok(e)
    }

    pub fn base(&self) -> &LatticeVector {
        &self.base
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, q: &LatticeVector) -> C {
        self.terms.get(q).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, q: LatticeVector, c: C) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.remove(&q).unwrap_or_else(C::zero);
        let s = cur + c;
        if !s.is_zero() {
            self.terms.insert(q, s);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        if self.base != other.base {
            return Err(Error::InvalidArgument(format!("expansion bases differ: {} vs {}", self.base, other.base)));
        }
        let mut out = self.clone();
        for (q, c) in &other.terms {
            out.add_term(q.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(self.base.clone(), self.order);
        for (q, c) in &self.terms {
            out.add_term(q.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn truncate(&self, k: u32) -> Self {
        let k = k.min(self.order);
        let mut out = Self::zero(self.base.clone(), k);
        for (q, c) in &self.terms {
            if offset_degree(&(q - &self.base)) <= k {
                out.terms.insert(q.clone(), c.clone());
            }
        }
        out
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

/// Coefficient of `theta_0`.
pub fn trace<C: Coefficient>(a: &ThetaExpansion<C>) -> C {
    a.coeff(&LatticeVector::zero(a.base.len()))
}

/// Structure constants of `theta_{p_1} ... theta_{p_n}` at one basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstantTable<C> {
    pub inputs: Vec<LatticeVector>,
    pub entries: BTreeMap<LatticeVector, C>,
    pub order: u32,
    pub basepoint: CertifiedPoint,
}

impl<C: Coefficient> StructureConstantTable<C> {
    pub fn input_sum(&self) -> LatticeVector {
        sum(&self.inputs, self.basepoint.point.len())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|c| !c.is_negative())
    }

    pub fn get(&self, q: &LatticeVector) -> C {
        self.entries.get(q).cloned().unwrap_or_else(C::zero)
    }

    pub fn to_expansion(&self) -> ThetaExpansion<C> {
        let mut e = ThetaExpansion::zero(self.input_sum(), self.order);
        for (q, c) in &self.entries {
            e.add_term(q.clone(), c.clone());
        }
        e
    }
}

fn sum(ps: &[LatticeVector], rank: usize) -> LatticeVector {
    ps.iter().fold(LatticeVector::zero(rank), |a, p| &a + p)
}

/// Theta functions at a fixed certified basepoint, with a per-exponent cache.
pub struct MirrorAlgebra<'d, C> {
    d: &'d ScatteringDiagram<C>,
    basepoint: CertifiedPoint,
    order: u32,
    cache: Mutex<HashMap<LatticeVector, Arc<TruncatedSeries<C>>>>,
}

impl<'d, C: Coefficient> MirrorAlgebra<'d, C> {
    pub fn new(d: &'d ScatteringDiagram<C>, basepoint: CertifiedPoint, order: u32) -> Result<Self> {
        if order > d.order() {
            return Err(Error::OrderMismatch(order, d.order()));
        }
        if basepoint.point.len() != d.seed().rank() {
            return Err(Error::DimensionMismatch { expected: d.seed().rank(), found: basepoint.point.len() });
        }
        if !basepoint.verify() {
            return Err(Error::NonGenericEndpoint(format!("basepoint {} fails its certificate", basepoint.point)));
        }
        Ok(MirrorAlgebra { d, basepoint, order, cache: Mutex::new(HashMap::new()) })
    }

    pub fn diagram(&self) -> &ScatteringDiagram<C> {
        self.d
    }

    pub fn basepoint(&self) -> &CertifiedPoint {
        &self.basepoint
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.d.seed().rank()
    }

    /// `theta_m` at the basepoint modulo `J^(k+1)`.
    pub fn theta(&self, m: &LatticeVector, k: u32) -> Result<TruncatedSeries<C>> {
        if k > self.order {
            return Err(Error::OrderMismatch(k, self.order));
        }
        let cached = self.cache.lock().expect("theta cache").get(m).cloned();
        let full = match cached {
            Some(s) => s,
            None => {
                let s = Arc::new(theta(self.d, m, &self.basepoint.point, self.order)?.series);
                self.cache.lock().expect("theta cache").insert(m.clone(), s.clone());
                s
            }
        };
        Ok(full.truncate(k))
    }

    /// Writes a Laurent series with base `b` as `sum_q c_q theta_q`.
    pub fn decompose(&self, s: &TruncatedSeries<C>) -> Result<ThetaExpansion<C>> {
        let k = s.order();
        let base = s.base().clone();
        let mut rest = s.clone();
        let mut out = ThetaExpansion::zero(base.clone(), k);
        while let Some((p, c)) = lowest_term(&rest) {
            let q = &base + &p;
            let deg = offset_degree(&p);
            let th = self.theta(&q, k - deg)?;
            let mut shifted = TruncatedSeries::zero(base.clone(), k);
            for (r, x) in th.terms() {
                shifted.add_term(&p + r, x.clone() * c.clone());
            }
            rest = rest.sub(&shifted)?;
            out.add_term(q, c);
        }
        Ok(out)
    }

    /// Laurent product of `theta_{p_i}` modulo `J^(k+1)` relative to `sum p_i`.
    pub fn theta_product(&self, ps: &[LatticeVector], k: u32) -> Result<TruncatedSeries<C>> {
        if ps.is_empty() {
            return Err(Error::InvalidArgument("structure constants need at least one input".into()));
        }
        let mut acc = TruncatedSeries::one(self.rank(), k);
        for p in ps {
            if p.len() != self.rank() {
                return Err(Error::DimensionMismatch { expected: self.rank(), found: p.len() });
            }
            acc = acc.multiply(&self.theta(p, k)?)?;
        }
        Ok(acc)
    }

    /// Structure constants of the direct `n`-fold product.
    pub fn structure_constants(&self, ps: &[LatticeVector], k: u32) -> Result<StructureConstantTable<C>> {
        let prod = self.theta_product(ps, k)?;
        let e = self.decompose(&prod)?;
        Ok(StructureConstantTable {
            inputs: ps.to_vec(),
            entries: e.terms.into_iter().collect(),
            order: k,
            basepoint: self.basepoint.clone(),
        })
    }

    /// Bilinear product through binary structure constants.
    pub fn multiply(&self, a: &ThetaExpansion<C>, b: &ThetaExpansion<C>) -> Result<ThetaExpansion<C>> {
        if a.order != b.order {
            return Err(Error::OrderMismatch(a.order, b.order));
        }
        let k = a.order.min(self.order);
        let base = &a.base + &b.base;
        let pairs: Vec<(&LatticeVector, &C, &LatticeVector, &C)> =
            a.terms.iter().flat_map(|(q1, c1)| b.terms.iter().map(move |(q2, c2)| (q1, c1, q2, c2))).collect();
        let parts: Vec<Result<Option<ThetaExpansion<C>>>> = pairs
            .par_iter()
            .map(|(q1, c1, q2, c2)| {
                let used = offset_degree(&(*q1 - &a.base)) + offset_degree(&(*q2 - &b.base));
                if used > k {
                    return Ok(None);
                }
                let t = self.structure_constants(&[(*q1).clone(), (*q2).clone()], k - used)?;
                Ok(Some(t.to_expansion().scale(&((*c1).clone() * (*c2).clone()))))
            })
            .collect();
        let mut out = ThetaExpansion::zero(base, k);
        for part in parts {
            if let Some(e) = part? {
                for (q, c) in e.terms {
                    out.add_term(q, c);
                }
            }
        }
        Ok(out)
    }

    /// Iterated binary product `((a_1 a_2) a_3) ...`.
    pub fn product(&self, xs: &[ThetaExpansion<C>]) -> Result<ThetaExpansion<C>> {
        let (first, rest) = xs
            .split_first()
            .ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
        rest.iter().try_fold(first.clone(), |acc, x| self.multiply(&acc, x))
    }

    /// `Trace(a_1 ... a_n)` through iterated products.
    pub fn pairing(&self, xs: &[ThetaExpansion<C>]) -> Result<C> {
        if xs.is_empty() {
            return Err(Error::InvalidArgument("a pairing needs at least one argument".into()));
        }
        Ok(trace(&self.product(xs)?))
    }

    /// Multilinear pairing from direct `n`-fold structure constants at `q = 0`.
    pub fn pairing_direct(&self, xs: &[ThetaExpansion<C>]) -> Result<C> {
        if xs.is_empty() {
            return Err(Error::InvalidArgument("a pairing needs at least one argument".into()));
        }
        let k = xs.iter().map(|x| x.order).min().expect("nonempty").min(self.order);
        let mut tuples: Vec<(Vec<LatticeVector>, C, u32)> = vec![(Vec::new(), C::one(), 0)];
        for x in xs {
            let mut next = Vec::new();
            for (qs, c, used) in &tuples {
                for (q, cq) in &x.terms {
                    let u = used + offset_degree(&(q - &x.base));
                    if u > k {
                        continue;
                    }
                    let mut qs2 = qs.clone();
                    qs2.push(q.clone());
                    next.push((qs2, c.clone() * cq.clone(), u));
                }
            }
            tuples = next;
        }
        let zero = LatticeVector::zero(self.rank());
        let vals: Vec<Result<C>> = tuples
            .par_iter()
            .map(|(qs, c, used)| {
                let s = sum(qs, self.rank());
                if self.d.seed().degree(&(&zero - &s)).is_none_or(|dg| dg + used > k) {
                    return Ok(C::zero());
                }
                Ok(self.structure_constants(qs, k - used)?.get(&zero) * c.clone())
            })
            .collect();
        vals.into_iter().try_fold(C::zero(), |acc, v| Ok(acc + v?))
    }

    /// Matrix of `pairing(theta_p, theta_q)` and its rank over the rationals.
    pub fn gram_matrix(&self, points: &[LatticeVector], k: u32) -> Result<(Vec<Vec<C>>, usize)> {
        let mut seen = points.to_vec();
        seen.sort();
        seen.dedup();
        if seen.len() != points.len() {
            return Err(Error::InvalidArgument("gram matrix points must be distinct".into()));
        }
        let k = k.min(self.order);
        let rows: Vec<Result<Vec<C>>> = points
            .par_iter()
            .map(|p| {
                points
                    .iter()
                    .map(|q| {
                        self.pairing(&[ThetaExpansion::basis(p.clone(), k), ThetaExpansion::basis(q.clone(), k)])
                    })
                    .collect()
            })
            .collect();
        let m: Vec<Vec<C>> = rows.into_iter().collect::<Result<_>>()?;
        let qm: linalg::QMatrix = m
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| {
                        BigRational::from_integer(c.to_string().parse::<num_bigint::BigInt>().expect("integer coefficient"))
                    })
                    .collect()
            })
            .collect();
        let rank = linalg::rank(&qm);
        Ok((m, rank))
    }

    /// Whether `x` lies in the basepoint's chamber.
    pub fn same_chamber(&self, x: &RationalPoint) -> bool {
        chamber_signature(self.d, x) == chamber_signature(self.d, &self.basepoint.point)
    }
}

/// Lowest-degree term, ties broken lexicographically.
fn lowest_term<C: Coefficient>(s: &TruncatedSeries<C>) -> Option<(LatticeVector, C)> {
    s.terms()
        .min_by(|a, b| offset_degree(a.0).cmp(&offset_degree(b.0)).then_with(|| a.0.cmp(b.0)))
        .map(|(p, c)| (p.clone(), c.clone()))
}

/// Basepoint hazards for every exponent of sup-norm at most `radius` (rank 2).
pub fn radius_hazards<C: Coefficient>(d: &ScatteringDiagram<C>, radius: i64) -> Vec<LatticeVector> {
    let mut hs = d.wall_hyperplanes();
    if d.seed().rank() == 2 {
        for a in -radius..=radius {
            for b in -radius..=radius {
                let e = LatticeVector::new(vec![a, b]);
                if e.content() == 1 {
                    let h = LatticeVector::new(vec![-b, a]);
                    if !hs.contains(&h) && !hs.contains(&-&h) {
                        hs.push(h);
                    }
                }
            }
        }
    }
    hs
}

/// Certified basepoints in the chamber of `near`, avoiding every hazard of [`radius_hazards`].
pub fn generic_basepoints<C: Coefficient>(
    d: &ScatteringDiagram<C>,
    near: &RationalPoint,
    count: usize,
    radius: i64,
) -> Result<Vec<CertifiedPoint>> {
    let hazards = radius_hazards(d, radius);
    let sig = chamber_signature(d, near);
    if sig.contains(&0) {
        return Err(Error::NonGenericEndpoint(format!("{near} lies on a wall hyperplane")));
    }
    let r = near.len();
    let mut out: Vec<CertifiedPoint> = Vec::new();
    let mut scale = BigRational::new(1.into(), 5.into());
    let mut j: i64 = 0;
    let limit = 64 * (count as i64 + hazards.len() as i64 + 8);
    while out.len() < count {
        if j > limit {
            return Err(Error::NonGenericEndpoint(format!("no generic basepoints found near {near}")));
        }
        let t = BigRational::new((2 * j + 3).into(), (j + 2).into());
        let mut tp = BigRational::from_integer(1.into());
        let mut delta = Vec::with_capacity(r);
        for _ in 0..r {
            tp *= &t;
            delta.push(&tp * &scale);
        }
        j += 1;
        let cand = near.add(&RationalPoint::new(delta));
        if chamber_signature(d, &cand) != sig {
            scale /= BigRational::from_integer(2.into());
            continue;
        }
        let cert = CertifiedPoint { point: cand, constraint: None, avoided: hazards.clone() };
        if cert.verify() && !out.iter().any(|c| c.point == cert.point) {
            out.push(cert);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Seed, SkewForm};
    use crate::scattering::complete;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    fn positive_point() -> RationalPoint {
        RationalPoint::from_fractions(&[(5, 7), (3, 11)])
    }

    fn torus() -> ScatteringDiagram<i64> {
        ScatteringDiagram::initial(&Seed::new(SkewForm::rank2(1), vec![]).unwrap(), 4)
    }

    #[test]
    fn torus_products() {
        let d = torus();
        let bp = generic_basepoints(&d, &positive_point(), 1, 8).unwrap().remove(0);
        let alg = MirrorAlgebra::new(&d, bp, 4).unwrap();
        let t = alg.structure_constants(&[v(&[2, -1]), v(&[-3, 5])], 4).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(v(&[-1, 4]), 1)]));
        let g = alg.gram_matrix(&[v(&[1, 2]), v(&[-1, -2]), v(&[0, 0])], 4).unwrap();
        assert_eq!(g.0, vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        assert_eq!(g.1, 3);
    }

    #[test]
    fn unit_and_trace() {
        let d = complete::<i64>(&Seed::a2(), 4).unwrap();
        let bp = generic_basepoints(&d, &positive_point(), 1, 8).unwrap().remove(0);
        let alg = MirrorAlgebra::new(&d, bp, 4).unwrap();
        let t = alg.structure_constants(&[v(&[0, 0]), v(&[-1, 0])], 4).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(v(&[-1, 0]), 1)]));
        assert_eq!(trace(&ThetaExpansion::<i64>::basis(v(&[0, 0]), 3)), 1);
        assert_eq!(trace(&ThetaExpansion::<i64>::basis(v(&[1, 0]), 3)), 0);
        let mut e = ThetaExpansion::<i64>::zero(v(&[0, 0]), 3);
        e.add_term(v(&[0, 0]), 3);
        e.add_term(v(&[1, 0]), 5);
        assert_eq!(trace(&e), 3);
        let one = ThetaExpansion::basis(v(&[0, 0]), 4);
        assert_eq!(alg.pairing(&[one.clone(), one]).unwrap(), 1);
    }

    #[test]
    fn a2_exchange_relation() {
        // theta_{e1} theta_{-e1} = theta_0 + theta_{e2} in the A2 cluster algebra
        let d = complete::<i64>(&Seed::a2(), 4).unwrap();
        let bp = generic_basepoints(&d, &positive_point(), 1, 8).unwrap().remove(0);
        let alg = MirrorAlgebra::new(&d, bp, 4).unwrap();
        let t = alg.structure_constants(&[v(&[1, 0]), v(&[-1, 0])], 4).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(v(&[0, 0]), 1), (v(&[0, 1]), 1)]));
        let x = [ThetaExpansion::basis(v(&[1, 0]), 4), ThetaExpansion::basis(v(&[-1, 0]), 4)];
        assert_eq!(alg.pairing(&x).unwrap(), 1);
        assert_eq!(alg.pairing_direct(&x).unwrap(), 1);
    }
}
