//! Broken lines and local theta functions.
//!
//! A segment carrying `c z^e` moves with velocity `-e`: the unbounded first
//! segment comes in from infinity in direction `m`. When a line carrying `z^e`
//! crosses a wall with direction `n0` it may bend, replacing `z^e` by a single
//! term `c_j z^(e + j n0)` of `z^e f^(|pair(n0, e)|)`, which is the crossing
//! rule of the scattering module read on the departure side.
//!
//! Enumeration runs backwards from the endpoint: guess the final exponent's
//! predecessor at each wall met by the backward ray and stop when the exponent
//! returns to `m` and the line can escape without further bends.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{CertifiedPoint, LatticeVector, RationalPoint};
use crate::scalar::Coefficient;
use crate::scattering::{angle_cmp, Path, ScatteringDiagram, Wall};
use crate::series::{offset_degree, TruncatedSeries, WallFunction};

/// One straight piece of a broken line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment<C> {
    pub coefficient: C,
    pub exponent: LatticeVector,
    /// Bend point where this segment starts; `None` for the unbounded first segment.
    pub start: Option<RationalPoint>,
    /// Walls bent at when entering this segment (several only for overlapping parallel walls).
    pub walls: Vec<usize>,
}

impl<C> Segment<C> {
    /// Direction of motion, opposite to the carried exponent.
    pub fn velocity(&self) -> LatticeVector {
        -&self.exponent
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrokenLine<C> {
    pub m: LatticeVector,
    pub endpoint: RationalPoint,
    pub segments: Vec<Segment<C>>,
}

impl<C: Coefficient> BrokenLine<C> {
    pub fn final_monomial(&self) -> (&C, &LatticeVector) {
        let s = self.segments.last().expect("broken line has a segment");
        (&s.coefficient, &s.exponent)
    }

    pub fn bends(&self) -> usize {
        self.segments.len() - 1
    }
}

/// Local theta function `theta_{Q, m}` truncated at order `k`, stored with base `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaFunction<C> {
    pub m: LatticeVector,
    pub basepoint: RationalPoint,
    pub series: TruncatedSeries<C>,
}

struct Search<'a, C> {
    d: &'a ScatteringDiagram<C>,
    m: &'a LatticeVector,
    k: u32,
}

/// A backward bend: previous exponent, coefficient factor, bend point and walls.
type Step<C> = (LatticeVector, C, RationalPoint, Vec<usize>);

impl<C: Coefficient> Search<'_, C> {
    /// Wall hits of `{x + s e : s > 0}` in increasing `s`, with parallel walls at one point merged.
    fn hits(&self, x: &RationalPoint, e: &LatticeVector) -> Result<Vec<(BigRational, RationalPoint, Vec<usize>)>> {
        let mut raw: Vec<(BigRational, RationalPoint, usize)> = Vec::new();
        for (i, w) in self.d.walls().iter().enumerate() {
            let lx = w.normal().eval(x);
            let le = w.normal().dot(e);
            if lx.is_zero() || le == 0 {
                continue;
            }
            let s = -&lx / BigRational::from_integer(le.into());
            if !s.is_positive() {
                continue;
            }
            let p = x.offset(&s, e);
            if !w.support().contains_point(&p) {
                continue;
            }
            if !w.support().in_relative_interior(&p) {
                return Err(Error::NonGenericEndpoint(format!(
                    "ray from {x} in direction {e} meets the boundary of wall {i} at {p}"
                )));
            }
            raw.push((s, p, i));
        }
        raw.sort_by(|a, b| a.0.cmp(&b.0).then(a.2.cmp(&b.2)));
        let mut grouped: Vec<(BigRational, RationalPoint, Vec<usize>)> = Vec::new();
        for (s, p, i) in raw {
            match grouped.last_mut() {
                Some(g) if g.0 == s => {
                    let w0 = &self.d.walls()[g.2[0]];
                    if w0.direction() != self.d.walls()[i].direction() {
                        return Err(Error::NonGenericEndpoint(format!(
                            "ray from {x} in direction {e} meets walls {} and {i} at once",
                            g.2[0]
                        )));
                    }
                    g.2.push(i);
                }
                _ => grouped.push((s, p, vec![i])),
            }
        }
        Ok(grouped)
    }

    /// Combined function of parallel walls met at one point.
    fn combined(&self, walls: &[usize]) -> WallFunction<C> {
        let ws: Vec<&Wall<C>> = walls.iter().map(|&i| &self.d.walls()[i]).collect();
        let mut f = ws[0].function().clone();
        for w in &ws[1..] {
            f = f.multiply(w.function()).expect("parallel walls share direction and order");
        }
        f
    }

    /// Possible predecessors of a segment carrying `z^e` that starts at `x` (or ends at `x` for the final one).
    fn steps(&self, x: &RationalPoint, e: &LatticeVector) -> Result<Vec<Step<C>>> {
        let seed = self.d.seed();
        let mut out = Vec::new();
        let rest = e - self.m;
        let Some(budget) = seed.degree(&rest) else {
            return Ok(out);
        };
        if budget == 0 {
            return Ok(out);
        }
        for (_, p, walls) in self.hits(x, e)? {
            let f = self.combined(&walls);
            let n0 = f.direction();
            let dn = offset_degree(n0);
            let a = self.d.walls()[walls[0]].normal().dot(e).abs();
            let pw = f.power(a);
            for (j, c) in pw.iter().enumerate().skip(1) {
                if j as u32 * dn > budget {
                    break;
                }
                if c.is_zero() {
                    continue;
                }
                let prev = e - &n0.scale(j as i64);
                if !seed.in_monoid(&(&prev - self.m)) {
                    continue;
                }
                out.push((prev, c.clone(), p.clone(), walls.clone()));
            }
        }
        Ok(out)
    }

    /// Completes a backward partial line (segments listed last to first).
    fn extend(
        &self,
        x: &RationalPoint,
        e: &LatticeVector,
        tail: &mut Vec<Segment<C>>,
        found: &mut Vec<Vec<Segment<C>>>,
    ) -> Result<()> {
        if e == self.m {
            let mut segs = tail.clone();
            segs.reverse();
            // the first segment starts at infinity; the bends stored so far belong to later segments
            found.push(segs);
        }
        for (prev, _, p, walls) in self.steps(x, e)? {
            let last = tail.last_mut().expect("tail holds the current segment");
            last.start = Some(p.clone());
            last.walls = walls;
            tail.push(Segment { coefficient: C::zero(), exponent: prev.clone(), start: None, walls: vec![] });
            self.extend(&p, &prev, tail, found)?;
            tail.pop();
            let last = tail.last_mut().expect("tail holds the current segment");
            last.start = None;
            last.walls = vec![];
        }
        Ok(())
    }
}

/// Rewrites segment coefficients as the running products along the line.
fn assign_coefficients<C: Coefficient>(d: &ScatteringDiagram<C>, segs: &mut [Segment<C>]) {
    let mut c = C::one();
    segs[0].coefficient = c.clone();
    for i in 1..segs.len() {
        let (prev, cur) = (&segs[i - 1].exponent, &segs[i].exponent);
        let walls = &segs[i].walls;
        let mut f = d.walls()[walls[0]].function().clone();
        for &w in &walls[1..] {
            f = f.multiply(d.walls()[w].function()).expect("parallel walls");
        }
        let diff = cur - prev;
        let (_, j) = diff.primitive_part().expect("bend changes the exponent");
        let a = d.walls()[walls[0]].normal().dot(prev).abs();
        c = c * f.power(a)[j as usize].clone();
        segs[i].coefficient = c.clone();
    }
}

fn check_endpoint<C: Coefficient>(d: &ScatteringDiagram<C>, q: &RationalPoint) -> Result<()> {
    if q.len() != d.seed().rank() {
        return Err(Error::DimensionMismatch { expected: d.seed().rank(), found: q.len() });
    }
    if let Some(i) = d.walls().iter().position(|w| w.support().contains_point(q)) {
        return Err(Error::NonGenericEndpoint(format!("endpoint {q} lies on wall {i}")));
    }
    Ok(())
}

/// All broken lines for `m` ending at `q` whose final exponent is within degree `k` of `m`.
///
/// Lines are sorted by final exponent, then by their bend sequences.
pub fn enumerate_broken_lines<C: Coefficient>(
    d: &ScatteringDiagram<C>,
    m: &LatticeVector,
    q: &RationalPoint,
    k: u32,
) -> Result<Vec<BrokenLine<C>>> {
    check_endpoint(d, q)?;
    if m.len() != d.seed().rank() {
        return Err(Error::DimensionMismatch { expected: d.seed().rank(), found: m.len() });
    }
    if k > d.order() {
        return Err(Error::OrderMismatch(k, d.order()));
    }
    let search = Search { d, m, k };
    let mut found = Vec::new();
    for p in d.seed().monoid_elements(search.k) {
        let e = m + &p;
        let mut tail = vec![Segment { coefficient: C::zero(), exponent: e.clone(), start: None, walls: vec![] }];
        search.extend(q, &e, &mut tail, &mut found)?;
    }
    let mut lines: Vec<BrokenLine<C>> = found
        .into_iter()
        .map(|mut segs| {
            assign_coefficients(d, &mut segs);
            BrokenLine { m: m.clone(), endpoint: q.clone(), segments: segs }
        })
        .collect();
    lines.sort_by(|a, b| {
        let key = |l: &BrokenLine<C>| {
            (
                l.final_monomial().1.clone(),
                l.segments.iter().map(|s| (s.exponent.clone(), s.start.as_ref().map(|p| p.to_string()))).collect::<Vec<_>>(),
            )
        };
        key(a).cmp(&key(b))
    });
    for l in &lines {
        validate_broken_line(d, l, k)?;
    }
    Ok(lines)
}

/// Independent forward check of the bend rule, positions and degree bound.
pub fn validate_broken_line<C: Coefficient>(d: &ScatteringDiagram<C>, line: &BrokenLine<C>, k: u32) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidArgument(format!("invalid broken line: {msg}")));
    let seed = d.seed();
    let segs = &line.segments;
    let first = &segs[0];
    if first.exponent != line.m || !first.coefficient.is_one() || first.start.is_some() {
        return bad("first segment must carry z^m with coefficient 1".into());
    }
    let Some(total) = seed.degree(&(line.final_monomial().1 - &line.m)) else {
        return bad("final exponent is not in m + P".into());
    };
    if total > k {
        return bad(format!("total degree {total} exceeds {k}"));
    }
    let mut c = C::one();
    for i in 1..segs.len() {
        let (prev, cur) = (&segs[i - 1], &segs[i]);
        let Some(x) = &cur.start else {
            return bad(format!("segment {i} has no bend point"));
        };
        if cur.walls.is_empty() {
            return bad(format!("segment {i} has no bend wall"));
        }
        // a point on the previous segment, strictly before the bend
        let before = match &prev.start {
            Some(p) => p.clone(),
            None => x.offset(&BigRational::one(), &prev.exponent),
        };
        let between = x.sub(&before);
        let forward_ok = match prev.start {
            Some(_) => parallel_positive(&between, &prev.velocity()),
            None => true,
        };
        if !forward_ok {
            return bad(format!("segment {} does not move along its velocity", i - 1));
        }
        let mut f: Option<WallFunction<C>> = None;
        let mut normal = None;
        for &wi in &cur.walls {
            let w = &d.walls()[wi];
            if !w.support().in_relative_interior(x) {
                return bad(format!("bend {i} is not in the relative interior of wall {wi}"));
            }
            let n = if w.normal().eval(&before).is_positive() { w.normal().clone() } else { -w.normal() };
            if !n.eval(&before).is_positive() {
                return bad(format!("segment {} does not cross wall {wi} transversally", i - 1));
            }
            normal = Some(n);
            f = Some(match f {
                None => w.function().clone(),
                Some(g) => g.multiply(w.function()).map_err(|_| Error::InvalidArgument("non-parallel bend walls".into()))?,
            });
        }
        let (f, n) = (f.expect("bend wall"), normal.expect("bend wall"));
        let inc = &cur.exponent - &prev.exponent;
        let Some((dir, j)) = inc.primitive_part() else {
            return bad(format!("bend {i} does not change the exponent"));
        };
        if &dir != f.direction() || !seed.in_monoid(&inc) {
            return bad(format!("bend {i} increment {inc} is not a positive multiple of the wall direction"));
        }
        let a = n.dot(&prev.exponent);
        if a <= 0 {
            return bad(format!("bend {i} uses a nonpositive exponent"));
        }
        c = c * f.power(a).get(j as usize).cloned().unwrap_or_else(C::zero);
        if c != cur.coefficient {
            return bad(format!("bend {i} coefficient mismatch"));
        }
    }
    let last = segs.last().expect("segment");
    if let Some(x) = &last.start {
        if !parallel_positive(&line.endpoint.sub(x), &last.velocity()) {
            return bad("final segment does not reach the endpoint".into());
        }
    }
    Ok(())
}

/// `u = t v` for some `t > 0`.
fn parallel_positive(u: &RationalPoint, v: &LatticeVector) -> bool {
    let idx = v.coords().iter().position(|&x| x != 0).expect("nonzero velocity");
    let t = &u.coords()[idx] / BigRational::from_integer(v[idx].into());
    t.is_positive() && *u == RationalPoint::zero(v.len()).offset(&t, v)
}

/// `theta_{Q, m}` modulo `J^(k+1)`.
pub fn theta<C: Coefficient>(
    d: &ScatteringDiagram<C>,
    m: &LatticeVector,
    q: &RationalPoint,
    k: u32,
) -> Result<ThetaFunction<C>> {
    let lines = enumerate_broken_lines(d, m, q, k)?;
    let mut series = TruncatedSeries::zero(m.clone(), k);
    for l in &lines {
        let (c, e) = l.final_monomial();
        series.add_exponent(e, c.clone());
    }
    Ok(ThetaFunction { m: m.clone(), basepoint: q.clone(), series })
}

/// Sign of every wall hyperplane at `x`; equal vectors lie in a common chamber in rank 2.
pub fn chamber_signature<C: Coefficient>(d: &ScatteringDiagram<C>, x: &RationalPoint) -> Vec<i8> {
    d.wall_hyperplanes()
        .iter()
        .map(|h| {
            let v = h.eval(x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Functionals whose zero sets a basepoint must avoid so that backward rays with
/// exponents in `ms + P_{<=k}` miss the origin (rank 2) and the wall hyperplanes.
pub fn basepoint_hazards<C: Coefficient>(d: &ScatteringDiagram<C>, ms: &[LatticeVector], k: u32) -> Vec<LatticeVector> {
    let mut hs = d.wall_hyperplanes();
    if d.seed().rank() == 2 {
        for m in ms {
            for p in d.seed().monoid_elements(k) {
                let e = m + &p;
                if let Some((e, _)) = e.primitive_part() {
                    let h = LatticeVector::new(vec![-e[1], e[0]]);
                    if !hs.contains(&h) && !hs.contains(&-&h) {
                        hs.push(h);
                    }
                }
            }
        }
    }
    hs
}

/// Up to `count` distinct certified basepoints in the chamber of `near`.
pub fn chamber_basepoints<C: Coefficient>(
    d: &ScatteringDiagram<C>,
    near: &RationalPoint,
    count: usize,
    ms: &[LatticeVector],
    k: u32,
) -> Result<Vec<CertifiedPoint>> {
    check_endpoint(d, near)?;
    let sig = chamber_signature(d, near);
    let hazards = basepoint_hazards(d, ms, k);
    let r = near.len();
    let mut out: Vec<CertifiedPoint> = Vec::new();
    let mut j: i64 = 0;
    let mut scale = BigRational::new(1.into(), 7.into());
    while out.len() < count {
        if j > 64 * (count as i64 + hazards.len() as i64 + 4) {
            return Err(Error::NonGenericEndpoint(format!("could not find generic basepoints near {near}")));
        }
        // moment-curve perturbation t, t^2, ... with t = (2j+3)/(j+2)
        let t = BigRational::new((2 * j + 3).into(), (j + 2).into());
        let mut tp = BigRational::one();
        let mut delta = Vec::with_capacity(r);
        for _ in 0..r {
            tp *= &t;
            delta.push(&tp * &scale);
        }
        let cand = near.add(&RationalPoint::new(delta));
        j += 1;
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

/// A certified basepoint in the chamber where every unfrozen coordinate is positive.
pub fn positive_chamber_basepoint<C: Coefficient>(
    d: &ScatteringDiagram<C>,
    ms: &[LatticeVector],
    k: u32,
) -> Result<CertifiedPoint> {
    let r = d.seed().rank();
    let near = RationalPoint::new(
        (0..r)
            .map(|i| {
                let v = if d.seed().is_unfrozen(i) { 11 + 2 * i as i64 } else { 0 };
                BigRational::from_integer(v.into()) / BigRational::from_integer(13.into())
            })
            .collect(),
    );
    let near = if d.walls().iter().any(|w| w.support().contains_point(&near)) {
        near.add(&RationalPoint::new((0..r).map(|i| BigRational::new(1.into(), (i as i64 + 17).into())).collect()))
    } else {
        near
    };
    Ok(chamber_basepoints(d, &near, 1, ms, k)?.remove(0))
}

/// Point-indexed theta at a chamber representative: the chamber of `near`, first certified basepoint.
pub fn theta_in_chamber<C: Coefficient>(
    d: &ScatteringDiagram<C>,
    m: &LatticeVector,
    near: &RationalPoint,
    k: u32,
) -> Result<ThetaFunction<C>> {
    let q = chamber_basepoints(d, near, 1, std::slice::from_ref(m), k)?.remove(0);
    theta(d, m, &q.point, k)
}

/// Checks that crossing the wall `wall` transports `theta_{a, m}` to `theta_{b, m}`.
///
/// The short crossing between nearby points holds for any wall function, so in
/// rank 2 the transport is also checked along the complementary route around
/// the origin, which is where an inconsistent diagram shows up.
pub fn theta_consistency_check<C: Coefficient>(
    d: &ScatteringDiagram<C>,
    m: &LatticeVector,
    wall: usize,
    k: u32,
) -> Result<bool> {
    let w = d
        .walls()
        .get(wall)
        .ok_or_else(|| Error::InvalidArgument(format!("no wall with index {wall}")))?;
    let hazards = basepoint_hazards(d, std::slice::from_ref(m), k);
    let own = w.normal().primitive_part().expect("nonzero normal").0;
    let others: Vec<LatticeVector> = hazards.iter().filter(|h| **h != own && **h != -&own).cloned().collect();
    let inner = w.support().interior_vector().to_point();
    let g = crate::lattice::generic_point(d.seed().rank(), Some(w.normal()), &[])?.point;
    let mut big = BigRational::one();
    let y = loop {
        let cand = inner.scale(&big).add(&g);
        if w.support().in_relative_interior(&cand) && others.iter().all(|h| !h.eval(&cand).is_zero()) {
            break cand;
        }
        big *= BigRational::from_integer(2.into());
    };
    let t = w.normal().to_point();
    let mut delta = others
        .iter()
        .filter_map(|h| {
            let ht = h.eval(&t);
            (!ht.is_zero()).then(|| (h.eval(&y) / ht).abs())
        })
        .min()
        .unwrap_or_else(BigRational::one)
        .min(BigRational::one())
        / BigRational::from_integer(2.into());
    for attempt in 0..8 {
        let a = y.add(&t.scale(&delta));
        let b = y.sub(&t.scale(&delta));
        let res = (|| -> Result<bool> {
            let ta = theta(d, m, &a, k)?;
            let tb = theta(d, m, &b, k)?;
            let moved = d.path_ordered_product(&Path::segment(a.clone(), b.clone()), &ta.series)?;
            if moved != tb.series {
                return Ok(false);
            }
            match long_way(&a, &b) {
                Some(path) => Ok(d.path_ordered_product(&path, &ta.series)? == tb.series),
                None => Ok(true),
            }
        })();
        match res {
            Err(Error::NonGenericEndpoint(_)) if attempt < 7 => {
                delta /= BigRational::from_integer(3.into());
            }
            other => return other,
        }
    }
    unreachable!("retry loop returns")
}

/// Rank-2 path from `a` to `b` that goes around the origin the other way.
fn long_way(a: &RationalPoint, b: &RationalPoint) -> Option<Path> {
    if a.len() != 2 {
        return None;
    }
    let rot = |p: &RationalPoint, sign: i64| {
        let s = BigRational::from_integer(sign.into());
        RationalPoint::new(vec![-&p.coords()[1] * &s, &p.coords()[0] * &s])
    };
    let det = &a.coords()[0] * &b.coords()[1] - &a.coords()[1] * &b.coords()[0];
    // travel away from b: clockwise when b is counterclockwise of a
    let sign = if det.is_positive() { -1 } else { 1 };
    let frac = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let ja = rot(a, sign);
    let v1 = ja.add(&a.scale(&frac(1, 5)));
    let v2 = a.scale(&frac(-1, 1)).add(&ja.scale(&frac(1, 7)));
    let v3 = ja.scale(&frac(-1, 1)).add(&a.scale(&frac(-1, 11)));
    Path::polyline(vec![a.clone(), v1, v2, v3, b.clone()]).ok()
}

/// One interior point per chamber cut out by the wall hyperplanes (rank 2).
pub fn chamber_representatives<C: Coefficient>(d: &ScatteringDiagram<C>) -> Result<Vec<RationalPoint>> {
    if d.seed().rank() != 2 {
        return Err(Error::UnsupportedRank(d.seed().rank()));
    }
    let mut dirs: Vec<LatticeVector> = Vec::new();
    for h in d.wall_hyperplanes() {
        let u = LatticeVector::new(vec![-h[1], h[0]]);
        dirs.push(-&u);
        dirs.push(u);
    }
    dirs.sort_by(angle_cmp);
    dirs.dedup();
    if dirs.is_empty() {
        return Ok(vec![RationalPoint::from_fractions(&[(5, 7), (3, 11)])]);
    }
    let n = dirs.len();
    let mut out: Vec<RationalPoint> = (0..n)
        .map(|i| {
            let (u, v) = (&dirs[i], &dirs[(i + 1) % n]);
            let mid = if u[0] * v[1] - u[1] * v[0] > 0 { u + v } else { LatticeVector::new(vec![-u[1], u[0]]) };
            mid.to_point()
        })
        .collect();
    out.sort_by_key(|p| chamber_signature(d, p));
    out.dedup_by_key(|p| chamber_signature(d, p));
    Ok(out)
}

/// Theta tables for several exponents at one basepoint.
pub fn theta_table<C: Coefficient>(
    d: &ScatteringDiagram<C>,
    ms: &[LatticeVector],
    q: &RationalPoint,
    k: u32,
) -> Result<BTreeMap<LatticeVector, ThetaFunction<C>>> {
    ms.iter().map(|m| Ok((m.clone(), theta(d, m, q, k)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Seed, SkewForm};
    use crate::scattering::complete;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    fn pt(c: &[(i64, i64)]) -> RationalPoint {
        RationalPoint::from_fractions(c)
    }

    fn terms(t: &ThetaFunction<i64>) -> Vec<(LatticeVector, i64)> {
        t.series.exponents().map(|(e, c)| (e, *c)).collect()
    }

    #[test]
    fn empty_diagram_is_monomial() {
        let seed = Seed::new(SkewForm::rank2(1), vec![]).unwrap();
        let d = ScatteringDiagram::<i64>::initial(&seed, 3);
        let lines = enumerate_broken_lines(&d, &v(&[2, -1]), &pt(&[(1, 3), (2, 5)]), 3).unwrap();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].bends(), 0);
        let t = theta(&d, &v(&[2, -1]), &pt(&[(1, 3), (2, 5)]), 3).unwrap();
        assert_eq!(terms(&t), vec![(v(&[2, -1]), 1)]);
    }

    #[test]
    fn zero_exponent_is_unit() {
        let d = complete::<i64>(&Seed::a2(), 4).unwrap();
        let t = theta(&d, &v(&[0, 0]), &pt(&[(-3, 7), (-5, 11)]), 4).unwrap();
        assert_eq!(terms(&t), vec![(v(&[0, 0]), 1)]);
    }

    #[test]
    fn a2_positive_chamber_thetas() {
        let d = complete::<i64>(&Seed::a2(), 4).unwrap();
        let q = pt(&[(5, 7), (3, 11)]);
        let th = |m: &[i64]| terms(&theta(&d, &v(m), &q, 4).unwrap());
        assert_eq!(th(&[1, 0]), vec![(v(&[1, 0]), 1)]);
        assert_eq!(th(&[-1, 0]), vec![(v(&[-1, 0]), 1), (v(&[-1, 1]), 1)]);
        assert_eq!(th(&[0, -1]), vec![(v(&[0, -1]), 1), (v(&[1, -1]), 1)]);
        assert_eq!(th(&[-1, -1]), vec![(v(&[-1, -1]), 1), (v(&[-1, 0]), 1), (v(&[0, -1]), 1)]);
    }

    #[test]
    fn endpoint_on_wall_rejected() {
        let d = complete::<i64>(&Seed::a2(), 3).unwrap();
        let r = theta(&d, &v(&[1, 0]), &pt(&[(0, 1), (1, 1)]), 3);
        assert!(matches!(r, Err(Error::NonGenericEndpoint(_))));
    }

    #[test]
    fn consistency_and_corruption() {
        let seed = Seed::a2();
        let d = complete::<i64>(&seed, 5).unwrap();
        for i in 0..d.walls().len() {
            assert!(theta_consistency_check(&d, &v(&[-1, 0]), i, 5).unwrap());
        }
        let mut walls = d.walls().to_vec();
        let g = walls.iter().position(|w| !w.is_initial()).unwrap();
        let f = WallFunction::new(&seed, walls[g].direction().clone(), vec![2], 5).unwrap();
        walls[g] = Wall::new(&seed, walls[g].support().clone(), f, walls[g].provenance()).unwrap();
        let bad = ScatteringDiagram::new(seed, 5, walls).unwrap();
        let g = bad.walls().iter().position(|w| !w.is_initial()).unwrap();
        let ms = [v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1]), v(&[1, 1])];
        assert!(ms.iter().any(|m| !theta_consistency_check(&bad, m, g, 5).unwrap()));
    }

    #[test]
    fn chamber_points_share_theta() {
        let d = complete::<i64>(&Seed::kronecker(2), 4).unwrap();
        let m = v(&[-1, 0]);
        let pts = chamber_basepoints(&d, &pt(&[(-3, 1), (-1, 1)]), 3, std::slice::from_ref(&m), 4).unwrap();
        let t0 = theta(&d, &m, &pts[0].point, 4).unwrap().series;
        for p in &pts[1..] {
            assert_eq!(theta(&d, &m, &p.point, 4).unwrap().series, t0);
        }
    }
}
