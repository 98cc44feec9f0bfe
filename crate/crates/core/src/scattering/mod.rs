//! Walls, wall-crossing automorphisms, path-ordered products and finite-order
//! scattering diagrams.
//!
//! A path crossing a wall with direction `n0` uses the signed functional
//! `n = eps * pair(n0, .)`, where `eps` makes `n` positive just before the
//! crossing; the crossing sends `z^v` to `z^v f^(n(v))`. A path product applies
//! the first crossing first.

mod complete;
mod cwall;
mod wall;

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, RationalPoint, Seed};
use crate::scalar::Coefficient;
use crate::series::{offset_degree, TruncatedSeries, WallFunction};

pub use complete::complete;
pub use cwall::{cwall_supports, CWall};
pub use wall::{angle_cmp, is_incoming, Provenance, Wall};

/// One transversal crossing of a wall by a path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingEvent {
    /// Index into the diagram's wall list.
    pub wall: usize,
    pub segment: usize,
    /// Position along the segment, in `(0, 1)`.
    pub parameter: BigRational,
    pub point: RationalPoint,
    /// Signed functional, positive on the side the path departs from.
    pub normal: LatticeVector,
}

/// Piecewise-straight path through exact rational points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    points: Vec<RationalPoint>,
}

impl Path {
    pub fn segment(start: RationalPoint, end: RationalPoint) -> Self {
        Path { points: vec![start, end] }
    }

    pub fn polyline(points: Vec<RationalPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument("a path needs at least two points".into()));
        }
        let r = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != r) {
            return Err(Error::DimensionMismatch { expected: r, found: p.len() });
        }
        Ok(Path { points })
    }

    /// Closed polygon through `vertices`, returning to the first one.
    pub fn closed(vertices: Vec<RationalPoint>) -> Result<Self> {
        let mut pts = vertices;
        if let Some(first) = pts.first().cloned() {
            pts.push(first);
        }
        Self::polyline(pts)
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn reversed(&self) -> Self {
        let mut pts = self.points.clone();
        pts.reverse();
        Path { points: pts }
    }
}

/// Applies the wall-crossing `z^v -> z^v f^(normal . v)` to every term of `s`.
pub fn cross<C: Coefficient>(
    function: &WallFunction<C>,
    normal: &LatticeVector,
    s: &TruncatedSeries<C>,
) -> TruncatedSeries<C> {
    let k = s.order();
    let n0 = function.direction();
    let dn = offset_degree(n0);
    let mut out = TruncatedSeries::zero(s.base().clone(), k);
    let mut powers: HashMap<i64, Vec<C>> = HashMap::new();
    for (p, c) in s.terms() {
        let a = normal.dot(&(s.base() + p));
        if a == 0 {
            out.add_term(p.clone(), c.clone());
            continue;
        }
        let pw = powers.entry(a).or_insert_with(|| function.power(a));
        let dp = offset_degree(p);
        for (j, cj) in pw.iter().enumerate() {
            if dp + j as u32 * dn > k {
                break;
            }
            if cj.is_zero() {
                continue;
            }
            out.add_term(p + &n0.scale(j as i64), c.clone() * cj.clone());
        }
    }
    out
}

/// Finite-order scattering diagram in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScatteringDiagram<C> {
    seed: Seed,
    order: u32,
    walls: Vec<Wall<C>>,
}

impl<C: Coefficient> ScatteringDiagram<C> {
    /// Builds a diagram, truncating every wall to `order` and normalizing.
    pub fn new(seed: Seed, order: u32, walls: Vec<Wall<C>>) -> Result<Self> {
        for w in &walls {
            if w.function().order() < order {
                return Err(Error::OrderMismatch(w.function().order(), order));
            }
            if w.support().rank() != seed.rank() {
                return Err(Error::DimensionMismatch { expected: seed.rank(), found: w.support().rank() });
            }
        }
        let walls = walls.iter().map(|w| w.truncate(order)).collect();
        let mut d = ScatteringDiagram { seed, order, walls };
        d.normalize();
        Ok(d)
    }

    /// One incoming wall `(e^perp, 1 + z^e)` per unfrozen `e`.
    pub fn initial(seed: &Seed, k: u32) -> Self {
        let r = seed.rank();
        let walls = seed
            .unfrozen()
            .iter()
            .map(|&i| {
                let e = seed.generator(i);
                let normal = seed.form().functional(&e);
                let f = WallFunction::binomial(seed, e, k).expect("unfrozen generator is a valid direction");
                Wall::new(seed, Cone::hyperplane(&normal), f, Provenance::Initial).expect("initial wall")
            })
            .collect();
        let mut d = ScatteringDiagram { seed: seed.clone(), order: k, walls };
        debug_assert!(d.walls.iter().all(|w| w.support().rank() == r));
        d.normalize();
        d
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn walls(&self) -> &[Wall<C>] {
        &self.walls
    }

    pub fn generated_walls(&self) -> impl Iterator<Item = &Wall<C>> {
        self.walls.iter().filter(|w| !w.is_initial())
    }

    /// Merges walls with equal support and direction, drops trivial generated walls, sorts.
    fn normalize(&mut self) {
        let mut merged: Vec<Wall<C>> = Vec::new();
        let mut index: HashMap<(Cone, LatticeVector), usize> = HashMap::new();
        for w in self.walls.drain(..) {
            let key = (w.support().clone(), w.direction().clone());
            match index.get(&key) {
                Some(&i) => {
                    let prod = merged[i].function().multiply(w.function()).expect("parallel wall functions");
                    let prov = merged[i].provenance().min(w.provenance());
                    merged[i] = Wall::new(&self.seed, key.0, prod, prov).expect("merged wall");
                }
                None => {
                    index.insert(key, merged.len());
                    merged.push(w);
                }
            }
        }
        merged.retain(|w| w.is_initial() || !w.function().is_trivial());
        merged.sort_by(wall::wall_cmp);
        self.walls = merged;
    }

    /// Same diagram at a lower order.
    pub fn truncate(&self, k: u32) -> Self {
        let k = k.min(self.order);
        let walls = self.walls.iter().map(|w| w.truncate(k)).collect();
        let mut d = ScatteringDiagram { seed: self.seed.clone(), order: k, walls };
        d.normalize();
        d
    }

    /// Copy with one wall removed (for negative controls).
    pub fn without_wall(&self, index: usize) -> Self {
        let mut d = self.clone();
        d.walls.remove(index);
        d
    }

    /// All transversal crossings of `path`, in traversal order.
    pub fn crossings(&self, path: &Path) -> Result<Vec<CrossingEvent>> {
        let r = self.seed.rank();
        if let Some(p) = path.points().iter().find(|p| p.len() != r) {
            return Err(Error::DimensionMismatch { expected: r, found: p.len() });
        }
        for p in path.points() {
            if let Some(i) = self.walls.iter().position(|w| w.support().contains_point(p)) {
                return Err(Error::NonTransversalPath(format!("path vertex {p} lies on wall {i}")));
            }
        }
        let mut events = Vec::new();
        for (s, pair) in path.points().windows(2).enumerate() {
            let (p, q) = (&pair[0], &pair[1]);
            for (wi, w) in self.walls.iter().enumerate() {
                let lp = w.normal().eval(p);
                let lq = w.normal().eval(q);
                if lp.is_zero() || lq.is_zero() || lp.is_positive() == lq.is_positive() {
                    continue;
                }
                let t = &lp / (&lp - &lq);
                let x = p.lerp(q, &t);
                if !w.support().contains_point(&x) {
                    continue;
                }
                if !w.support().in_relative_interior(&x) {
                    return Err(Error::NonTransversalPath(format!(
                        "segment {s} meets the boundary of wall {wi} at {x}"
                    )));
                }
                let normal = if lp.is_positive() { w.normal().clone() } else { -w.normal() };
                events.push(CrossingEvent { wall: wi, segment: s, parameter: t, point: x, normal });
            }
        }
        events.sort_by(|a, b| (a.segment, &a.parameter).cmp(&(b.segment, &b.parameter)));
        for pair in events.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a.segment == b.segment && a.parameter == b.parameter {
                let (na, nb) = (self.walls[a.wall].direction(), self.walls[b.wall].direction());
                if self.seed.pair(na, nb) != 0 {
                    return Err(Error::NonTransversalPath(format!(
                        "walls {} and {} are crossed simultaneously at {}",
                        a.wall, b.wall, a.point
                    )));
                }
            }
        }
        Ok(events)
    }

    pub fn cross(&self, event: &CrossingEvent, s: &TruncatedSeries<C>) -> TruncatedSeries<C> {
        cross(self.walls[event.wall].function(), &event.normal, s)
    }

    fn check_series(&self, s: &TruncatedSeries<C>) -> Result<()> {
        if s.rank() != self.seed.rank() {
            return Err(Error::DimensionMismatch { expected: self.seed.rank(), found: s.rank() });
        }
        if s.order() > self.order {
            return Err(Error::OrderMismatch(s.order(), self.order));
        }
        Ok(())
    }

    /// Composite of all crossings along `path`, first crossing applied first.
    pub fn path_ordered_product(&self, path: &Path, s: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>> {
        self.check_series(s)?;
        let events = self.crossings(path)?;
        Ok(events.iter().fold(s.clone(), |acc, ev| self.cross(ev, &acc)))
    }

    /// Rank-2 counterclockwise loop product computed from ray angles, starting just
    /// before the first ray in angular order.
    pub(crate) fn angular_loop_product(&self, s: &TruncatedSeries<C>) -> TruncatedSeries<C> {
        let mut rays: Vec<(LatticeVector, usize)> = Vec::new();
        for (i, w) in self.walls.iter().enumerate() {
            for l in w.support().lineality() {
                rays.push((l.clone(), i));
                rays.push((-l, i));
            }
            for g in w.support().rays() {
                rays.push((g.clone(), i));
            }
        }
        rays.sort_by(|a, b| angle_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
        let mut acc = s.clone();
        for (g, i) in &rays {
            let w = &self.walls[*i];
            let jg = LatticeVector::new(vec![-g[1], g[0]]);
            let normal = if w.normal().dot(&jg) > 0 { -w.normal() } else { w.normal().clone() };
            acc = cross(w.function(), &normal, &acc);
        }
        acc
    }

    /// True when the loop product fixes every `z^(e_i)` modulo `J^(order+1)`.
    pub fn loop_is_identity(&self, path: &Path) -> Result<bool> {
        let r = self.seed.rank();
        for i in 0..r {
            let s = TruncatedSeries::monomial(LatticeVector::basis(r, i), self.order);
            if self.path_ordered_product(path, &s)? != s {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Deterministic pseudo-random generic loops around the origin (rank 2 only).
    pub fn random_loops(&self, count: usize, rng_seed: u64) -> Result<Vec<Path>> {
        if self.seed.rank() != 2 {
            return Err(Error::UnsupportedRank(self.seed.rank()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut loops = Vec::with_capacity(count);
        while loops.len() < count {
            if let Some(p) = self.try_random_loop(&mut rng) {
                loops.push(p);
            }
        }
        Ok(loops)
    }

    fn try_random_loop(&self, rng: &mut ChaCha8Rng) -> Option<Path> {
        let n = rng.gen_range(3..=8);
        let mut dirs: Vec<LatticeVector> = (0..n)
            .map(|_| LatticeVector::new(vec![rng.gen_range(-20..=20), rng.gen_range(-20..=20)]))
            .filter(|d| !d.is_zero())
            .collect();
        dirs.sort_by(angle_cmp);
        dirs.dedup_by(|a, b| angle_cmp(a, b).is_eq());
        if dirs.len() < 3 {
            return None;
        }
        for i in 0..dirs.len() {
            let (a, b) = (&dirs[i], &dirs[(i + 1) % dirs.len()]);
            if a[0] * b[1] - a[1] * b[0] <= 0 {
                return None;
            }
        }
        let mut verts: Vec<RationalPoint> = dirs
            .iter()
            .map(|d| {
                let r = BigRational::new(rng.gen_range(7..=40).into(), rng.gen_range(3..=9).into());
                d.to_point().scale(&r)
            })
            .collect();
        if verts.iter().any(|v| self.walls.iter().any(|w| w.normal().eval(v).is_zero())) {
            return None;
        }
        if rng.gen_bool(0.5) {
            verts.reverse();
        }
        Path::closed(verts).ok()
    }

    /// Counts the loops among `loops` whose product is not the identity.
    pub fn loop_failures(&self, loops: &[Path]) -> Result<usize> {
        let results: Vec<Result<bool>> = loops.par_iter().map(|l| self.loop_is_identity(l)).collect();
        let mut bad = 0;
        for r in results {
            if !r? {
                bad += 1;
            }
        }
        Ok(bad)
    }

    /// Every hyperplane spanned by a wall support; generic points avoid these.
    pub fn wall_hyperplanes(&self) -> Vec<LatticeVector> {
        let mut hs: Vec<LatticeVector> = Vec::new();
        for w in &self.walls {
            let (p, _) = w.normal().primitive_part().expect("nonzero normal");
            let p = if p.coords().iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) { -p } else { p };
            if !hs.contains(&p) {
                hs.push(p);
            }
        }
        hs.sort();
        hs
    }

    /// Wall functions by support and direction, for order-independent comparisons.
    pub fn wall_map(&self) -> BTreeMap<(Vec<LatticeVector>, LatticeVector), Vec<C>> {
        self.walls
            .iter()
            .map(|w| ((w.support().generators(), w.direction().clone()), w.function().coeffs().to_vec()))
            .collect()
    }
}
