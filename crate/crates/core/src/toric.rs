//! Toric mode for complete smooth fans in the plane.
//!
//! Curve classes are stored as intersection vectors `(gamma . D_i)_i`, which lie in
//! the kernel of `Z^rays -> M`. The piecewise-linear function `phi` takes values in
//! that kernel and bends across ray `u_i` by `kappa_i = e_(i-1) + e_(i+1) - a_i e_i`,
//! where `u_(i-1) + u_(i+1) = a_i u_i`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{generic_point, CertifiedPoint, LatticeVector, RationalPoint};
use crate::linalg::{self, q};
use crate::scattering::angle_cmp;

fn det(a: &LatticeVector, b: &LatticeVector) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn det_point(a: &LatticeVector, x: &RationalPoint) -> BigRational {
    q(a[0]) * &x.coords()[1] - q(a[1]) * &x.coords()[0]
}

/// Complete smooth fan in `R^2`; rays are kept in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    rays: Vec<LatticeVector>,
}

impl Fan {
    /// Validates a fan given by rays and maximal cones (pairs of ray indices).
    ///
    /// Rays are reordered counterclockwise starting from the first listed ray.
    pub fn new(rays: Vec<LatticeVector>, cones: &[Vec<usize>]) -> Result<Fan> {
        if let Some(r) = rays.iter().find(|r| r.len() != 2) {
            return Err(Error::InvalidFan(format!("only rank-2 fans are supported, got ray {r}")));
        }
        if rays.len() < 3 {
            return Err(Error::InvalidFan("a complete fan in the plane needs at least three rays".into()));
        }
        if let Some(r) = rays.iter().find(|r| r.content() != 1) {
            return Err(Error::InvalidFan(format!("ray {r} is not primitive")));
        }
        let n = rays.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| angle_cmp(&rays[i], &rays[j]));
        if order.windows(2).any(|w| angle_cmp(&rays[w[0]], &rays[w[1]]).is_eq()) {
            return Err(Error::InvalidFan("repeated ray".into()));
        }
        let start = order.iter().position(|&i| i == 0).expect("ray 0 present");
        order.rotate_left(start);
        let sorted: Vec<LatticeVector> = order.iter().map(|&i| rays[i].clone()).collect();
        for i in 0..n {
            let d = det(&sorted[i], &sorted[(i + 1) % n]);
            if d <= 0 {
                return Err(Error::InvalidFan(format!(
                    "rays {} and {} span an angle of at least pi; fan is not complete",
                    sorted[i],
                    sorted[(i + 1) % n]
                )));
            }
            if d != 1 {
                return Err(Error::InvalidFan(format!("cone ({}, {}) is not smooth", sorted[i], sorted[(i + 1) % n])));
            }
        }
        let mut expected: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                let mut c = vec![order[i], order[(i + 1) % n]];
                c.sort_unstable();
                c
            })
            .collect();
        expected.sort();
        let mut given: Vec<Vec<usize>> = cones
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        given.sort();
        if given != expected {
            return Err(Error::InvalidFan("maximal cones must be exactly the adjacent ray pairs".into()));
        }
        Ok(Fan { rays: sorted })
    }

    /// Fan from counterclockwise rays, using adjacent pairs as maximal cones.
    pub fn from_rays(rays: Vec<LatticeVector>) -> Result<Fan> {
        let n = rays.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| angle_cmp(&rays[i], &rays[j]));
        let cones: Vec<Vec<usize>> = (0..n).map(|i| vec![order[i], order[(i + 1) % n]]).collect();
        Fan::new(rays, &cones)
    }

    pub fn p2() -> Fan {
        Fan::from_rays(vec![[1, 0].into(), [0, 1].into(), [-1, -1].into()]).expect("P2 fan")
    }

    pub fn p1xp1() -> Fan {
        Fan::from_rays(vec![[1, 0].into(), [0, 1].into(), [-1, 0].into(), [0, -1].into()]).expect("P1xP1 fan")
    }

    /// One-point blowup of the projective plane.
    pub fn bl1_p2() -> Fan {
        Fan::from_rays(vec![[1, 0].into(), [1, 1].into(), [0, 1].into(), [-1, -1].into()]).expect("Bl1P2 fan")
    }

    pub fn builtin(name: &str) -> Option<Fan> {
        match name {
            "P2" => Some(Self::p2()),
            "P1xP1" => Some(Self::p1xp1()),
            "Bl1P2" => Some(Self::bl1_p2()),
            _ => None,
        }
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Maximal cone `i` is spanned by rays `i` and `i + 1`.
    pub fn cone(&self, i: usize) -> (usize, usize) {
        (i, (i + 1) % self.len())
    }

    pub fn cones(&self) -> Vec<(usize, usize)> {
        (0..self.len()).map(|i| self.cone(i)).collect()
    }

    fn next(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    fn prev(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    /// `a_i` with `u_(i-1) + u_(i+1) = a_i u_i`.
    pub fn self_intersection_coefficient(&self, i: usize) -> i64 {
        let s = &self.rays[self.prev(i)] + &self.rays[self.next(i)];
        let u = &self.rays[i];
        if u[0] != 0 {
            s[0] / u[0]
        } else {
            s[1] / u[1]
        }
    }

    /// Class of the boundary curve `D_i`.
    pub fn kink(&self, i: usize) -> CurveClass {
        let mut v = vec![0; self.len()];
        v[self.prev(i)] += 1;
        v[self.next(i)] += 1;
        v[i] -= self.self_intersection_coefficient(i);
        CurveClass(v)
    }

    /// Intersection matrix `D_i . D_j`.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.len()).map(|i| self.kink(i).0).collect()
    }

    /// Maximal cones containing `x` (one in the interior, two on a ray, all at the origin).
    pub fn cones_containing(&self, x: &RationalPoint) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                let (a, b) = self.cone(i);
                !det_point(&self.rays[a], x).is_negative() && !(-det_point(&self.rays[b], x)).is_negative()
            })
            .collect()
    }

    pub fn cones_containing_vector(&self, v: &LatticeVector) -> Vec<usize> {
        self.cones_containing(&v.to_point())
    }

    /// Whether `a` and `b` lie in a common maximal cone.
    pub fn share_cone(&self, a: &LatticeVector, b: &LatticeVector) -> bool {
        let ca = self.cones_containing_vector(a);
        self.cones_containing_vector(b).iter().any(|c| ca.contains(c))
    }

    /// Ray coordinates of `p` in a cone containing it.
    pub fn weight(&self, p: &LatticeVector) -> WeightVector {
        let mut w = vec![0; self.len()];
        if p.is_zero() {
            return CurveClass(w);
        }
        let c = self.cones_containing_vector(p)[0];
        let (i, j) = self.cone(c);
        // det(u_i, u_j) = 1
        w[i] = det(p, &self.rays[j]);
        w[j] = det(&self.rays[i], p);
        CurveClass(w)
    }

    /// Sum of `gamma_i u_i`; zero exactly for curve classes.
    pub fn boundary_map(&self, v: &[i64]) -> LatticeVector {
        v.iter().zip(&self.rays).fold(LatticeVector::zero(2), |acc, (&c, u)| &acc + &u.scale(c))
    }

    pub fn class(&self, v: Vec<i64>) -> Result<CurveClass> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: v.len() });
        }
        if !self.boundary_map(&v).is_zero() {
            return Err(Error::InvalidArgument(format!("{v:?} is not in the kernel of Z^rays -> M")));
        }
        Ok(CurveClass(v))
    }

    /// Integer basis of the class lattice (rank `n - 2`).
    pub fn kernel_basis(&self) -> Vec<CurveClass> {
        let rows: Vec<Vec<BigRational>> = (0..2).map(|c| self.rays.iter().map(|u| q(u[c])).collect()).collect();
        let mut ns = linalg::nullspace(&rows, self.len());
        ns.reverse();
        ns.iter()
            .map(|v| CurveClass(linalg::primitive_integer(v).iter().map(|x| x.to_i64().expect("small")).collect()))
            .collect()
    }

    /// Coordinates of a class in [`Fan::kernel_basis`].
    pub fn decompose(&self, gamma: &CurveClass) -> Vec<BigRational> {
        let basis = self.kernel_basis();
        let mut aug: Vec<Vec<BigRational>> = (0..self.len())
            .map(|i| {
                let mut r: Vec<BigRational> = basis.iter().map(|b| q(b.0[i])).collect();
                r.push(q(gamma.0[i]));
                r
            })
            .collect();
        let piv = linalg::rref(&mut aug);
        let mut x = vec![BigRational::zero(); basis.len()];
        for (row, &c) in piv.iter().enumerate() {
            if c < basis.len() {
                x[c] = aug[row][basis.len()].clone();
            }
        }
        x
    }

    /// Generators of the nef cone `{F : F . D_i >= 0}` in divisor coordinates.
    pub fn nef_generators(&self) -> Vec<Vec<i64>> {
        let ineqs: Vec<LatticeVector> = self.intersection_matrix().into_iter().map(LatticeVector::new).collect();
        let cone = Cone::from_constraints(self.len(), &[], &ineqs);
        cone.generators().into_iter().map(|g| g.coords().to_vec()).collect()
    }
}

/// Intersection numbers with the boundary divisors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass(pub Vec<i64>);

impl CurveClass {
    pub fn zero(n: usize) -> Self {
        CurveClass(vec![0; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> CurveClass {
        CurveClass(self.0.iter().map(|a| a * k).collect())
    }

    /// `F . gamma` for a divisor `F = sum f_j D_j`.
    pub fn pair_divisor(&self, f: &[i64]) -> i64 {
        self.0.iter().zip(f).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", LatticeVector::new(self.0.clone()))
    }
}

pub type WeightVector = CurveClass;

/// `w(gamma)`: the stored intersection vector.
pub fn weight_class(gamma: &CurveClass) -> WeightVector {
    gamma.clone()
}

/// Class-valued piecewise-linear function, linear on each maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlFunction {
    fan: Fan,
    /// `slopes[i][c]` is the class multiplying coordinate `x_c` on cone `i`.
    slopes: Vec<[CurveClass; 2]>,
}

/// Builds `phi` with the geometric kinks, zero on cone 0.
pub fn build_phi(fan: &Fan) -> Result<PlFunction> {
    let kinks: Vec<CurveClass> = (0..fan.len()).map(|i| fan.kink(i)).collect();
    build_phi_with_kinks(fan, &kinks)
}

/// Builds a piecewise-linear function with prescribed kinks across the rays.
pub fn build_phi_with_kinks(fan: &Fan, kinks: &[CurveClass]) -> Result<PlFunction> {
    let n = fan.len();
    if kinks.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: kinks.len() });
    }
    // crossing ray i counterclockwise adds kinks[i] * det(u_i, .) = kinks[i] * (u_i0 x_1 - u_i1 x_0)
    let step = |i: usize| -> [CurveClass; 2] {
        let u = &fan.rays[i];
        [kinks[i].scale(-u[1]), kinks[i].scale(u[0])]
    };
    let mut slopes = vec![[CurveClass::zero(n), CurveClass::zero(n)]];
    for i in 1..n {
        let s = step(i);
        let prev = &slopes[i - 1];
        slopes.push([prev[0].add(&s[0]), prev[1].add(&s[1])]);
    }
    let phi = PlFunction { fan: fan.clone(), slopes };
    for i in 0..n {
        let (before, after) = (fan.prev(i), i);
        let s = step(i);
        let lhs = [phi.slopes[after][0].sub(&phi.slopes[before][0]), phi.slopes[after][1].sub(&phi.slopes[before][1])];
        if lhs != s {
            return Err(Error::InconsistentFan(format!("kink equation across ray {} has no solution", fan.rays[i])));
        }
    }
    Ok(phi)
}

/// Endpoint of a parametrized segment `t -> point + t * velocity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Infinite,
    At(BigRational),
}

/// Directed segment or ray `t -> point + t * velocity` for `t` between `from` and `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlSegment {
    pub point: RationalPoint,
    pub velocity: LatticeVector,
    /// `Infinite` means `t -> -infinity`.
    pub from: Bound,
    /// `Infinite` means `t -> +infinity`.
    pub to: Bound,
}

impl PlSegment {
    pub fn finite(start: RationalPoint, velocity: LatticeVector, length: BigRational) -> Self {
        PlSegment { point: start, velocity, from: Bound::At(BigRational::zero()), to: Bound::At(length) }
    }

    pub fn ray(start: RationalPoint, velocity: LatticeVector) -> Self {
        PlSegment { point: start, velocity, from: Bound::At(BigRational::zero()), to: Bound::Infinite }
    }

    pub fn line(point: RationalPoint, velocity: LatticeVector) -> Self {
        PlSegment { point, velocity, from: Bound::Infinite, to: Bound::Infinite }
    }

    fn at(&self, t: &BigRational) -> RationalPoint {
        self.point.offset(t, &self.velocity)
    }
}

impl PlFunction {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Linear part on cone `i` applied to a vector.
    pub fn slope_on(&self, cone: usize, v: &LatticeVector) -> CurveClass {
        self.slopes[cone][0].scale(v[0]).add(&self.slopes[cone][1].scale(v[1]))
    }

    pub fn slopes(&self) -> &[[CurveClass; 2]] {
        &self.slopes
    }

    /// `phi(p)` for a lattice point.
    pub fn value(&self, p: &LatticeVector) -> CurveClass {
        let c = self.fan.cones_containing_vector(p)[0];
        self.slope_on(c, p)
    }

    fn cone_at(&self, x: &RationalPoint) -> Result<usize> {
        let cs = self.fan.cones_containing(x);
        if cs.len() != 1 {
            return Err(Error::NonTransversalCrossing(format!("endpoint {x} lies on a ray of the fan")));
        }
        Ok(cs[0])
    }

    /// Cone containing `point + t v` for all large `t`.
    fn asymptotic_cone(&self, point: &RationalPoint, v: &LatticeVector) -> Result<usize> {
        let cs = self.fan.cones_containing_vector(v);
        if cs.len() == 1 {
            return Ok(cs[0]);
        }
        let i = (0..self.fan.len())
            .find(|&i| det(&self.fan.rays[i], v) == 0 && self.fan.rays[i].dot(v) > 0)
            .expect("direction on a ray");
        let s = det_point(&self.fan.rays[i], point);
        if s.is_zero() {
            return Err(Error::NonTransversalCrossing(format!(
                "asymptotic direction {v} runs along the ray through {point}"
            )));
        }
        Ok(if s.is_positive() { i } else { self.fan.prev(i) })
    }

    /// `d(phi o l)` at the end and at the start, in that order.
    fn end_derivatives(&self, l: &PlSegment) -> Result<(CurveClass, CurveClass)> {
        let end = match &l.to {
            Bound::At(t) => self.cone_at(&l.at(t))?,
            Bound::Infinite => self.asymptotic_cone(&l.point, &l.velocity)?,
        };
        let start = match &l.from {
            Bound::At(t) => self.cone_at(&l.at(t))?,
            Bound::Infinite => self.asymptotic_cone(&l.point, &-&l.velocity)?,
        };
        Ok((self.slope_on(end, &l.velocity), self.slope_on(start, &l.velocity)))
    }

    /// Sum of kinks over crossed rays weighted by `|det(u_i, v)|`.
    fn kink_sum(&self, l: &PlSegment) -> Result<CurveClass> {
        let n = self.fan.len();
        let mut total = CurveClass::zero(n);
        if l.velocity.is_zero() {
            return Ok(total);
        }
        for i in 0..n {
            let u = &self.fan.rays[i];
            let dv = det(u, &l.velocity);
            let dp = det_point(u, &l.point);
            if dv == 0 {
                if dp.is_zero() {
                    return Err(Error::NonTransversalCrossing(format!("segment runs along the ray {u}")));
                }
                continue;
            }
            let t = -dp / q(dv);
            let inside = |b: &Bound, lower: bool| match b {
                Bound::Infinite => true,
                Bound::At(s) => {
                    if lower {
                        *s < t
                    } else {
                        t < *s
                    }
                }
            };
            let touches = |b: &Bound| matches!(b, Bound::At(s) if *s == t);
            let x = l.at(&t);
            let along = u.eval(&x);
            if along.is_negative() {
                continue;
            }
            if along.is_zero() && (inside(&l.from, true) && inside(&l.to, false)) {
                return Err(Error::NonTransversalCrossing("segment passes through the origin".into()));
            }
            if touches(&l.from) || touches(&l.to) {
                return Err(Error::NonTransversalCrossing(format!("segment endpoint lies on the ray {u}")));
            }
            if along.is_positive() && inside(&l.from, true) && inside(&l.to, false) {
                total = total.add(&self.fan.kink(i).scale(dv.abs()));
            }
        }
        Ok(total)
    }

    /// Class of a segment, computed both as a kink sum and as an endpoint-derivative difference.
    pub fn segment_class(&self, l: &PlSegment) -> Result<CurveClass> {
        let by_kinks = self.kink_sum(l)?;
        if l.velocity.is_zero() {
            return Ok(by_kinks);
        }
        let (end, start) = self.end_derivatives(l)?;
        let by_derivative = end.sub(&start);
        if by_kinks != by_derivative {
            return Err(Error::InconsistentFan(format!(
                "segment class mismatch: kinks give {by_kinks}, derivatives give {by_derivative}"
            )));
        }
        Ok(by_kinks)
    }
}

/// Edge of a spine; `to = None` marks an unbounded leg.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpineEdge {
    pub from: usize,
    pub to: Option<usize>,
    /// Derivative leaving `from`.
    pub velocity: LatticeVector,
}

/// Piecewise-linear tree: vertex positions and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spine {
    pub vertices: Vec<RationalPoint>,
    pub edges: Vec<SpineEdge>,
}

impl Spine {
    fn edge_segment(&self, e: &SpineEdge) -> Result<PlSegment> {
        let p = &self.vertices[e.from];
        match e.to {
            None => Ok(PlSegment::ray(p.clone(), e.velocity.clone())),
            Some(j) => {
                let d = self.vertices[j].sub(p);
                let idx = e
                    .velocity
                    .coords()
                    .iter()
                    .position(|&x| x != 0)
                    .ok_or_else(|| Error::InvalidArgument("finite edge with zero derivative".into()))?;
                let t = &d.coords()[idx] / q(e.velocity[idx]);
                if !t.is_positive() || p.offset(&t, &e.velocity) != self.vertices[j] {
                    return Err(Error::InvalidArgument(format!("edge {} -> {j} does not follow its derivative", e.from)));
                }
                Ok(PlSegment::finite(p.clone(), e.velocity.clone(), t))
            }
        }
    }

    /// Outward derivatives at each vertex.
    fn outward(&self) -> Vec<Vec<LatticeVector>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            out[e.from].push(e.velocity.clone());
            if let Some(j) = e.to {
                out[j].push(-&e.velocity);
            }
        }
        out
    }

    /// True when every vertex of valence at least two is balanced.
    pub fn is_balanced(&self) -> bool {
        self.outward()
            .iter()
            .filter(|vs| vs.len() >= 2)
            .all(|vs| vs.iter().fold(LatticeVector::zero(2), |a, v| &a + v).is_zero())
    }

    /// The same tree with every finite edge oriented away from `root`.
    pub fn rooted_at(&self, root: usize) -> Result<Spine> {
        let n = self.vertices.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.from].push(i);
            if let Some(j) = e.to {
                adj[j].push(i);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        let mut edges = Vec::new();
        let mut used = vec![false; self.edges.len()];
        while let Some(v) = stack.pop() {
            for &ei in &adj[v] {
                if used[ei] {
                    continue;
                }
                used[ei] = true;
                let e = &self.edges[ei];
                match e.to {
                    None => edges.push(e.clone()),
                    Some(j) => {
                        let (a, b, vel) = if e.from == v { (v, j, e.velocity.clone()) } else { (v, e.from, -&e.velocity) };
                        if seen[b] {
                            return Err(Error::InvalidArgument("spine contains a cycle".into()));
                        }
                        seen[b] = true;
                        stack.push(b);
                        edges.push(SpineEdge { from: a, to: Some(b), velocity: vel });
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument("spine is not connected".into()));
        }
        Ok(Spine { vertices: self.vertices.clone(), edges })
    }
}

/// Sum of edge classes with edges oriented away from `root`.
pub fn tree_class_rooted(phi: &PlFunction, spine: &Spine, root: usize) -> Result<CurveClass> {
    let rooted = spine.rooted_at(root)?;
    let mut total = CurveClass::zero(phi.fan.len());
    for e in &rooted.edges {
        total = total.add(&phi.segment_class(&rooted.edge_segment(e)?)?);
    }
    Ok(total)
}

/// Tree class, checked to be independent of the root vertex.
pub fn tree_class(phi: &PlFunction, spine: &Spine) -> Result<CurveClass> {
    if spine.vertices.is_empty() {
        return Err(Error::InvalidArgument("empty spine".into()));
    }
    let c0 = tree_class_rooted(phi, spine, 0)?;
    for r in 1..spine.vertices.len() {
        if tree_class_rooted(phi, spine, r)? != c0 {
            return Err(Error::InconsistentFan("tree class depends on the root".into()));
        }
    }
    Ok(c0)
}

/// `1` when the spine is balanced everywhere (no bending) and `gamma` is its class.
pub fn straight_count(phi: &PlFunction, spine: &Spine, gamma: &CurveClass) -> Result<u8> {
    let cls = tree_class(phi, spine)?;
    Ok(u8::from(spine.is_balanced() && cls == *gamma))
}

/// Tripod rooted at `x` with unbounded legs `a`, `b` and the `-(a+b)` leg truncated at `x`.
pub fn tripod(x: &RationalPoint, a: &LatticeVector, b: &LatticeVector) -> Spine {
    let mut edges = Vec::new();
    for v in [a, b] {
        if !v.is_zero() {
            edges.push(SpineEdge { from: 0, to: None, velocity: v.clone() });
        }
    }
    Spine { vertices: vec![x.clone()], edges }
}

/// Certified root for the tripod of `(a, b)`: inside a maximal cone containing `a + b`,
/// off every ray line and off the lines spanned by `a` and `b`.
pub fn tripod_root(fan: &Fan, a: &LatticeVector, b: &LatticeVector, variant: usize) -> Result<CertifiedPoint> {
    let s = a + b;
    let cone = fan.cones_containing_vector(&s)[0];
    let (i, j) = fan.cone(cone);
    let mut avoid: Vec<LatticeVector> = fan.rays.iter().map(|u| LatticeVector::new(vec![-u[1], u[0]])).collect();
    for v in [a, b] {
        if !v.is_zero() {
            avoid.push(LatticeVector::new(vec![-v[1], v[0]]));
        }
    }
    let g = generic_point(2, None, &[])?.point;
    for step in 0..(avoid.len() as i64 + 2) * 4 + variant as i64 * 4 {
        // interior point (alpha u_i + beta u_j) with alpha, beta > 0 varying along a curve
        let alpha = BigRational::new((step + 2).into(), 3.into()) + &g.coords()[0];
        let beta = BigRational::new((2 * step + 5).into(), 7.into()) + &g.coords()[1];
        let x = fan.rays[i].to_point().scale(&alpha).add(&fan.rays[j].to_point().scale(&beta));
        let cert = CertifiedPoint { point: x, constraint: None, avoided: avoid.clone() };
        if step >= variant as i64 && cert.verify() {
            return Ok(cert);
        }
    }
    Err(Error::NonGenericEndpoint("no generic tripod root found".into()))
}

/// `theta_a theta_b = z^gamma theta_(a+b)`: returns `(a + b, gamma)`.
pub fn toric_product(phi: &PlFunction, a: &LatticeVector, b: &LatticeVector) -> Result<(LatticeVector, CurveClass)> {
    toric_product_at(phi, a, b, 0)
}

/// [`toric_product`] with the `variant`-th certified root, for independence checks.
pub fn toric_product_at(
    phi: &PlFunction,
    a: &LatticeVector,
    b: &LatticeVector,
    variant: usize,
) -> Result<(LatticeVector, CurveClass)> {
    for v in [a, b] {
        if v.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: v.len() });
        }
    }
    let root = tripod_root(&phi.fan, a, b, variant)?;
    let gamma = tree_class(phi, &tripod(&root.point, a, b))?;
    Ok((a + b, gamma))
}

/// Stanley-Reisner product: `theta_(a+b)` when `a` and `b` share a cone, zero otherwise.
pub fn stanley_reisner_product(fan: &Fan, a: &LatticeVector, b: &LatticeVector) -> Option<LatticeVector> {
    fan.share_cone(a, b).then(|| a + b)
}

/// The toric product with every nonzero `z^gamma` sent to zero.
pub fn degenerate_product(phi: &PlFunction, a: &LatticeVector, b: &LatticeVector) -> Result<Option<LatticeVector>> {
    let (s, g) = toric_product(phi, a, b)?;
    Ok(g.is_zero().then_some(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn p2_kinks_are_lines() {
        let f = Fan::p2();
        for i in 0..3 {
            assert_eq!(f.kink(i), CurveClass(vec![1, 1, 1]));
        }
        assert!(build_phi(&f).is_ok());
        assert_eq!(f.kernel_basis(), vec![CurveClass(vec![1, 1, 1])]);
    }

    #[test]
    fn p1xp1_kinks() {
        let f = Fan::p1xp1();
        assert_eq!(f.kink(0), CurveClass(vec![0, 1, 0, 1]));
        assert_eq!(f.kink(1), CurveClass(vec![1, 0, 1, 0]));
    }

    #[test]
    fn corrupted_kinks_are_inconsistent() {
        let f = Fan::p2();
        let mut k: Vec<CurveClass> = (0..3).map(|i| f.kink(i)).collect();
        k[1] = CurveClass(vec![2, 1, 1]);
        assert!(matches!(build_phi_with_kinks(&f, &k), Err(Error::InconsistentFan(_))));
    }

    #[test]
    fn invalid_fans() {
        assert!(Fan::from_rays(vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, 0])]).is_err());
        assert!(Fan::from_rays(vec![v(&[1, 0]), v(&[1, 2]), v(&[-1, -1])]).is_err());
        assert!(Fan::new(vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])], &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn segment_examples() {
        let f = Fan::p2();
        let phi = build_phi(&f).unwrap();
        let inside = PlSegment::finite(RationalPoint::from_fractions(&[(1, 3), (1, 5)]), v(&[1, 1]), frac(2, 1));
        assert!(phi.segment_class(&inside).unwrap().is_zero());
        let line = PlSegment::line(RationalPoint::from_fractions(&[(0, 1), (3, 10)]), v(&[1, 0]));
        assert_eq!(phi.segment_class(&line).unwrap(), CurveClass(vec![1, 1, 1]));
        let double = PlSegment::line(RationalPoint::from_fractions(&[(0, 1), (3, 10)]), v(&[2, 0]));
        assert_eq!(phi.segment_class(&double).unwrap(), CurveClass(vec![2, 2, 2]));
        let along = PlSegment::line(RationalPoint::from_fractions(&[(0, 1), (0, 1)]), v(&[1, 0]));
        assert!(phi.segment_class(&along).is_err());
    }

    #[test]
    fn weights() {
        let f = Fan::p2();
        assert_eq!(f.weight(&v(&[1, 0])), CurveClass(vec![1, 0, 0]));
        assert_eq!(f.weight(&v(&[-1, 0])), CurveClass(vec![0, 1, 1]));
        assert_eq!(weight_class(&CurveClass(vec![1, 1, 1])), CurveClass(vec![1, 1, 1]));
    }

    #[test]
    fn products() {
        let f = Fan::p2();
        let phi = build_phi(&f).unwrap();
        assert_eq!(toric_product(&phi, &v(&[1, 0]), &v(&[-1, 0])).unwrap(), (v(&[0, 0]), CurveClass(vec![1, 1, 1])));
        assert_eq!(toric_product(&phi, &v(&[1, 0]), &v(&[2, 1])).unwrap(), (v(&[3, 1]), CurveClass(vec![0, 0, 0])));
        assert_eq!(toric_product(&phi, &v(&[0, 0]), &v(&[-2, 5])).unwrap(), (v(&[-2, 5]), CurveClass(vec![0, 0, 0])));
    }

    #[test]
    fn straight_counts() {
        let f = Fan::p2();
        let phi = build_phi(&f).unwrap();
        let x = RationalPoint::from_fractions(&[(1, 3), (2, 7)]);
        let seg = Spine {
            vertices: vec![x.clone()],
            edges: vec![
                SpineEdge { from: 0, to: None, velocity: v(&[1, 0]) },
                SpineEdge { from: 0, to: None, velocity: v(&[-1, 0]) },
            ],
        };
        let d = tree_class(&phi, &seg).unwrap();
        assert_eq!(straight_count(&phi, &seg, &d).unwrap(), 1);
        assert_eq!(straight_count(&phi, &seg, &d.add(&CurveClass(vec![1, 1, 1]))).unwrap(), 0);
        let bent = Spine {
            vertices: vec![x],
            edges: vec![
                SpineEdge { from: 0, to: None, velocity: v(&[1, 0]) },
                SpineEdge { from: 0, to: None, velocity: v(&[0, 1]) },
            ],
        };
        let db = tree_class(&phi, &bent).unwrap();
        assert_eq!(straight_count(&phi, &bent, &db).unwrap(), 0);
    }

    #[test]
    fn nef_generators_p2() {
        let g = Fan::p2().nef_generators();
        // D_i . D_j = 1 for all i, j on P2, so nef = {f : f0 + f1 + f2 >= 0}
        for f in &g {
            assert!(CurveClass(vec![1, 1, 1]).pair_divisor(f) >= 0);
        }
        assert!(g.iter().any(|f| CurveClass(vec![1, 1, 1]).pair_divisor(f) > 0));
    }
}
