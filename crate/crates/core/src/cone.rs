//! Rational polyhedral cones with both representations kept in canonical form.
//!
//! Conversion between generators and inequalities is done by exhaustive
//! subset search, which is fine for the ranks and generator counts that appear
//! in wall supports and fans (a handful of each).

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::lattice::{LatticeVector, RationalPoint};
use crate::linalg::{self, q, QMatrix};

/// Closed convex rational cone in `M_R`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    rank: usize,
    dim: usize,
    /// Lineality basis `l` (each contributes `l` and `-l`), then extreme rays; all primitive.
    lineality: Vec<LatticeVector>,
    rays: Vec<LatticeVector>,
    /// Dot-product equations cutting out the linear span.
    equations: Vec<LatticeVector>,
    /// Inward facet normals, projected into the span: `a . x >= 0`.
    facets: Vec<LatticeVector>,
}

fn to_rows(vs: &[LatticeVector]) -> QMatrix {
    vs.iter().map(|v| v.coords().iter().map(|&x| q(x)).collect()).collect()
}

fn to_lattice(v: &[BigRational]) -> LatticeVector {
    LatticeVector::new(
        linalg::primitive_integer(v)
            .into_iter()
            .map(|x| x.to_i64().expect("cone coordinate overflow"))
            .collect(),
    )
}

fn dot_qv(a: &[BigRational], v: &LatticeVector) -> BigRational {
    a.iter().zip(v.coords()).filter(|(_, &y)| y != 0).map(|(x, &y)| x * q(y)).sum()
}

/// Canonical integer basis of the row space of `rows`.
fn canonical_basis(rows: QMatrix) -> Vec<LatticeVector> {
    let mut m = rows;
    let p = linalg::rref(&mut m);
    m.truncate(p.len());
    m.iter().map(|r| to_lattice(r)).collect()
}

fn subsets(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}

impl Cone {
    /// Cone spanned by nonnegative combinations of `gens`.
    pub fn from_generators(rank: usize, gens: &[LatticeVector]) -> Cone {
        let gens: Vec<LatticeVector> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        let rows = to_rows(&gens);
        let dim = if gens.is_empty() { 0 } else { linalg::rank(&rows) };
        let equations = if gens.is_empty() {
            (0..rank).map(|i| LatticeVector::basis(rank, i)).collect()
        } else {
            canonical_basis(linalg::nullspace(&rows, rank))
        };
        let mut facets = Vec::new();
        if dim > 0 {
            let mut span = rows.clone();
            let p = linalg::rref(&mut span);
            span.truncate(p.len());
            subsets(gens.len(), dim - 1, &mut |sub| {
                let sub_rows: QMatrix = sub.iter().map(|&i| rows[i].clone()).collect();
                if dim > 1 && linalg::rank(&sub_rows) != dim - 1 {
                    return;
                }
                // a = sum lambda_i span_i with a . g = 0 for g in the subset
                let cons: QMatrix = sub
                    .iter()
                    .map(|&i| span.iter().map(|s| linalg::dot_q(s, &rows[i])).collect())
                    .collect();
                let ns = if cons.is_empty() {
                    vec![{
                        let mut e = vec![BigRational::zero(); dim];
                        e[0] = q(1);
                        e
                    }]
                } else {
                    linalg::nullspace(&cons, dim)
                };
                if ns.len() != 1 {
                    return;
                }
                let mut a = vec![BigRational::zero(); rank];
                for (lam, s) in ns[0].iter().zip(&span) {
                    for (x, y) in a.iter_mut().zip(s) {
                        *x += lam * y;
                    }
                }
                let vals: Vec<BigRational> = gens.iter().map(|g| dot_qv(&a, g)).collect();
                let pos = vals.iter().any(|v| v.is_positive());
                let neg = vals.iter().any(|v| v.is_negative());
                let a = match (pos, neg) {
                    (true, false) => to_lattice(&a),
                    (false, true) => -to_lattice(&a),
                    _ => return,
                };
                if !facets.contains(&a) {
                    facets.push(a);
                }
            });
        }
        facets.sort();
        let (lineality, rays) = Self::generators_from_constraints(rank, &equations, &facets);
        Cone { rank, dim, lineality, rays, equations, facets }
    }

    /// Cone `{x : e . x = 0 for e in equations, a . x >= 0 for a in inequalities}`.
    pub fn from_constraints(rank: usize, equations: &[LatticeVector], inequalities: &[LatticeVector]) -> Cone {
        let (lineality, rays) = Self::generators_from_constraints(rank, equations, inequalities);
        let mut gens = rays;
        for l in &lineality {
            gens.push(l.clone());
            gens.push(-l);
        }
        Self::from_generators(rank, &gens)
    }

    fn generators_from_constraints(
        rank: usize,
        equations: &[LatticeVector],
        inequalities: &[LatticeVector],
    ) -> (Vec<LatticeVector>, Vec<LatticeVector>) {
        let mut all = to_rows(equations);
        all.extend(to_rows(inequalities));
        let lineality = if all.is_empty() {
            (0..rank).map(|i| LatticeVector::basis(rank, i)).collect()
        } else {
            canonical_basis(linalg::nullspace(&all, rank))
        };
        let mut eqs = to_rows(equations);
        eqs.extend(to_rows(&lineality));
        let r_e = if eqs.is_empty() { 0 } else { linalg::rank(&eqs) };
        let mut rays: Vec<LatticeVector> = Vec::new();
        if r_e < rank {
            let need = rank - 1 - r_e;
            let ineq_rows = to_rows(inequalities);
            subsets(inequalities.len(), need, &mut |sub| {
                let mut rows = eqs.clone();
                rows.extend(sub.iter().map(|&i| ineq_rows[i].clone()));
                let ns = linalg::nullspace(&rows, rank);
                if ns.len() != 1 {
                    return;
                }
                let v = to_lattice(&ns[0]);
                for cand in [v.clone(), -v] {
                    if inequalities.iter().all(|a| a.dot(&cand) >= 0) && !rays.contains(&cand) {
                        rays.push(cand);
                    }
                }
            });
        }
        rays.sort();
        (lineality, rays)
    }

    /// The full hyperplane `{x : normal . x = 0}`.
    pub fn hyperplane(normal: &LatticeVector) -> Cone {
        Self::from_constraints(normal.len(), std::slice::from_ref(normal), &[])
    }

    pub fn ray(g: &LatticeVector) -> Cone {
        Self::from_generators(g.len(), std::slice::from_ref(g))
    }

    pub fn origin(rank: usize) -> Cone {
        Self::from_generators(rank, &[])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn equations(&self) -> &[LatticeVector] {
        &self.equations
    }

    pub fn facets(&self) -> &[LatticeVector] {
        &self.facets
    }

    /// Canonical generator list: `l, -l` for each lineality vector, then the extreme rays.
    pub fn generators(&self) -> Vec<LatticeVector> {
        let mut g = Vec::new();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(-l);
        }
        g.extend(self.rays.iter().cloned());
        g
    }

    pub fn is_linear_subspace(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn contains_point(&self, x: &RationalPoint) -> bool {
        self.equations.iter().all(|e| e.eval(x).is_zero()) && self.facets.iter().all(|a| !a.eval(x).is_negative())
    }

    pub fn contains_vector(&self, v: &LatticeVector) -> bool {
        self.equations.iter().all(|e| e.dot(v) == 0) && self.facets.iter().all(|a| a.dot(v) >= 0)
    }

    pub fn in_relative_interior(&self, x: &RationalPoint) -> bool {
        self.equations.iter().all(|e| e.eval(x).is_zero()) && self.facets.iter().all(|a| a.eval(x).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains_vector(g))
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        Self::from_constraints(self.rank, &eqs, &ineqs)
    }

    /// Minkowski sum with the ray spanned by `g`.
    pub fn add_ray(&self, g: &LatticeVector) -> Cone {
        let mut gens = self.generators();
        gens.push(g.clone());
        Self::from_generators(self.rank, &gens)
    }

    /// Sum of all generators; lies in the relative interior.
    pub fn interior_vector(&self) -> LatticeVector {
        self.rays.iter().fold(LatticeVector::zero(self.rank), |acc, r| &acc + r)
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone{:?}", self.generators())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    #[test]
    fn ray_and_line_in_plane() {
        let r = Cone::ray(&v(&[-1, -1]));
        assert_eq!(r.dim(), 1);
        assert!(r.contains_vector(&v(&[-2, -2])));
        assert!(!r.contains_vector(&v(&[1, 1])));
        assert!(!r.in_relative_interior(&RationalPoint::zero(2)));
        assert!(r.contains_point(&RationalPoint::zero(2)));

        let line = Cone::hyperplane(&v(&[0, 1]));
        assert_eq!(line.dim(), 1);
        assert!(line.is_linear_subspace());
        assert!(line.contains_vector(&v(&[-5, 0])));
        assert!(line.in_relative_interior(&RationalPoint::zero(2)));
        assert_eq!(line, Cone::from_generators(2, &[v(&[3, 0]), v(&[-1, 0])]));
    }

    #[test]
    fn quadrant_facets() {
        let c = Cone::from_generators(2, &[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.rays(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(c.facets().len(), 2);
        assert!(c.in_relative_interior(&RationalPoint::from_ints(&[1, 2])));
        assert!(!c.in_relative_interior(&RationalPoint::from_ints(&[0, 2])));
    }

    #[test]
    fn intersection_of_planes_in_rank_three() {
        let a = Cone::hyperplane(&v(&[1, 0, 0]));
        let b = Cone::hyperplane(&v(&[0, 1, 0]));
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains_vector(&v(&[0, 0, -4])));
        let half = c.add_ray(&v(&[-1, -1, 0]));
        assert_eq!(half.dim(), 2);
        assert!(half.contains_vector(&v(&[-1, -1, 5])));
        assert!(!half.contains_vector(&v(&[1, 1, 0])));
    }

    #[test]
    fn origin_plus_ray() {
        let o = Cone::origin(2);
        assert_eq!(o.dim(), 0);
        let r = o.add_ray(&v(&[-1, -1]));
        assert_eq!(r, Cone::ray(&v(&[-2, -2])));
        let i = Cone::hyperplane(&v(&[0, 1])).intersect(&Cone::hyperplane(&v(&[1, 0])));
        assert_eq!(i, o);
    }

    #[test]
    fn whole_space() {
        let c = Cone::from_generators(2, &[v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])]);
        assert_eq!(c.dim(), 2);
        assert!(c.is_linear_subspace());
        assert!(c.facets().is_empty());
    }
}
