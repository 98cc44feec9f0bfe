//! The lattice `M`, its skew form, seeds and the exponent monoid `P`.
//!
//! Coordinates are always taken in the seed basis. `P` is freely generated by
//! the unfrozen basis vectors, so membership and degree are coordinate tests.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, q};

/// Integer vector in the seed basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Greatest common divisor of the coordinates (0 for the zero vector).
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    /// Splits `v = j * p` with `p` primitive and `j > 0`.
    pub fn primitive_part(&self) -> Option<(LatticeVector, i64)> {
        let c = self.content();
        if c == 0 {
            return None;
        }
        Some((LatticeVector(self.0.iter().map(|x| x / c).collect()), c))
    }

    pub fn dot(&self, other: &LatticeVector) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Integer functional evaluated on a rational point.
    pub fn eval(&self, x: &RationalPoint) -> BigRational {
        self.0
            .iter()
            .zip(x.coords())
            .filter(|(a, _)| **a != 0)
            .map(|(a, b)| q(*a) * b)
            .sum()
    }

    pub fn to_point(&self) -> RationalPoint {
        RationalPoint(self.0.iter().map(|&x| q(x)).collect())
    }

    fn check_len(&self, other: &Self) {
        assert_eq!(self.0.len(), other.0.len(), "lattice vectors of different rank");
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVector {
    fn from(v: [i64; N]) -> Self {
        LatticeVector(v.to_vec())
    }
}

impl Index<usize> for LatticeVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        self.check_len(rhs);
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: LatticeVector) -> LatticeVector {
        &self + &rhs
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        self.check_len(rhs);
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: LatticeVector) -> LatticeVector {
        &self - &rhs
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        -&self
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Exact point of `M_R`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(Vec<BigRational>);

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalPoint(coords)
    }

    pub fn from_fractions(coords: &[(i64, i64)]) -> Self {
        RationalPoint(coords.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalPoint(coords.iter().map(|&x| q(x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        RationalPoint(vec![BigRational::zero(); rank])
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// `self + t * v`
    pub fn offset(&self, t: &BigRational, v: &LatticeVector) -> RationalPoint {
        RationalPoint(self.0.iter().zip(v.coords()).map(|(x, &d)| x + t * q(d)).collect())
    }

    /// `self + t * (other - self)`
    pub fn lerp(&self, other: &RationalPoint, t: &BigRational) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + t * (b - a)).collect())
    }

    pub fn add(&self, other: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, t: &BigRational) -> RationalPoint {
        RationalPoint(self.0.iter().map(|a| a * t).collect())
    }

    /// Parses `a,b,...` where each entry is an integer or `p/q`.
    pub fn parse(s: &str) -> Result<RationalPoint> {
        let coords = s
            .split(',')
            .map(|t| parse_rational(t.trim()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidArgument(format!("cannot parse rational point `{s}`")))?;
        Ok(RationalPoint(coords))
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.trim().parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Integer skew-symmetric form, `pair(u, v) = u^T B v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewForm {
    matrix: Vec<Vec<i64>>,
}

impl SkewForm {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let r = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: row.len() });
            }
            for j in 0..r {
                if matrix[i][j] + matrix[j][i] != 0 {
                    return Err(Error::InvalidSeed(format!(
                        "form is not antisymmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(SkewForm { matrix })
    }

    /// Rank-2 form with `pair(e1, e2) = b`.
    pub fn rank2(b: i64) -> Self {
        SkewForm { matrix: vec![vec![0, b], vec![-b, 0]] }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn pair(&self, u: &LatticeVector, v: &LatticeVector) -> Result<i64> {
        let r = self.rank();
        for w in [u, v] {
            if w.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: w.len() });
            }
        }
        Ok(self.pair_unchecked(u, v))
    }

    pub(crate) fn pair_unchecked(&self, u: &LatticeVector, v: &LatticeVector) -> i64 {
        let mut s = 0;
        for (i, &ui) in u.coords().iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.coords().iter().enumerate() {
                s += ui * self.matrix[i][j] * vj;
            }
        }
        s
    }

    /// Coordinates of the functional `pair(u, .)`.
    pub fn functional(&self, u: &LatticeVector) -> LatticeVector {
        let r = self.rank();
        LatticeVector::new(
            (0..r).map(|j| u.coords().iter().enumerate().map(|(i, &ui)| ui * self.matrix[i][j]).sum()).collect(),
        )
    }

    pub fn determinant(&self) -> BigRational {
        determinant(&linalg::to_q_matrix(&self.matrix))
    }

    pub fn is_unimodular(&self) -> bool {
        let d = self.determinant();
        d.abs().is_one()
    }
}

pub(crate) fn determinant(m: &linalg::QMatrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        let pivot = a[c][c].clone();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..n {
                let d = &f * &a[c][j];
                a[i][j] -= d;
            }
        }
    }
    det
}

/// Skew form plus the set `S` of unfrozen basis indices (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Seed {
    form: SkewForm,
    unfrozen: Vec<usize>,
    in_s: Vec<bool>,
}

impl Seed {
    /// Builds a seed and checks that `pair(e, .)` is primitive for every `e in S`.
    pub fn new(form: SkewForm, unfrozen: Vec<usize>) -> Result<Self> {
        let seed = Self::new_relaxed(form, unfrozen)?;
        for &i in &seed.unfrozen {
            let f = seed.form.functional(&LatticeVector::basis(seed.rank(), i));
            if f.content() != 1 {
                return Err(Error::InvalidSeed(format!(
                    "pair(e{}, .) = {} is not primitive",
                    i + 1,
                    f
                )));
            }
        }
        Ok(seed)
    }

    /// Like [`Seed::new`] but only requires `pair(e, .)` to be nonzero.
    ///
    /// Rank-2 Kronecker seeds (`pair(e1, e2) = b` with `|b| > 1`) are built this way.
    pub fn new_relaxed(form: SkewForm, mut unfrozen: Vec<usize>) -> Result<Self> {
        let r = form.rank();
        if r == 0 {
            return Err(Error::InvalidSeed("rank must be positive".into()));
        }
        unfrozen.sort_unstable();
        if unfrozen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSeed("duplicate unfrozen index".into()));
        }
        if let Some(&bad) = unfrozen.iter().find(|&&i| i >= r) {
            return Err(Error::InvalidSeed(format!("unfrozen index {} exceeds rank {}", bad + 1, r)));
        }
        let mut in_s = vec![false; r];
        for &i in &unfrozen {
            in_s[i] = true;
            if form.functional(&LatticeVector::basis(r, i)).is_zero() {
                return Err(Error::InvalidSeed(format!("pair(e{}, .) vanishes", i + 1)));
            }
        }
        Ok(Seed { form, unfrozen, in_s })
    }

    /// `pair(e1, e2) = 1`, both unfrozen.
    pub fn a2() -> Self {
        Seed::new(SkewForm::rank2(1), vec![0, 1]).expect("A2 seed")
    }

    /// `pair(e1, e2) = b`, both unfrozen.
    pub fn kronecker(b: i64) -> Self {
        Seed::new_relaxed(SkewForm::rank2(b), vec![0, 1]).expect("Kronecker seed")
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn form(&self) -> &SkewForm {
        &self.form
    }

    pub fn unfrozen(&self) -> &[usize] {
        &self.unfrozen
    }

    pub fn is_unfrozen(&self, i: usize) -> bool {
        self.in_s[i]
    }

    pub fn generator(&self, i: usize) -> LatticeVector {
        LatticeVector::basis(self.rank(), i)
    }

    pub fn pair(&self, u: &LatticeVector, v: &LatticeVector) -> i64 {
        self.form.pair_unchecked(u, v)
    }

    /// Degree in `P`, or `None` when `n` is not in `P`.
    pub fn degree(&self, n: &LatticeVector) -> Option<u32> {
        if n.len() != self.rank() {
            return None;
        }
        let mut d: i64 = 0;
        for (i, &x) in n.coords().iter().enumerate() {
            if x < 0 || (x > 0 && !self.in_s[i]) {
                return None;
            }
            d += x;
        }
        u32::try_from(d).ok()
    }

    pub fn in_monoid(&self, n: &LatticeVector) -> bool {
        self.degree(n).is_some()
    }

    /// All elements of `P` with degree at most `k`, in lexicographic order.
    pub fn monoid_elements(&self, k: u32) -> Vec<LatticeVector> {
        let r = self.rank();
        let mut out = Vec::new();
        let mut cur = vec![0i64; r];
        fn rec(idx: usize, left: i64, s: &[usize], cur: &mut Vec<i64>, out: &mut Vec<LatticeVector>) {
            if idx == s.len() {
                out.push(LatticeVector::new(cur.clone()));
                return;
            }
            for x in 0..=left {
                cur[s[idx]] = x;
                rec(idx + 1, left - x, s, cur, out);
            }
            cur[s[idx]] = 0;
        }
        rec(0, k as i64, &self.unfrozen, &mut cur, &mut out);
        out.sort();
        out
    }

    /// Lower bound of two vectors in the `P`-order, if the frozen coordinates agree.
    pub fn meet(&self, a: &LatticeVector, b: &LatticeVector) -> Option<LatticeVector> {
        let mut out = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            if self.in_s[i] {
                out.push(a[i].min(b[i]));
            } else if a[i] == b[i] {
                out.push(a[i]);
            } else {
                return None;
            }
        }
        Some(LatticeVector::new(out))
    }
}

/// A rational point together with the exact conditions it was certified against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedPoint {
    pub point: RationalPoint,
    pub constraint: Option<LatticeVector>,
    pub avoided: Vec<LatticeVector>,
}

impl CertifiedPoint {
    /// Re-runs every declared check.
    pub fn verify(&self) -> bool {
        if let Some(n) = &self.constraint {
            if !n.eval(&self.point).is_zero() {
                return false;
            }
        }
        self.avoided.iter().all(|a| !a.eval(&self.point).is_zero())
    }
}

/// Deterministic point on `constraint^perp` (dot-product hyperplane) avoiding every listed hyperplane.
///
/// The candidate points follow a moment curve inside the constraint hyperplane, so each
/// avoided functional kills at most `dim - 1` candidates and the search is finite.
pub fn generic_point(
    rank: usize,
    constraint: Option<&LatticeVector>,
    avoid: &[LatticeVector],
) -> Result<CertifiedPoint> {
    let basis: Vec<Vec<BigRational>> = match constraint {
        Some(n) => {
            if n.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: n.len() });
            }
            if n.is_zero() {
                return Err(Error::InvalidArgument("constraint normal must be nonzero".into()));
            }
            let row = vec![n.coords().iter().map(|&x| q(x)).collect()];
            linalg::nullspace(&row, rank)
        }
        None => (0..rank).map(|i| LatticeVector::basis(rank, i).to_point().0).collect(),
    };
    for a in avoid {
        if a.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, found: a.len() });
        }
        let vanishes = basis.iter().all(|b| a.eval(&RationalPoint(b.clone())).is_zero());
        if vanishes {
            return Err(Error::ConstraintConflict);
        }
    }
    let dim = basis.len().max(1);
    let tries = (dim - 1) * avoid.len() + 1;
    for j in 0..tries as i64 {
        // t = 2 - 1/(j+2) gives pairwise distinct parameters 3/2, 5/3, 7/4, ...
        let t = BigRational::new(BigInt::from(2 * j + 3), BigInt::from(j + 2));
        let mut p = vec![BigRational::zero(); rank];
        let mut tp = BigRational::one();
        for b in &basis {
            for (x, y) in p.iter_mut().zip(b) {
                *x += &tp * y;
            }
            tp *= &t;
        }
        let cand = CertifiedPoint {
            point: RationalPoint(p),
            constraint: constraint.cloned(),
            avoided: avoid.to_vec(),
        };
        if cand.verify() {
            return Ok(cand);
        }
    }
    unreachable!("moment-curve search is exhaustive")
}

/// Convenience wrapper using the seed's rank.
pub fn seed_generic_point(
    seed: &Seed,
    constraint: Option<&LatticeVector>,
    avoid: &[LatticeVector],
) -> Result<CertifiedPoint> {
    generic_point(seed.rank(), constraint, avoid)
}
