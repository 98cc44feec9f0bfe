//! Truncated series `z^m * sum_p c_p z^p` with offsets `p` in the monoid `P`.
//!
//! Order `k` keeps offsets of degree at most `k`; everything is computed
//! modulo `J^(k+1)`. Offsets are stored in a `BTreeMap`, which gives the
//! lexicographic iteration order used by every serialized format.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, Seed};
use crate::scalar::{add_product, Coefficient};

/// Degree of an offset already known to lie in `P` (coordinates outside `S` vanish).
pub(crate) fn offset_degree(p: &LatticeVector) -> u32 {
    p.coords().iter().sum::<i64>() as u32
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries<C> {
    base: LatticeVector,
    terms: BTreeMap<LatticeVector, C>,
    order: u32,
}

impl<C: Coefficient> TruncatedSeries<C> {
    pub fn zero(base: LatticeVector, order: u32) -> Self {
        TruncatedSeries { base, terms: BTreeMap::new(), order }
    }

    pub fn one(rank: usize, order: u32) -> Self {
        Self::monomial(LatticeVector::zero(rank), order)
    }

    /// `z^base`
    pub fn monomial(base: LatticeVector, order: u32) -> Self {
        let rank = base.len();
        let mut terms = BTreeMap::new();
        terms.insert(LatticeVector::zero(rank), C::one());
        TruncatedSeries { base, terms, order }
    }

    /// Builds a series from `(offset, coefficient)` pairs, checking `P`-membership.
    ///
    /// Offsets of degree above `order` are dropped and repeated offsets are summed.
    pub fn from_terms(
        seed: &Seed,
        base: LatticeVector,
        terms: impl IntoIterator<Item = (LatticeVector, C)>,
        order: u32,
    ) -> Result<Self> {
        if base.len() != seed.rank() {
            return Err(Error::DimensionMismatch { expected: seed.rank(), found: base.len() });
        }
        let mut s = Self::zero(base, order);
        for (p, c) in terms {
            let d = seed.degree(&p).ok_or_else(|| Error::NotInMonoid(p.to_string()))?;
            if d <= order {
                s.add_term(p, c);
            }
        }
        Ok(s)
    }

    pub fn base(&self) -> &LatticeVector {
        &self.base
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.base.len()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Offsets and coefficients in lexicographic offset order.
    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &C)> {
        self.terms.iter()
    }

    /// Absolute exponents `base + offset` with their coefficients.
    pub fn exponents(&self) -> impl Iterator<Item = (LatticeVector, &C)> + '_ {
        self.terms.iter().map(move |(p, c)| (&self.base + p, c))
    }

    pub fn coeff(&self, offset: &LatticeVector) -> C {
        self.terms.get(offset).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of the absolute exponent `e`.
    pub fn coeff_of_exponent(&self, e: &LatticeVector) -> C {
        self.coeff(&(e - &self.base))
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&LatticeVector::zero(self.rank()))
    }

    /// Adds `c z^(base + offset)`; drops the entry if it cancels to zero.
    pub fn add_term(&mut self, offset: LatticeVector, c: C) {
        if c.is_zero() || offset_degree(&offset) > self.order {
            return;
        }
        match self.terms.entry(offset) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let cur = std::mem::replace(o.get_mut(), C::zero());
                let sum = cur + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Adds `c z^e` for an absolute exponent; `e - base` must be a valid offset.
    pub fn add_exponent(&mut self, e: &LatticeVector, c: C) {
        let p = e - &self.base;
        debug_assert!(p.coords().iter().all(|&x| x >= 0), "exponent below base");
        self.add_term(p, c);
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(self.base.clone(), self.order);
        if k.is_zero() {
            return out;
        }
        for (p, c) in &self.terms {
            out.terms.insert(p.clone(), c.clone() * k.clone());
        }
        out
    }

    /// Multiplies by `z^v`.
    pub fn shift(&self, v: &LatticeVector) -> Self {
        TruncatedSeries { base: &self.base + v, terms: self.terms.clone(), order: self.order }
    }

    /// Re-expresses the series relative to a lower base `new_base`.
    ///
    /// The truncation bound is kept relative to the new base, so `order` grows
    /// by `degree(base - new_base)`.
    pub fn rebase(&self, new_base: &LatticeVector, seed: &Seed) -> Result<Self> {
        let delta = &self.base - new_base;
        let d = seed.degree(&delta).ok_or_else(|| Error::NotInMonoid(delta.to_string()))?;
        let mut out = Self::zero(new_base.clone(), self.order + d);
        for (p, c) in &self.terms {
            out.terms.insert(p + &delta, c.clone());
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        if self.base != other.base {
            return Err(Error::InvalidArgument(format!(
                "series bases differ: {} vs {}",
                self.base, other.base
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let k = self.order.min(other.order);
        let mut acc: BTreeMap<LatticeVector, C> = BTreeMap::new();
        for (p, a) in &self.terms {
            let dp = offset_degree(p);
            if dp > k {
                continue;
            }
            for (r, b) in &other.terms {
                if dp + offset_degree(r) > k {
                    continue;
                }
                let slot = acc.entry(p + r).or_insert_with(C::zero);
                add_product(slot, a, b);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TruncatedSeries { base: &self.base + &other.base, terms: acc, order: k }
    }

    /// Drops every offset of degree above `k`.
    pub fn truncate(&self, k: u32) -> Self {
        let k = k.min(self.order);
        TruncatedSeries {
            base: self.base.clone(),
            terms: self.terms.iter().filter(|(p, _)| offset_degree(p) <= k).map(|(p, c)| (p.clone(), c.clone())).collect(),
            order: k,
        }
    }

    /// Inverse of a series whose constant term is `+1` or `-1`.
    pub fn inverse(&self) -> Result<Self> {
        let u = self.constant_term();
        if !(u.is_one() || (-u.clone()).is_one()) {
            return Err(Error::NonUnit);
        }
        let rank = self.rank();
        let zero = LatticeVector::zero(rank);
        // self = z^m * u * (1 + h) with h in J
        let mut h = Self::zero(zero.clone(), self.order);
        for (p, c) in &self.terms {
            if !p.is_zero() {
                h.terms.insert(p.clone(), c.clone() * u.clone());
            }
        }
        let neg_h = h.neg();
        let mut sum = Self::one(rank, self.order);
        let mut pow = Self::one(rank, self.order);
        for _ in 0..self.order {
            pow = pow.mul_unchecked(&neg_h);
            if pow.is_empty() {
                break;
            }
            sum = sum.add(&pow)?;
        }
        let mut out = sum.scale(&u);
        out.base = -&self.base;
        Ok(out)
    }

    /// Exact truncated power; negative exponents go through [`Self::inverse`].
    pub fn pow(&self, exponent: i64) -> Result<Self> {
        if exponent < 0 {
            return self.inverse()?.pow(-exponent);
        }
        let mut result = Self::one(self.rank(), self.order);
        let mut sq = self.clone();
        let mut e = exponent as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        Ok(result)
    }

    /// Largest degree among stored offsets.
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(offset_degree).max().unwrap_or(0)
    }

    /// True when every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

impl<C: Coefficient> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (order {})", self.order);
        }
        for (i, (e, c)) in self.exponents().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*z^{e}")?;
        }
        write!(f, " (order {})", self.order)
    }
}

/// `1 + sum_j c_j z^(j * direction)` with `j * degree(direction) <= order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WallFunction<C> {
    direction: LatticeVector,
    coeffs: Vec<C>,
    order: u32,
}

impl<C: Coefficient> WallFunction<C> {
    /// `coeffs[j - 1]` is the coefficient of `z^(j * direction)`.
    pub fn new(seed: &Seed, direction: LatticeVector, coeffs: Vec<C>, order: u32) -> Result<Self> {
        let d = seed
            .degree(&direction)
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::InvalidWall(format!("direction {direction} is not in P \\ 0")))?;
        if direction.content() != 1 {
            return Err(Error::InvalidWall(format!("direction {direction} is not primitive")));
        }
        let max_j = (order / d) as usize;
        let mut coeffs = coeffs;
        coeffs.truncate(max_j);
        let mut w = WallFunction { direction, coeffs, order };
        w.trim();
        Ok(w)
    }

    /// `1 + z^direction`
    pub fn binomial(seed: &Seed, direction: LatticeVector, order: u32) -> Result<Self> {
        Self::new(seed, direction, vec![C::one()], order)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn direction(&self) -> &LatticeVector {
        &self.direction
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    fn direction_degree(&self) -> u32 {
        offset_degree(&self.direction)
    }

    /// Largest `j` with `j * degree(direction) <= order`.
    pub fn max_multiple(&self) -> usize {
        (self.order / self.direction_degree()) as usize
    }

    /// Coefficient of `z^(j * direction)`; `coeff(0) == 1`.
    pub fn coeff(&self, j: usize) -> C {
        if j == 0 {
            C::one()
        } else {
            self.coeffs.get(j - 1).cloned().unwrap_or_else(C::zero)
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `c` to the coefficient of `z^(j * direction)`.
    pub fn add_to_coeff(&mut self, j: usize, c: C) {
        assert!(j >= 1 && j <= self.max_multiple(), "multiple outside the truncation range");
        if self.coeffs.len() < j {
            self.coeffs.resize(j, C::zero());
        }
        let cur = std::mem::replace(&mut self.coeffs[j - 1], C::zero());
        self.coeffs[j - 1] = cur + c;
        self.trim();
    }

    pub fn truncate(&self, k: u32) -> Self {
        let mut w = self.clone();
        w.order = k.min(self.order);
        w.coeffs.truncate(w.max_multiple());
        w.trim();
        w
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.direction != other.direction {
            return Err(Error::InvalidWall("cannot multiply wall functions with different directions".into()));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        let n = self.max_multiple();
        let a = self.univariate();
        let b = other.univariate();
        let mut out = vec![C::zero(); n + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(n + 1 - i) {
                add_product(&mut out[i + j], x, y);
            }
        }
        let mut w = WallFunction { direction: self.direction.clone(), coeffs: out[1..].to_vec(), order: self.order };
        w.trim();
        Ok(w)
    }

    /// `[1, c_1, ..., c_J]`
    pub fn univariate(&self) -> Vec<C> {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(C::one());
        v.extend(self.coeffs.iter().cloned());
        v
    }

    /// Coefficients of `f^a` in powers of `z^direction`, up to the truncation bound.
    pub fn power(&self, a: i64) -> Vec<C> {
        poly_pow(&self.univariate(), a, self.max_multiple())
    }

    pub fn to_series(&self) -> TruncatedSeries<C> {
        let rank = self.direction.len();
        let mut s = TruncatedSeries::one(rank, self.order);
        for (j, c) in self.coeffs.iter().enumerate() {
            s.add_term(self.direction.scale(j as i64 + 1), c.clone());
        }
        s
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl<C: Coefficient> fmt::Display for WallFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1")?;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            write!(f, " + {c}*z^{}", self.direction.scale(j as i64 + 1))?;
        }
        Ok(())
    }
}

fn poly_mul<C: Coefficient>(a: &[C], b: &[C], n: usize) -> Vec<C> {
    let mut out = vec![C::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            add_product(&mut out[i + j], x, y);
        }
    }
    out
}

/// `f^a mod t^(n+1)` for a univariate polynomial with constant term 1.
pub(crate) fn poly_pow<C: Coefficient>(f: &[C], a: i64, n: usize) -> Vec<C> {
    debug_assert!(f.first().is_some_and(|c| c.is_one()));
    let base: Vec<C> = if a < 0 {
        // g = 1/f via g_j = -sum_{i=1..j} f_i g_{j-i}
        let mut g = vec![C::zero(); n + 1];
        g[0] = C::one();
        for j in 1..=n {
            let mut s = C::zero();
            for i in 1..=j.min(f.len() - 1) {
                add_product(&mut s, &f[i], &g[j - i]);
            }
            g[j] = -s;
        }
        g
    } else {
        let mut v = f.to_vec();
        v.resize(n + 1, C::zero());
        v.truncate(n + 1);
        v
    };
    let mut e = a.unsigned_abs();
    let mut result = vec![C::zero(); n + 1];
    result[0] = C::one();
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul(&result, &sq, n);
        }
        e >>= 1;
        if e > 0 {
            sq = poly_mul(&sq, &sq, n);
        }
    }
    result
}
