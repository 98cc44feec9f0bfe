//! Skew-symmetric cluster mutation used as an independent oracle.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, RationalPoint, Seed};
use crate::mirror::{generic_basepoints, MirrorAlgebra};
use crate::scalar::Coefficient;
use crate::scattering::ScatteringDiagram;
use crate::series::offset_degree;

/// Exchange matrix with frozen flags and variable labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClusterSeed {
    b: Vec<Vec<i64>>,
    frozen: Vec<bool>,
    labels: Vec<String>,
}

impl ClusterSeed {
    pub fn new(b: Vec<Vec<i64>>, frozen: Vec<bool>, labels: Vec<String>) -> Result<Self> {
        let r = b.len();
        if let Some(row) = b.iter().find(|row| row.len() != r) {
            return Err(Error::DimensionMismatch { expected: r, found: row.len() });
        }
        for i in 0..r {
            for j in 0..r {
                if b[i][j] != -b[j][i] {
                    return Err(Error::InvalidSeed(format!("exchange matrix is not antisymmetric at ({i}, {j})")));
                }
            }
        }
        if frozen.len() != r {
            return Err(Error::DimensionMismatch { expected: r, found: frozen.len() });
        }
        if labels.len() != r {
            return Err(Error::DimensionMismatch { expected: r, found: labels.len() });
        }
        Ok(ClusterSeed { b, frozen, labels })
    }

    /// Exchange matrix `pair(e_i, e_j)`; indices outside `S` are frozen.
    pub fn from_seed(seed: &Seed) -> Self {
        let r = seed.rank();
        ClusterSeed {
            b: seed.form().matrix().to_vec(),
            frozen: (0..r).map(|i| !seed.is_unfrozen(i)).collect(),
            labels: (1..=r).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.b.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn frozen(&self) -> &[bool] {
        &self.frozen
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unfrozen(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| !self.frozen[i]).collect()
    }

    fn check_mutable(&self, k: usize) -> Result<()> {
        if k >= self.rank() {
            return Err(Error::InvalidArgument(format!("index {k} out of range")));
        }
        if self.frozen[k] {
            return Err(Error::FrozenIndex(k));
        }
        Ok(())
    }
}

/// Matrix mutation in direction `k`.
pub fn mutate_matrix(s: &ClusterSeed, k: usize) -> Result<ClusterSeed> {
    s.check_mutable(k)?;
    let r = s.rank();
    let b = &s.b;
    let nb = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == k || j == k {
                        -b[i][j]
                    } else {
                        b[i][j] + b[i][k].signum() * (b[i][k] * b[k][j]).max(0)
                    }
                })
                .collect()
        })
        .collect();
    Ok(ClusterSeed { b: nb, ..s.clone() })
}

/// Finite Laurent polynomial with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial<C> {
    rank: usize,
    terms: BTreeMap<Vec<i64>, C>,
}

impl<C: Coefficient> LaurentPolynomial<C> {
    pub fn zero(rank: usize) -> Self {
        LaurentPolynomial { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], C::one())
    }

    pub fn monomial(exponent: Vec<i64>, c: C) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c);
        p
    }

    pub fn variable(rank: usize, i: usize) -> Self {
        let mut e = vec![0; rank];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Vec<i64>, C)>) -> Result<Self> {
        let mut p = Self::zero(rank);
        for (e, c) in terms {
            if e.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[i64]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, e: Vec<i64>, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rank);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(add_exp(a, b), x.clone() * y.clone());
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.rank), |acc, _| acc.mul(self))
    }

    /// Exact quotient by lexicographic long division.
    pub fn div_exact(&self, den: &Self) -> Result<Self> {
        let (dl, dc) = den.terms.iter().next_back().ok_or(Error::InexactDivision)?;
        let (ds, _) = den.terms.iter().next().expect("nonempty");
        let mut rest = self.clone();
        let mut quot = Self::zero(self.rank);
        let floor = match self.terms.keys().next() {
            Some(ns) => sub_exp(ns, ds),
            None => return Ok(quot),
        };
        while let Some((nl, nc)) = rest.terms.iter().next_back() {
            let e = sub_exp(nl, dl);
            if e < floor {
                return Err(Error::InexactDivision);
            }
            let c = nc.exact_div(dc).ok_or(Error::InexactDivision)?;
            let t = Self::monomial(e, c);
            rest = rest.sub(&t.mul(den));
            quot = quot.add(&t);
        }
        Ok(quot)
    }

    pub fn is_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Whether some variable appears with a negative exponent.
    pub fn has_denominator_in(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] < 0)
    }

    /// The exponent `g` with every other exponent in `g + P`, if there is one.
    pub fn minimal_exponent(&self, seed: &Seed) -> Option<LatticeVector> {
        let exps: Vec<LatticeVector> = self.terms.keys().map(|e| LatticeVector::new(e.clone())).collect();
        exps.iter().find(|g| exps.iter().all(|e| seed.in_monoid(&(e - *g)))).cloned()
    }

    /// Display with the given variable names.
    pub fn render(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .zip(labels)
                .filter(|(x, _)| **x != 0)
                .map(|(x, l)| if *x == 1 { l.clone() } else { format!("{l}^{x}") })
                .collect();
            let s = match (mono.is_empty(), c.is_one()) {
                (true, _) => c.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{c}*{}", mono.join("*")),
            };
            parts.push(s);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl<C: Coefficient> fmt::Display for LaurentPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (1..=self.rank).map(|i| format!("x{i}")).collect();
        f.write_str(&self.render(&labels))
    }
}

fn add_exp(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_exp(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Initial cluster `(x_1, ..., x_r)`.
pub fn initial_variables<C: Coefficient>(rank: usize) -> Vec<LaurentPolynomial<C>> {
    (0..rank).map(|i| LaurentPolynomial::variable(rank, i)).collect()
}

/// Exchange monomials `prod_{b_ik > 0} x_i^b_ik` and `prod_{b_ik < 0} x_i^-b_ik`.
fn exchange_monomials<C: Coefficient>(
    s: &ClusterSeed,
    vars: &[LaurentPolynomial<C>],
    k: usize,
) -> (LaurentPolynomial<C>, LaurentPolynomial<C>) {
    let r = s.rank();
    let mut plus = LaurentPolynomial::one(vars[0].rank());
    let mut minus = LaurentPolynomial::one(vars[0].rank());
    for i in 0..r {
        let b = s.b[i][k];
        if b > 0 {
            plus = plus.mul(&vars[i].pow(b as u32));
        } else if b < 0 {
            minus = minus.mul(&vars[i].pow((-b) as u32));
        }
    }
    (plus, minus)
}

/// Replaces `x_k` by `(M+ + M-) / x_k`.
pub fn mutate_variable<C: Coefficient>(
    s: &ClusterSeed,
    vars: &[LaurentPolynomial<C>],
    k: usize,
) -> Result<Vec<LaurentPolynomial<C>>> {
    s.check_mutable(k)?;
    if vars.len() != s.rank() {
        return Err(Error::DimensionMismatch { expected: s.rank(), found: vars.len() });
    }
    let (plus, minus) = exchange_monomials(s, vars, k);
    let mut out = vars.to_vec();
    out[k] = plus.add(&minus).div_exact(&vars[k])?;
    Ok(out)
}

/// One mutation step: `old * new = plus + minus` in the cluster before the step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeRelation<C> {
    pub index: usize,
    pub old: LaurentPolynomial<C>,
    pub new: LaurentPolynomial<C>,
    /// Exponents of the two exchange monomials in the current cluster.
    pub plus: Vec<i64>,
    pub minus: Vec<i64>,
    /// The current cluster (before the step).
    pub cluster: Vec<LaurentPolynomial<C>>,
}

/// Seeds, clusters and exchange relations along a mutation sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationTrace<C> {
    pub sequence: Vec<usize>,
    pub seeds: Vec<ClusterSeed>,
    pub clusters: Vec<Vec<LaurentPolynomial<C>>>,
    pub relations: Vec<ExchangeRelation<C>>,
}

impl<C: Coefficient> MutationTrace<C> {
    /// Distinct cluster variables in order of first appearance.
    pub fn distinct_variables(&self) -> Vec<LaurentPolynomial<C>> {
        let mut out: Vec<LaurentPolynomial<C>> = Vec::new();
        for c in &self.clusters {
            for x in c {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
        }
        out
    }
}

/// Runs a mutation sequence from the initial cluster.
pub fn mutation_sequence<C: Coefficient>(s: &ClusterSeed, sequence: &[usize]) -> Result<MutationTrace<C>> {
    let mut seeds = vec![s.clone()];
    let mut clusters = vec![initial_variables::<C>(s.rank())];
    let mut relations = Vec::new();
    for &k in sequence {
        let seed = seeds.last().expect("nonempty");
        let vars = clusters.last().expect("nonempty");
        let next = mutate_variable(seed, vars, k)?;
        let plus = (0..s.rank()).map(|i| seed.b[i][k].max(0)).collect();
        let minus = (0..s.rank()).map(|i| (-seed.b[i][k]).max(0)).collect();
        relations.push(ExchangeRelation {
            index: k,
            old: vars[k].clone(),
            new: next[k].clone(),
            plus,
            minus,
            cluster: vars.clone(),
        });
        seeds.push(mutate_matrix(seed, k)?);
        clusters.push(next);
    }
    Ok(MutationTrace { sequence: sequence.to_vec(), seeds, clusters, relations })
}

/// Alternates between the first two unfrozen indices; empty when nothing is mutable.
pub fn alternating_sequence(s: &ClusterSeed, len: usize) -> Vec<usize> {
    let u = s.unfrozen();
    match u.len() {
        0 => Vec::new(),
        1 => vec![u[0]],
        _ => (0..len).map(|i| u[i % 2]).collect(),
    }
}

/// Structure-constant table at one chamber representative, or the failure message.
pub type Observed<C> = std::result::Result<BTreeMap<LatticeVector, C>, String>;

/// Outcome for one exchange relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck<C> {
    pub step: usize,
    pub index: usize,
    pub relation: String,
    /// Theta exponents matched to the exchanged variables.
    pub inputs: Option<(LatticeVector, LatticeVector)>,
    pub expected: BTreeMap<LatticeVector, C>,
    /// Observed table (or failure message) per chamber representative.
    pub observed: Vec<(RationalPoint, Observed<C>)>,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeReport<C> {
    pub relations: Vec<RelationCheck<C>>,
}

impl<C: Coefficient> ExchangeReport<C> {
    pub fn all_matched(&self) -> bool {
        self.relations.iter().all(|r| r.matched)
    }

    pub fn mismatches(&self) -> usize {
        self.relations.iter().filter(|r| !r.matched).count()
    }
}

fn exponent_sum(ms: &[(LatticeVector, i64)], rank: usize) -> LatticeVector {
    ms.iter().fold(LatticeVector::zero(rank), |a, (g, e)| &a + &g.scale(*e))
}

/// Compares the exchange relations along the default alternating sequence (length 5).
pub fn compare_exchange<C: Coefficient>(d: &ScatteringDiagram<C>, s: &ClusterSeed, k: u32) -> ExchangeReport<C> {
    compare_exchange_along(d, s, &alternating_sequence(s, 5), k)
}

/// Checks every exchange relation of `sequence` against structure constants in every chamber.
///
/// Cluster variables are matched to theta functions by their minimal exponent and by
/// agreement with the theta function in the chamber where all unfrozen coordinates are
/// positive. The relation `x x' = M+ + M-` then predicts the table `{g(M+): 1, g(M-): 1}`.
pub fn compare_exchange_along<C: Coefficient>(
    d: &ScatteringDiagram<C>,
    s: &ClusterSeed,
    sequence: &[usize],
    k: u32,
) -> ExchangeReport<C> {
    let mut relations = Vec::new();
    let trace = match mutation_sequence::<C>(s, sequence) {
        Ok(t) => t,
        Err(_) => return ExchangeReport { relations },
    };
    let seed = d.seed();
    let r = seed.rank();
    let positive = RationalPoint::new(
        (0..r)
            .map(|i| {
                let v = if seed.is_unfrozen(i) { 11 + 2 * i as i64 } else { 0 };
                num_rational::BigRational::new(v.into(), 13.into())
            })
            .collect(),
    );
    let reps = crate::broken_lines::chamber_representatives(d).unwrap_or_default();
    for (step, rel) in trace.relations.iter().enumerate() {
        let cluster_g: Vec<Option<LatticeVector>> = rel.cluster.iter().map(|x| x.minimal_exponent(seed)).collect();
        let new_g = rel.new.minimal_exponent(seed);
        let labels: Vec<String> = s.labels().to_vec();
        let text = format!(
            "({}) * ({}) = {} + {}",
            rel.old.render(&labels),
            rel.new.render(&labels),
            monomial_text(&rel.plus, &rel.cluster, &labels),
            monomial_text(&rel.minus, &rel.cluster, &labels)
        );
        let mut check = RelationCheck {
            step,
            index: rel.index,
            relation: text,
            inputs: None,
            expected: BTreeMap::new(),
            observed: Vec::new(),
            matched: false,
        };
        let (Some(g_old), Some(g_new)) = (cluster_g[rel.index].clone(), new_g) else {
            relations.push(check);
            continue;
        };
        if cluster_g.iter().any(|g| g.is_none()) {
            relations.push(check);
            continue;
        }
        let gs: Vec<LatticeVector> = cluster_g.into_iter().map(|g| g.expect("checked")).collect();
        let plus: Vec<(LatticeVector, i64)> = gs.iter().cloned().zip(rel.plus.iter().copied()).collect();
        let minus: Vec<(LatticeVector, i64)> = gs.iter().cloned().zip(rel.minus.iter().copied()).collect();
        let input_sum = &g_old + &g_new;
        let mut expected: BTreeMap<LatticeVector, C> = BTreeMap::new();
        for m in [exponent_sum(&plus, r), exponent_sum(&minus, r)] {
            let within = seed.degree(&(&m - &input_sum)).is_some_and(|dg| dg <= k);
            if within {
                let e = expected.entry(m).or_insert_with(C::zero);
                *e = e.clone() + C::one();
            }
        }
        check.inputs = Some((g_old.clone(), g_new.clone()));
        check.expected = expected;
        let radius = g_old.coords().iter().chain(g_new.coords()).map(|x| x.abs()).max().unwrap_or(0) * 2 + k as i64 + 2;
        let mut ok = variables_match_thetas(d, &[&rel.old, &rel.new], &positive, radius, k);
        for rep in &reps {
            let table = (|| -> Result<BTreeMap<LatticeVector, C>> {
                let bp = generic_basepoints(d, rep, 1, radius)?.remove(0);
                let alg = MirrorAlgebra::new(d, bp, k)?;
                Ok(alg.structure_constants(&[g_old.clone(), g_new.clone()], k)?.entries)
            })()
            .map_err(|e| e.to_string());
            ok &= table.as_ref().is_ok_and(|t| *t == check.expected);
            check.observed.push((rep.clone(), table));
        }
        check.matched = ok && !reps.is_empty();
        relations.push(check);
    }
    ExchangeReport { relations }
}

fn monomial_text<C: Coefficient>(exps: &[i64], cluster: &[LaurentPolynomial<C>], labels: &[String]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(cluster)
        .filter(|(e, _)| **e != 0)
        .map(|(e, x)| {
            let base = format!("({})", x.render(labels));
            if *e == 1 {
                base
            } else {
                format!("{base}^{e}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Each variable, read as a series in `z^(e_i) = x_i`, equals its theta function at `near`.
fn variables_match_thetas<C: Coefficient>(
    d: &ScatteringDiagram<C>,
    vars: &[&LaurentPolynomial<C>],
    near: &RationalPoint,
    radius: i64,
    k: u32,
) -> bool {
    let Ok(mut bps) = generic_basepoints(d, near, 1, radius) else {
        return false;
    };
    let Ok(alg) = MirrorAlgebra::new(d, bps.remove(0), k) else {
        return false;
    };
    vars.iter().all(|x| {
        let Some(g) = x.minimal_exponent(d.seed()) else {
            return false;
        };
        let Ok(th) = alg.theta(&g, k) else {
            return false;
        };
        let expected: BTreeMap<LatticeVector, C> = x
            .terms()
            .map(|(e, c)| (LatticeVector::new(e.clone()), c.clone()))
            .filter(|(e, _)| offset_degree(&(e - &g)) <= k)
            .collect();
        let got: BTreeMap<LatticeVector, C> = th.exponents().map(|(e, c)| (e, c.clone())).collect();
        got == expected
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SkewForm;
    use crate::scattering::complete;

    type L = LaurentPolynomial<i64>;

    fn lp(terms: &[(&[i64], i64)]) -> L {
        L::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    fn a2() -> ClusterSeed {
        ClusterSeed::from_seed(&Seed::a2())
    }

    #[test]
    fn matrix_mutation() {
        let s = a2();
        assert_eq!(s.matrix(), &[vec![0, 1], vec![-1, 0]]);
        let m = mutate_matrix(&s, 0).unwrap();
        assert_eq!(m.matrix(), &[vec![0, -1], vec![1, 0]]);
        assert_eq!(mutate_matrix(&m, 0).unwrap(), s);
        let markov = ClusterSeed::new(
            vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]],
            vec![false; 3],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        let m = mutate_matrix(&markov, 0).unwrap();
        assert_eq!(m.matrix(), &[vec![0, -2, 2], vec![2, 0, -2], vec![-2, 2, 0]]);
        let frozen = ClusterSeed::new(vec![vec![0, 1], vec![-1, 0]], vec![false, true], vec!["a".into(), "b".into()]);
        assert!(matches!(mutate_matrix(&frozen.unwrap(), 1), Err(Error::FrozenIndex(1))));
    }

    #[test]
    fn a2_one_step() {
        let vars = mutate_variable(&a2(), &initial_variables::<i64>(2), 0).unwrap();
        assert_eq!(vars[0], lp(&[(&[-1, 0], 1), (&[-1, 1], 1)]));
        assert_eq!(vars[1], lp(&[(&[0, 1], 1)]));
    }

    #[test]
    fn a2_pentagon() {
        let t = mutation_sequence::<i64>(&a2(), &[0, 1, 0, 1, 0]).unwrap();
        let last = t.clusters.last().unwrap();
        assert_eq!(last[0], L::variable(2, 1));
        assert_eq!(last[1], L::variable(2, 0));
        let vars = t.distinct_variables();
        assert_eq!(vars.len(), 5);
        for expected in [
            lp(&[(&[1, 0], 1)]),
            lp(&[(&[0, 1], 1)]),
            lp(&[(&[-1, 0], 1), (&[-1, 1], 1)]),
            lp(&[(&[-1, -1], 1), (&[0, -1], 1), (&[-1, 0], 1)]),
            lp(&[(&[0, -1], 1), (&[1, -1], 1)]),
        ] {
            assert!(vars.contains(&expected), "{expected}");
        }
    }

    #[test]
    fn inexact_division_detected() {
        let n = lp(&[(&[0, 0], 1), (&[0, 1], 1)]);
        let d = lp(&[(&[1, 0], 1), (&[0, 0], 1)]);
        assert_eq!(n.div_exact(&d), Err(Error::InexactDivision));
        let prod = n.mul(&d);
        assert_eq!(prod.div_exact(&d).unwrap(), n);
    }

    #[test]
    fn exchange_matches_thetas() {
        let d = complete::<i64>(&Seed::a2(), 4).unwrap();
        let report = compare_exchange(&d, &a2(), 4);
        assert_eq!(report.relations.len(), 5);
        assert!(report.all_matched(), "{report:#?}");
    }

    #[test]
    fn empty_s_gives_empty_report() {
        let seed = Seed::new(SkewForm::rank2(1), vec![]).unwrap();
        let d = complete::<i64>(&seed, 3).unwrap();
        assert!(compare_exchange(&d, &ClusterSeed::from_seed(&seed), 3).relations.is_empty());
    }

    #[test]
    fn removed_wall_is_reported() {
        let d = complete::<i64>(&Seed::a2(), 4).unwrap();
        let g = d.walls().iter().position(|w| !w.is_initial()).unwrap();
        let report = compare_exchange(&d.without_wall(g), &a2(), 4);
        assert_eq!(report.relations.len(), 5);
        assert!(report.mismatches() > 0);
    }
}
