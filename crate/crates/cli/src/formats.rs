//! TOML file formats. Every record converts to and from its in-memory value.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use mirror_core::cluster::ClusterSeed;
use mirror_core::cone::Cone;
use mirror_core::lattice::{parse_rational, LatticeVector, RationalPoint, Seed, SkewForm};
use mirror_core::mirror::StructureConstantTable;
use mirror_core::scattering::{Provenance, ScatteringDiagram, Wall};
use mirror_core::series::{TruncatedSeries, WallFunction};
use mirror_core::toric::Fan;
use mirror_core::{Error, LaurentPolynomial, MutationTrace, Result};

pub type Coeff = BigInt;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub fn parse_coeff(s: &str) -> Result<Coeff> {
    BigInt::from_str(s.trim()).map_err(|_| bad(format!("invalid integer coefficient {s:?}")))
}

fn parse_rat(s: &str) -> Result<BigRational> {
    parse_rational(s).ok_or_else(|| bad(format!("invalid rational {s:?}")))
}

pub fn point_strings(p: &RationalPoint) -> Vec<String> {
    p.coords().iter().map(|c| c.to_string()).collect()
}

pub fn point_from_strings(v: &[String]) -> Result<RationalPoint> {
    Ok(RationalPoint::new(v.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?))
}

/// Parses `a,b,...` as an integer vector.
pub fn parse_vector(s: &str) -> Result<LatticeVector> {
    let coords = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| bad(format!("invalid integer vector {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(LatticeVector::new(coords))
}

/// Parses TOML, reporting line and column on failure.
pub fn from_toml<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| {
        let at = e
            .span()
            .map(|s| {
                let before = &text[..s.start.min(text.len())];
                let line = before.matches('\n').count() + 1;
                let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
                format!("line {line}, column {col}: ")
            })
            .unwrap_or_default();
        bad(format!("parse error at {at}{}", e.message()))
    })
}

pub fn to_toml<T: Serialize>(value: &T) -> String {
    toml::to_string(value).expect("records serialize to TOML")
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SeedRecord {
    pub rank: usize,
    pub skew_matrix: Vec<Vec<i64>>,
    /// 1-based.
    pub unfrozen: Vec<usize>,
}

impl SeedRecord {
    pub fn from_seed(s: &Seed) -> Self {
        SeedRecord {
            rank: s.rank(),
            skew_matrix: s.form().matrix().to_vec(),
            unfrozen: s.unfrozen().iter().map(|i| i + 1).collect(),
        }
    }

    /// Rank-2 seeds only need `pair(e, .)` nonzero; higher ranks need it primitive.
    pub fn to_seed(&self) -> Result<Seed> {
        if self.skew_matrix.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: self.skew_matrix.len() });
        }
        if self.unfrozen.contains(&0) {
            return Err(Error::InvalidSeed("unfrozen indices are 1-based".into()));
        }
        let form = SkewForm::new(self.skew_matrix.clone())?;
        let s: Vec<usize> = self.unfrozen.iter().map(|i| i - 1).collect();
        if self.rank == 2 {
            Seed::new_relaxed(form, s)
        } else {
            Seed::new(form, s)
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct WallRecord {
    pub direction: Vec<i64>,
    pub support: Vec<Vec<i64>>,
    pub coefficients: Vec<String>,
    pub provenance: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DiagramRecord {
    pub order: u32,
    pub seed: SeedRecord,
    #[serde(default)]
    pub walls: Vec<WallRecord>,
}

impl DiagramRecord {
    pub fn from_diagram(d: &ScatteringDiagram<Coeff>) -> Self {
        DiagramRecord {
            order: d.order(),
            seed: SeedRecord::from_seed(d.seed()),
            walls: d
                .walls()
                .iter()
                .map(|w| WallRecord {
                    direction: w.direction().coords().to_vec(),
                    support: w.support().generators().iter().map(|g| g.coords().to_vec()).collect(),
                    coefficients: w.function().coeffs().iter().map(|c| c.to_string()).collect(),
                    provenance: match w.provenance() {
                        Provenance::Initial => "initial".into(),
                        Provenance::Generated => "generated".into(),
                    },
                })
                .collect(),
        }
    }

    pub fn to_diagram(&self) -> Result<ScatteringDiagram<Coeff>> {
        let seed = self.seed.to_seed()?;
        let walls = self
            .walls
            .iter()
            .map(|w| {
                let prov = match w.provenance.as_str() {
                    "initial" => Provenance::Initial,
                    "generated" => Provenance::Generated,
                    p => return Err(bad(format!("unknown provenance {p:?}"))),
                };
                let coeffs = w.coefficients.iter().map(|c| parse_coeff(c)).collect::<Result<Vec<_>>>()?;
                let f = WallFunction::new(&seed, LatticeVector::new(w.direction.clone()), coeffs, self.order)?;
                let gens: Vec<LatticeVector> = w.support.iter().map(|g| LatticeVector::new(g.clone())).collect();
                if let Some(g) = gens.iter().find(|g| g.len() != seed.rank()) {
                    return Err(Error::DimensionMismatch { expected: seed.rank(), found: g.len() });
                }
                Wall::new(&seed, Cone::from_generators(seed.rank(), &gens), f, prov)
            })
            .collect::<Result<Vec<_>>>()?;
        ScatteringDiagram::new(seed, self.order, walls)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub offset: Vec<i64>,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SeriesRecord {
    pub base: Vec<i64>,
    pub order: u32,
    pub terms: Vec<TermRecord>,
}

impl SeriesRecord {
    pub fn from_series(s: &TruncatedSeries<Coeff>) -> Self {
        SeriesRecord {
            base: s.base().coords().to_vec(),
            order: s.order(),
            terms: s.terms().map(|(p, c)| TermRecord { offset: p.coords().to_vec(), coeff: c.to_string() }).collect(),
        }
    }

    pub fn to_series(&self, seed: &Seed) -> Result<TruncatedSeries<Coeff>> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((LatticeVector::new(t.offset.clone()), parse_coeff(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        TruncatedSeries::from_terms(seed, LatticeVector::new(self.base.clone()), terms, self.order)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SegmentRecord {
    /// Empty for the unbounded first segment.
    pub start: Vec<String>,
    pub exponent: Vec<i64>,
    pub coefficient: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LineRecord {
    pub segments: Vec<SegmentRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ThetaRecord {
    pub m: Vec<i64>,
    pub basepoint: Vec<String>,
    pub order: u32,
    pub seed: SeedRecord,
    pub series: SeriesRecord,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<LineRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EntryRecord {
    pub q: Vec<i64>,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RowRecord {
    pub inputs: Vec<Vec<i64>>,
    pub entries: Vec<EntryRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TableRecord {
    pub order: u32,
    pub basepoint: Vec<String>,
    pub seed: SeedRecord,
    pub rows: Vec<RowRecord>,
}

impl RowRecord {
    pub fn from_table(t: &StructureConstantTable<Coeff>) -> Self {
        RowRecord {
            inputs: t.inputs.iter().map(|p| p.coords().to_vec()).collect(),
            entries: t.entries.iter().map(|(q, c)| EntryRecord { q: q.coords().to_vec(), coeff: c.to_string() }).collect(),
        }
    }
}

impl TableRecord {
    pub fn to_tables(&self) -> Result<Vec<StructureConstantTable<Coeff>>> {
        let seed = self.seed.to_seed()?;
        let bp = point_from_strings(&self.basepoint)?;
        self.rows
            .iter()
            .map(|r| {
                let entries = r
                    .entries
                    .iter()
                    .map(|e| Ok((LatticeVector::new(e.q.clone()), parse_coeff(&e.coeff)?)))
                    .collect::<Result<_>>()?;
                Ok(StructureConstantTable {
                    inputs: r.inputs.iter().map(|p| LatticeVector::new(p.clone())).collect(),
                    entries,
                    order: self.order,
                    basepoint: mirror_core::CertifiedPoint { point: bp.clone(), constraint: None, avoided: Vec::new() },
                })
            })
            .collect::<Result<Vec<_>>>()
            .and_then(|t| {
                if bp.len() != seed.rank() {
                    return Err(Error::DimensionMismatch { expected: seed.rank(), found: bp.len() });
                }
                Ok(t)
            })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FanRecord {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    /// 1-based ray indices.
    pub cones: Vec<Vec<usize>>,
}

impl FanRecord {
    pub fn from_fan(f: &Fan) -> Self {
        FanRecord {
            rank: 2,
            rays: f.rays().iter().map(|r| r.coords().to_vec()).collect(),
            cones: f.cones().iter().map(|&(a, b)| vec![a + 1, b + 1]).collect(),
        }
    }

    pub fn to_fan(&self) -> Result<Fan> {
        if self.rank != 2 {
            return Err(Error::InvalidFan(format!("only rank-2 fans are supported, got rank {}", self.rank)));
        }
        if self.cones.iter().flatten().any(|&i| i == 0 || i > self.rays.len()) {
            return Err(Error::InvalidFan("cone indices are 1-based ray indices".into()));
        }
        let cones: Vec<Vec<usize>> = self.cones.iter().map(|c| c.iter().map(|i| i - 1).collect()).collect();
        Fan::new(self.rays.iter().map(|r| LatticeVector::new(r.clone())).collect(), &cones)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LaurentTermRecord {
    pub exponent: Vec<i64>,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LaurentRecord {
    pub text: String,
    pub terms: Vec<LaurentTermRecord>,
}

impl LaurentRecord {
    pub fn from_poly(p: &LaurentPolynomial, labels: &[String]) -> Self {
        LaurentRecord {
            text: p.render(labels),
            terms: p.terms().map(|(e, c)| LaurentTermRecord { exponent: e.clone(), coeff: c.to_string() }).collect(),
        }
    }

    pub fn to_poly(&self, rank: usize) -> Result<LaurentPolynomial> {
        let terms = self.terms.iter().map(|t| Ok((t.exponent.clone(), parse_coeff(&t.coeff)?))).collect::<Result<Vec<_>>>()?;
        LaurentPolynomial::from_terms(rank, terms)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ClusterSeedRecord {
    pub matrix: Vec<Vec<i64>>,
    pub frozen: Vec<bool>,
    pub labels: Vec<String>,
}

impl ClusterSeedRecord {
    pub fn from_seed(s: &ClusterSeed) -> Self {
        ClusterSeedRecord { matrix: s.matrix().to_vec(), frozen: s.frozen().to_vec(), labels: s.labels().to_vec() }
    }

    pub fn to_seed(&self) -> Result<ClusterSeed> {
        ClusterSeed::new(self.matrix.clone(), self.frozen.clone(), self.labels.clone())
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct StepRecord {
    /// 1-based mutated index; 0 for the initial cluster.
    pub index: usize,
    pub seed: ClusterSeedRecord,
    pub variables: Vec<LaurentRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TraceRecord {
    /// 1-based.
    pub sequence: Vec<usize>,
    pub steps: Vec<StepRecord>,
}

impl TraceRecord {
    pub fn from_trace(t: &MutationTrace) -> Self {
        let labels = t.seeds[0].labels().to_vec();
        let steps = t
            .seeds
            .iter()
            .zip(&t.clusters)
            .enumerate()
            .map(|(i, (s, c))| StepRecord {
                index: if i == 0 { 0 } else { t.sequence[i - 1] + 1 },
                seed: ClusterSeedRecord::from_seed(s),
                variables: c.iter().map(|x| LaurentRecord::from_poly(x, &labels)).collect(),
            })
            .collect();
        TraceRecord { sequence: t.sequence.iter().map(|i| i + 1).collect(), steps }
    }

    /// Seeds and clusters along the trace.
    pub fn to_steps(&self) -> Result<(Vec<ClusterSeed>, Vec<Vec<LaurentPolynomial>>)> {
        let mut seeds = Vec::new();
        let mut clusters = Vec::new();
        for s in &self.steps {
            let seed = s.seed.to_seed()?;
            let r = seed.rank();
            clusters.push(s.variables.iter().map(|v| v.to_poly(r)).collect::<Result<Vec<_>>>()?);
            seeds.push(seed);
        }
        Ok((seeds, clusters))
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ClassRecord {
    pub intersections: Vec<i64>,
    /// Coordinates in `kernel_basis`.
    pub coordinates: Vec<String>,
    pub kernel_basis: Vec<Vec<i64>>,
}

impl ClassRecord {
    pub fn new(fan: &Fan, gamma: &mirror_core::toric::CurveClass) -> Self {
        ClassRecord {
            intersections: gamma.0.clone(),
            coordinates: fan.decompose(gamma).iter().map(|c| c.to_string()).collect(),
            kernel_basis: fan.kernel_basis().into_iter().map(|b| b.0).collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ToricRecord {
    pub fan: FanRecord,
    pub query: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub q: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<ClassRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weight: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kinks: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nef: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sr_table: Vec<SrRow>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SrRow {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    /// Empty when the product degenerates to zero.
    pub product: Vec<i64>,
    pub agrees: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use mirror_core::scattering::complete;

    #[test]
    fn diagram_round_trip() {
        let d = complete::<Coeff>(&Seed::kronecker(2), 4).unwrap();
        let text = to_toml(&DiagramRecord::from_diagram(&d));
        let back: DiagramRecord = from_toml(&text).unwrap();
        assert_eq!(back.to_diagram().unwrap(), d);
        assert_eq!(to_toml(&back), text);
    }

    #[test]
    fn parse_error_has_position() {
        let e = from_toml::<SeedRecord>("rank = 2\nskew_matrix = [[0, 1], [-1, 0]\nunfrozen = [1]\n").unwrap_err();
        assert!(e.to_string().contains("line"), "{e}");
    }

    #[test]
    fn seed_indices_are_one_based() {
        let r = SeedRecord { rank: 2, skew_matrix: vec![vec![0, 1], vec![-1, 0]], unfrozen: vec![1, 2] };
        assert_eq!(r.to_seed().unwrap(), Seed::a2());
        let z = SeedRecord { unfrozen: vec![0], ..r };
        assert!(z.to_seed().is_err());
    }
}
