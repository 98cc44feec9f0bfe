//! Exact scattering diagrams, broken lines and theta functions for log Calabi-Yau mirrors,
//! with toric and cluster oracles.
//!
//! Everything is generic over the coefficient ring ([`scalar::Coefficient`]); the aliases
//! below fix it to arbitrary-precision integers.

pub mod broken_lines;
pub mod cluster;
pub mod cone;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod mirror;
pub mod scalar;
pub mod scattering;
pub mod series;
pub mod toric;

pub use error::{Error, Result};
pub use lattice::{CertifiedPoint, LatticeVector, RationalPoint, Seed, SkewForm};
pub use scalar::Coefficient;

use num_bigint::BigInt;

pub type Series = series::TruncatedSeries<BigInt>;
pub type WallFunction = series::WallFunction<BigInt>;
pub type Wall = scattering::Wall<BigInt>;
pub type Diagram = scattering::ScatteringDiagram<BigInt>;
pub type BrokenLine = broken_lines::BrokenLine<BigInt>;
pub type ThetaFunction = broken_lines::ThetaFunction<BigInt>;
pub type ThetaExpansion = mirror::ThetaExpansion<BigInt>;
pub type StructureConstantTable = mirror::StructureConstantTable<BigInt>;
pub type MirrorAlgebra<'d> = mirror::MirrorAlgebra<'d, BigInt>;
pub type LaurentPolynomial = cluster::LaurentPolynomial<BigInt>;
pub type MutationTrace = cluster::MutationTrace<BigInt>;
pub type ExchangeReport = cluster::ExchangeReport<BigInt>;
