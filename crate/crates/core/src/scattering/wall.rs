use std::cmp::Ordering;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, Seed};
use crate::scalar::Coefficient;
use crate::series::WallFunction;

/// Whether a wall came from the initial diagram or was added during completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Initial,
    Generated,
}

/// A codimension-one cone inside `{x : pair(n0, x) = 0}` carrying `1 + sum_j c_j z^(j n0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Wall<C> {
    support: Cone,
    function: WallFunction<C>,
    /// Dot-product coordinates of `pair(n0, .)`.
    normal: LatticeVector,
    provenance: Provenance,
}

impl<C: Coefficient> Wall<C> {
    pub fn new(seed: &Seed, support: Cone, function: WallFunction<C>, provenance: Provenance) -> Result<Self> {
        let n0 = function.direction();
        if support.rank() != seed.rank() {
            return Err(Error::DimensionMismatch { expected: seed.rank(), found: support.rank() });
        }
        let normal = seed.form().functional(n0);
        if normal.is_zero() {
            return Err(Error::InvalidWall(format!("pair({n0}, .) vanishes identically")));
        }
        if let Some(g) = support.generators().iter().find(|g| normal.dot(g) != 0) {
            return Err(Error::InvalidWall(format!("support generator {g} is not skew-perpendicular to {n0}")));
        }
        if support.dim() + 1 != seed.rank() {
            return Err(Error::InvalidWall(format!(
                "support has dimension {} in rank {}",
                support.dim(),
                seed.rank()
            )));
        }
        Ok(Wall { support, function, normal, provenance })
    }

    /// Builds a wall from support generators.
    pub fn from_generators(
        seed: &Seed,
        generators: &[LatticeVector],
        function: WallFunction<C>,
        provenance: Provenance,
    ) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != seed.rank()) {
            return Err(Error::DimensionMismatch { expected: seed.rank(), found: g.len() });
        }
        Self::new(seed, Cone::from_generators(seed.rank(), generators), function, provenance)
    }

    pub fn direction(&self) -> &LatticeVector {
        self.function.direction()
    }

    pub fn support(&self) -> &Cone {
        &self.support
    }

    pub fn function(&self) -> &WallFunction<C> {
        &self.function
    }

    /// Dot-product coordinates of the functional `pair(n0, .)`.
    pub fn normal(&self) -> &LatticeVector {
        &self.normal
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_initial(&self) -> bool {
        self.provenance == Provenance::Initial
    }

    /// A wall is incoming when its direction lies in its own support.
    pub fn is_incoming(&self) -> bool {
        self.support.contains_vector(self.direction())
    }

    pub fn truncate(&self, k: u32) -> Self {
        Wall { function: self.function.truncate(k), ..self.clone() }
    }
}

pub fn is_incoming<C: Coefficient>(w: &Wall<C>) -> bool {
    w.is_incoming()
}

/// Half-plane index for exact angular ordering of plane vectors.
fn half(v: &LatticeVector) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

/// Counterclockwise angle order on nonzero plane vectors, starting at the positive x-axis.
pub fn angle_cmp(a: &LatticeVector, b: &LatticeVector) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128;
        0.cmp(&cross)
    })
}

/// Plane vector used to order a rank-2 support: the ray itself, or the half of a line in `[0, pi)`.
fn plane_key(c: &Cone) -> LatticeVector {
    if let Some(r) = c.rays().first() {
        return r.clone();
    }
    let l = &c.lineality()[0];
    if half(l) == 0 {
        l.clone()
    } else {
        -l
    }
}

/// Canonical wall order: by support angle in rank 2 (lexicographic generators otherwise), then direction.
pub(crate) fn wall_cmp<C: Coefficient>(a: &Wall<C>, b: &Wall<C>) -> Ordering {
    let support = if a.support.rank() == 2 {
        angle_cmp(&plane_key(&a.support), &plane_key(&b.support))
            .then_with(|| a.support.rays().len().cmp(&b.support.rays().len()))
    } else {
        a.support.generators().cmp(&b.support.generators())
    };
    support.then_with(|| a.direction().cmp(b.direction()))
}
