//! Nef-partitions and their duals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{internal, Error, Result};
use crate::lattice::IntVec;
use crate::polytope::{Facet, Polytope};

/// A validated nef-partition: parts share a lattice, contain the origin, and
/// their Minkowski sum is a full-dimensional reflexive polytope.
#[derive(Clone, Debug)]
pub struct NefPartition {
    parts: Vec<Polytope>,
    sum: Polytope,
}

/// The dual nef-partition `nabla_1, ..., nabla_s`.
#[derive(Clone, Debug)]
pub struct DualNefPartition {
    pub parts: Vec<Polytope>,
}

impl NefPartition {
    pub fn parts(&self) -> &[Polytope] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> &Polytope {
        &self.sum
    }

    pub fn dim(&self) -> usize {
        self.sum.ambient_dim()
    }

    /// `Conv(union of parts)`.
    pub fn hull(&self) -> Result<Polytope> {
        Polytope::convex_union(&self.parts)
    }
}

pub fn validate_nef_partition(parts: Vec<Polytope>) -> Result<NefPartition> {
    let first = parts.first().ok_or(Error::Empty)?;
    let n = first.ambient_dim();
    if parts.iter().any(|p| p.ambient_dim() != n) {
        return Err(Error::LatticeMismatch);
    }
    for (i, p) in parts.iter().enumerate() {
        if !p.is_lattice_polytope() {
            return Err(Error::Input(format!("part {} has a non-integral vertex", i + 1)));
        }
        if p.vertices().len() == 1 && p.vertices()[0].num.iter().all(Zero::is_zero) {
            return Err(Error::DegeneratePart { part: i + 1 });
        }
        if !p.contains_origin() {
            return Err(Error::OriginMissing { part: i + 1 });
        }
    }
    let sum = Polytope::minkowski_sum_all(&parts)?;
    if !sum.is_full_dimensional() {
        return Err(Error::SumNotFullDimensional { dim: sum.dim(), ambient: n });
    }
    if !sum.is_reflexive() {
        return Err(Error::SumNotReflexive);
    }
    Ok(NefPartition { parts, sum })
}

/// `m_i = -min_{x in Delta_i} <x, w>` for each part.
pub fn pairing_minima(np: &NefPartition, w: &[BigInt]) -> Vec<BigInt> {
    np.parts
        .iter()
        .map(|p| {
            let m: BigRational = p.min_pairing(w);
            -m.to_integer()
        })
        .collect()
}

/// `nabla_j = {y : <x, y> >= -delta_ij for all vertices x of Delta_i, all i}`.
pub fn dual_nef_partition(np: &NefPartition) -> Result<DualNefPartition> {
    let n = np.dim();
    let s = np.len();
    let mut parts = Vec::with_capacity(s);
    for j in 0..s {
        let mut facets = Vec::new();
        for (i, p) in np.parts.iter().enumerate() {
            let off = if i == j { BigInt::one() } else { BigInt::zero() };
            for v in p.vertices() {
                facets.push(Facet { normal: v.num.clone(), offset: off.clone() });
            }
        }
        parts.push(Polytope::from_hrep(n, &facets, &[])?);
    }
    let dual = DualNefPartition { parts };
    check_duality(np, &dual)?;
    Ok(dual)
}

/// Checks both defining relations between a nef-partition and its dual.
pub fn check_duality(np: &NefPartition, dual: &DualNefPartition) -> Result<()> {
    let hull = Polytope::convex_union(&dual.parts)?;
    let expected = np.sum.dual()?;
    if hull != expected {
        return Err(internal("Conv(union nabla_j) differs from the dual of the Minkowski sum"));
    }
    for (j, nab) in dual.parts.iter().enumerate() {
        for (i, delta) in np.parts.iter().enumerate() {
            let bound = if i == j { -BigRational::one() } else { BigRational::zero() };
            for w in nab.vertices() {
                let wi = w.num.clone();
                let den = BigRational::from_integer(w.den.clone());
                let m = delta.min_pairing(&wi) / &den;
                if m < bound {
                    return Err(internal(format!("min <Delta_{}, nabla_{}> below bound", i + 1, j + 1)));
                }
                if !w.num.iter().all(Zero::is_zero) && m != bound {
                    return Err(internal(format!("minimum not attained at a vertex of nabla_{}", j + 1)));
                }
            }
        }
    }
    Ok(())
}

impl DualNefPartition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Lattice points of every part.
    pub fn lattice_points(&self) -> Result<Vec<Vec<IntVec>>> {
        self.parts.iter().map(|p| p.lattice_points()).collect()
    }

    /// Interprets the dual parts as a nef-partition in the dual lattice.
    pub fn as_nef_partition(&self) -> Result<NefPartition> {
        validate_nef_partition(self.parts.clone())
    }
}
