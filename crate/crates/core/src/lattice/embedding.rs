use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::matrix::{IntMatrix, IntVec};
use super::ops::{kernel_basis, saturate, SublatticeCoords};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Presentation {
    Full,
    Kernel { equations: IntMatrix },
    Quotient { relations: IntMatrix },
}

/// A finite-rank lattice presented inside `Z^ambient_rank`.
///
/// * full: the ambient lattice itself;
/// * kernel: integer solutions of `equations * x = 0`;
/// * quotient: `Z^n` modulo the saturation of the relation rows.
///
/// Downstream code works in basis coordinates. For kernel lattices the basis
/// rows are sublattice vectors; for quotients they are lifts of the coordinate
/// unit vectors, and coordinates of an ambient vector `y` are `coord_map * y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeEmbedding {
    ambient_rank: usize,
    presentation: Presentation,
    basis: IntMatrix,
    coord_map: Option<IntMatrix>,
}

impl LatticeEmbedding {
    pub fn full(n: usize) -> Self {
        LatticeEmbedding {
            ambient_rank: n,
            presentation: Presentation::Full,
            basis: IntMatrix::identity(n),
            coord_map: None,
        }
    }

    pub fn kernel(equations: IntMatrix) -> Self {
        let basis = kernel_basis(&equations);
        LatticeEmbedding {
            ambient_rank: equations.ncols(),
            presentation: Presentation::Kernel { equations },
            basis,
            coord_map: None,
        }
    }

    pub fn quotient(relations: IntMatrix) -> Result<Self> {
        let n = relations.ncols();
        // Functionals vanishing on the relations give coordinates on the
        // torsion-free quotient; their right inverse gives lifts.
        let coord_map = kernel_basis(&relations);
        let k = coord_map.nrows();
        let mut lifts = Vec::with_capacity(k);
        for i in 0..k {
            let mut target = vec![BigInt::zero(); k];
            target[i] = BigInt::from(1);
            let x = super::ops::solve_linear_integer(&coord_map, &target)
                .ok_or_else(|| crate::error::internal("quotient coordinates are not surjective"))?;
            lifts.push(x);
        }
        Ok(LatticeEmbedding {
            ambient_rank: n,
            presentation: Presentation::Quotient { relations },
            basis: IntMatrix::from_rows(&lifts, n),
            coord_map: Some(coord_map),
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn is_quotient(&self) -> bool {
        self.coord_map.is_some()
    }

    /// Basis coordinates of an ambient vector (`None` if it is not in a kernel lattice).
    pub fn to_coords(&self, ambient: &[BigInt]) -> Option<IntVec> {
        if ambient.len() != self.ambient_rank {
            return None;
        }
        match (&self.presentation, &self.coord_map) {
            (Presentation::Full, _) => Some(ambient.to_vec()),
            (_, Some(cm)) => Some(cm.mul_vec(ambient)),
            (Presentation::Kernel { equations }, None) => {
                if equations.mul_vec(ambient).iter().any(|x| !x.is_zero()) {
                    return None;
                }
                SublatticeCoords::new(&self.basis).ok()?.coords(ambient)
            }
            _ => None,
        }
    }

    /// A representative ambient vector for basis coordinates.
    pub fn from_coords(&self, coords: &[BigInt]) -> IntVec {
        self.basis.vec_mul(coords)
    }

    /// Checks the presentation invariants.
    pub fn validate(&self) -> Result<()> {
        let rank = self.basis.rank();
        if rank != self.basis.nrows() {
            return Err(Error::RankDeficient { rank, rows: self.basis.nrows() });
        }
        match &self.presentation {
            Presentation::Full => Ok(()),
            Presentation::Kernel { equations } => {
                for r in self.basis.row_vecs() {
                    if equations.mul_vec(&r).iter().any(|x| !x.is_zero()) {
                        return Err(crate::error::internal("kernel basis row violates equations"));
                    }
                }
                let (_, idx) = saturate(&self.basis)?;
                if idx != BigInt::from(1) {
                    return Err(crate::error::internal("kernel basis is not saturated"));
                }
                Ok(())
            }
            Presentation::Quotient { relations } => {
                let stacked = self.basis.stack(relations)?;
                if stacked.rank() != self.ambient_rank {
                    return Err(crate::error::internal("lifts and relations do not reach full rank"));
                }
                Ok(())
            }
        }
    }
}

/// A pair of lattices with the gram matrix of their bases under the ambient dot product.
#[derive(Clone, Debug)]
pub struct DualPairing {
    pub primal: LatticeEmbedding,
    pub dual: LatticeEmbedding,
    pub gram: IntMatrix,
}

impl DualPairing {
    pub fn new(primal: LatticeEmbedding, dual: LatticeEmbedding) -> Result<Self> {
        if primal.ambient_rank() != dual.ambient_rank() || primal.rank() != dual.rank() {
            return Err(Error::Dimension("paired lattices have different ranks".into()));
        }
        let gram = primal.basis().mul(&dual.basis().transpose())?;
        if !gram.is_unimodular() {
            return Err(Error::Internal(format!("pairing gram matrix {gram:?} is not unimodular")));
        }
        Ok(DualPairing { primal, dual, gram })
    }

    /// The kernel lattice `{x : eq x = 0}` paired with its dual `Z^n / rowspan(eq)`.
    pub fn kernel_and_quotient(equations: IntMatrix) -> Result<Self> {
        let primal = LatticeEmbedding::kernel(equations.clone());
        let dual = LatticeEmbedding::quotient(equations)?;
        Self::new(primal, dual)
    }

    pub fn full(n: usize) -> Self {
        DualPairing {
            primal: LatticeEmbedding::full(n),
            dual: LatticeEmbedding::full(n),
            gram: IntMatrix::identity(n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_quotient_pair_is_unimodular() {
        let eq = IntMatrix::from_i64_rows(&[&[1, 1, -1, -1]]);
        let p = DualPairing::kernel_and_quotient(eq).unwrap();
        assert_eq!(p.primal.rank(), 3);
        assert_eq!(p.dual.rank(), 3);
        p.primal.validate().unwrap();
        p.dual.validate().unwrap();
    }

    #[test]
    fn coordinates_round_trip() {
        let eq = IntMatrix::from_i64_rows(&[&[1, 1, 1, -1, -1, -1]]);
        let m = LatticeEmbedding::kernel(eq);
        let v: Vec<BigInt> = [1, 0, 0, 0, 1, 0].iter().map(|&x| BigInt::from(x)).collect();
        let c = m.to_coords(&v).unwrap();
        assert_eq!(m.from_coords(&c), v);
        let off: Vec<BigInt> = [1, 0, 0, 0, 0, 0].iter().map(|&x| BigInt::from(x)).collect();
        assert!(m.to_coords(&off).is_none());
    }
}
