use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::{IntMatrix, IntVec};
use super::normal_form::{elementary_divisors, hnf, hnf_pivots, snf};
use crate::error::{Error, Result};

/// Basis (rows, in Hermite normal form) of the integer kernel `{x : a x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let n = a.ncols();
    let (h, u) = hnf(&a.transpose());
    let zero_rows: Vec<usize> = (0..h.nrows()).filter(|&i| h.row(i).iter().all(Zero::is_zero)).collect();
    let k = u.select_rows(&zero_rows);
    if k.nrows() == 0 {
        return IntMatrix::zeros(0, n);
    }
    let (kh, _) = hnf(&k);
    kh
}

/// Drops zero rows.
pub fn nonzero_rows(a: &IntMatrix) -> IntMatrix {
    let idx: Vec<usize> = (0..a.nrows()).filter(|&i| a.row(i).iter().any(|x| !x.is_zero())).collect();
    a.select_rows(&idx)
}

/// Saturation of the row span of `b` inside `Z^n` together with the index
/// `[saturation : span(b)]`.
pub fn saturate(b: &IntMatrix) -> Result<(IntMatrix, BigInt)> {
    let rank = b.rank();
    if rank < b.nrows() {
        return Err(Error::RankDeficient { rank, rows: b.nrows() });
    }
    let n = b.ncols();
    let sat = if b.nrows() == 0 {
        IntMatrix::zeros(0, n)
    } else {
        let orth = kernel_basis(b);
        if orth.nrows() == 0 {
            IntMatrix::identity(n)
        } else {
            kernel_basis(&orth)
        }
    };
    let (s, _, _) = snf(b);
    let index = elementary_divisors(&s).into_iter().fold(BigInt::one(), |acc, d| acc * d);
    Ok((sat, index))
}

/// Completes a primitive, saturated, independent set of rows to a unimodular
/// matrix whose first rows are `vs`.
pub fn extend_to_basis(vs: &IntMatrix, ambient_rank: usize) -> Result<IntMatrix> {
    if vs.ncols() != ambient_rank {
        return Err(Error::Dimension(format!(
            "vectors have {} coordinates, ambient rank is {ambient_rank}",
            vs.ncols()
        )));
    }
    let k = vs.nrows();
    let (_, index) = saturate(vs)?;
    if !index.is_one() {
        return Err(Error::NotSaturated { index: index.to_string() });
    }
    if k == 0 {
        return Ok(IntMatrix::identity(ambient_rank));
    }
    // u * vs * v = [I 0]  =>  rows k.. of v^{-1} complete vs.
    let (_, _, v) = snf(vs);
    let vinv = v.unimodular_inverse()?;
    let rest: Vec<usize> = (k..ambient_rank).collect();
    let out = vs.stack(&vinv.select_rows(&rest))?;
    debug_assert!(out.is_unimodular());
    Ok(out)
}

/// Some integer solution of `a x = b`, or `None` when there is none.
pub fn solve_linear_integer(a: &IntMatrix, b: &[BigInt]) -> Option<IntVec> {
    if b.len() != a.nrows() {
        return None;
    }
    let n = a.ncols();
    let (s, u, v) = snf(a);
    let ub = u.mul_vec(b);
    let mut y = vec![BigInt::zero(); n];
    for (i, rhs) in ub.iter().enumerate() {
        let d = if i < n { s[(i, i)].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !rhs.is_zero() {
                return None;
            }
        } else {
            let (q, r) = rhs.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(v.mul_vec(&y))
}

/// Reduces `x` modulo the lattice spanned by the rows of `basis_hnf`
/// (which must be in row Hermite normal form): each pivot coordinate is
/// brought into `[0, pivot)`. The result is a canonical coset representative.
pub fn reduce_mod_lattice(x: &[BigInt], basis_hnf: &IntMatrix) -> IntVec {
    let mut x = x.to_vec();
    for (i, c) in hnf_pivots(basis_hnf).into_iter().enumerate() {
        let row = basis_hnf.row(i);
        let q = x[c].div_floor(&row[c]);
        if !q.is_zero() {
            for (xj, rj) in x.iter_mut().zip(row) {
                *xj -= &q * rj;
            }
        }
    }
    x
}

/// Coordinates of points of a saturated sublattice with respect to its basis.
///
/// The basis is completed to a unimodular matrix once; coordinates are read
/// off the inverse, so repeated lookups are a single vector-matrix product.
#[derive(Clone, Debug)]
pub struct SublatticeCoords {
    basis: IntMatrix,
    inverse: IntMatrix,
}

impl SublatticeCoords {
    pub fn new(basis: &IntMatrix) -> Result<Self> {
        let full = extend_to_basis(basis, basis.ncols())?;
        let inverse = full.unimodular_inverse()?;
        Ok(SublatticeCoords { basis: basis.clone(), inverse })
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    /// Coordinates of `x` in the basis, `None` when `x` is not in the sublattice.
    pub fn coords(&self, x: &[BigInt]) -> Option<IntVec> {
        let all = self.inverse.vec_mul(x);
        let k = self.basis.nrows();
        if all[k..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(all[..k].to_vec())
    }

    pub fn point(&self, coords: &[BigInt]) -> IntVec {
        self.basis.vec_mul(coords)
    }
}
