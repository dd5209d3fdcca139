use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::PairAlignment;
use crate::error::{internal, Error, Result};
use crate::lattice::{
    elementary_divisors, kernel_basis, rank_of_rows, reduce_mod_lattice, snf, solve_linear_integer, IntMatrix, IntVec,
};

/// A full-rank sublattice `N' ⊂ Z^n` whose basis starts with prescribed rows
/// that are part of a basis of `N'` (though not necessarily of `Z^n`).
///
/// With `U R V = diag(d)` for the prescribed rows `R`, the remaining basis
/// rows are the trailing rows of `V^{-1}`, and `[Z^n : N'] = prod d_i`.
/// Dual coordinates: `m` in the dual of `Z^n` has coordinates `basis * m`
/// in the dual of `N'`.
#[derive(Clone, Debug)]
pub struct AuxiliaryLattice {
    pub basis: IntMatrix,
    pub fixed: usize,
    pub index: BigInt,
    pub elementary_divisors: Vec<BigInt>,
    inverse: Vec<Vec<BigRational>>,
}

pub fn build_auxiliary_lattice(fixed_rows: &[IntVec], dim: usize) -> Result<AuxiliaryLattice> {
    let m = fixed_rows.len();
    if rank_of_rows(fixed_rows, dim) != m {
        return Err(Error::RankDeficient { rank: rank_of_rows(fixed_rows, dim), rows: m });
    }
    let r = IntMatrix::from_rows(fixed_rows, dim);
    let (basis, divisors) = if m == 0 {
        (IntMatrix::identity(dim), Vec::new())
    } else {
        let (s, _, v) = snf(&r);
        let vinv = v.unimodular_inverse()?;
        let xi: Vec<usize> = (m..dim).collect();
        (r.stack(&vinv.select_rows(&xi))?, elementary_divisors(&s))
    };
    let index: BigInt = divisors.iter().fold(BigInt::one(), |a, d| a * d);
    if basis.determinant()?.abs() != index {
        return Err(internal("auxiliary lattice index disagrees with its determinant"));
    }
    let inverse = basis.rational_inverse().ok_or_else(|| internal("auxiliary basis is singular"))?;
    Ok(AuxiliaryLattice { basis, fixed: m, index, elementary_divisors: divisors, inverse })
}

impl AuxiliaryLattice {
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Coordinates in the dual of `N'` of a vector of the dual of `Z^n`.
    pub fn to_prime(&self, m: &[BigInt]) -> IntVec {
        self.basis.mul_vec(m)
    }

    /// Inverse of `to_prime`; `None` when the preimage is not integral.
    pub fn from_prime(&self, x: &[BigInt]) -> Option<IntVec> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let v: BigRational =
                    (0..n).map(|j| &self.inverse[i][j] * BigRational::from_integer(x[j].clone())).sum();
                v.is_integer().then(|| v.to_integer())
            })
            .collect()
    }

    /// Coordinates of `n` with respect to the basis of `N'`; `None` if `n ∉ N'`.
    pub fn dual_coords(&self, n: &[BigInt]) -> Option<IntVec> {
        let d = self.dim();
        (0..d)
            .map(|j| {
                let v: BigRational =
                    (0..d).map(|i| BigRational::from_integer(n[i].clone()) * &self.inverse[i][j]).sum();
                v.is_integer().then(|| v.to_integer())
            })
            .collect()
    }
}

/// `w_ki` (with `w_k1 = 0`) and `u_ki`, in dual coordinates of `N-bar'`.
#[derive(Clone, Debug)]
pub struct BridgeVectors {
    pub w: Vec<Vec<IntVec>>,
    pub u: Vec<Vec<IntVec>>,
}

/// Integer solutions of the pairing tables against `constraints` (rows
/// `e_1..e_s`, then aligned `e_tilde_1..e_tilde_s`), reduced modulo the
/// common annihilator to a canonical representative.
pub fn solve_bridge_vectors(al: &PairAlignment, constraints: &IntMatrix) -> Result<BridgeVectors> {
    let s = al.s();
    let ann = kernel_basis(constraints);
    let dim = constraints.ncols();
    let solve = |target: Vec<BigInt>| -> Result<IntVec> {
        let x = solve_linear_integer(constraints, &target)
            .ok_or_else(|| internal("pairing constraints have no integer solution"))?;
        Ok(reduce_mod_lattice(&x, &ann))
    };
    let mut w = Vec::with_capacity(al.r());
    let mut u = Vec::with_capacity(al.r());
    for block in &al.blocks {
        let k1 = block[0];
        let mut wk = vec![vec![BigInt::zero(); dim]];
        let mut uk = Vec::with_capacity(block.len());
        for (pos, &ki) in block.iter().enumerate() {
            if pos > 0 {
                let mut t = vec![BigInt::zero(); 2 * s];
                t[s + k1] = -BigInt::one();
                t[s + ki] = BigInt::one();
                wk.push(solve(t)?);
            }
            let mut t = vec![BigInt::zero(); 2 * s];
            t[ki] = BigInt::one();
            t[s + k1] = BigInt::one();
            uk.push(solve(t)?);
        }
        w.push(wk);
        u.push(uk);
    }
    Ok(BridgeVectors { w, u })
}
