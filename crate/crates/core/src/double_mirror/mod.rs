//! Decompositions of the dual degree element and the determinantal bridge
//! between the two complete intersections of a toric double mirror pair.

mod auxiliary;
pub(crate) mod bridge;

pub use auxiliary::{build_auxiliary_lattice, solve_bridge_vectors, AuxiliaryLattice, BridgeVectors};
pub use bridge::{
    build_bridge, build_context, determinants, slice_polynomials, BridgeContext, BridgeData, CoefficientAssignment,
    IdentityReport, SlicePolynomials, Witness,
};

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gorenstein_cone::{ConeOrigin, GorensteinConePair};
use crate::lattice::{dot, kernel_basis, vec_add, vec_sub, IntMatrix, IntVec};

/// A decomposition `deg_dual = sum e_tilde_i` together with its block
/// structure relative to the reference decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub summands: Vec<IntVec>,
    /// `e_tilde_sigma(i) - e_i` against the reference; for nef-partition
    /// cones only the `N` part (the first `s` coordinates vanish).
    pub p: Vec<IntVec>,
    pub blocks: Vec<Vec<usize>>,
    pub r: usize,
    pub block_sizes: Vec<usize>,
    pub trivial: bool,
}

/// Lattice points of `T` in enumeration order.
pub fn degree_one_dual_points(pair: &GorensteinConePair) -> Result<Vec<IntVec>> {
    let mut pts = pair.dual_degree_slice()?.lattice_points()?;
    pts.sort_by(|a, b| point_order(pair, a, b));
    Ok(pts)
}

fn point_order(pair: &GorensteinConePair, a: &IntVec, b: &IntVec) -> Ordering {
    match pair.origin {
        ConeOrigin::NefPartition { s } => {
            let slot = |v: &IntVec| (0..s).position(|i| v[i].is_one()).unwrap_or(s);
            slot(a).cmp(&slot(b)).then_with(|| a[s..].cmp(&b[s..]))
        }
        ConeOrigin::Direct => {
            let gen_pos = |v: &IntVec| pair.k_dual_generators.iter().position(|g| g == v).unwrap_or(usize::MAX);
            gen_pos(a).cmp(&gen_pos(b)).then_with(|| a.cmp(b))
        }
    }
}

/// Lattice points of the degree slice `S` of `K`, lexicographically.
pub fn degree_one_points(pair: &GorensteinConePair) -> Result<Vec<IntVec>> {
    let mut pts = pair.degree_slice()?.lattice_points()?;
    pts.sort();
    Ok(pts)
}

/// All decompositions of `deg_dual` into `index` lattice points of `K^dual`.
///
/// Summands are sorted by point order; decompositions are listed by their
/// index tuples, with the trivial decomposition first for nef-partition cones.
pub fn enumerate_decompositions(pair: &GorensteinConePair) -> Result<Vec<Decomposition>> {
    let t = degree_one_dual_points(pair)?;
    let s = pair.index;
    let mut tuples = Vec::new();
    let mut acc = Vec::with_capacity(s);
    search(pair, &t, 0, &pair.deg_dual, s, &mut acc, &mut tuples);
    let mut sums: Vec<Vec<IntVec>> =
        tuples.into_iter().map(|idx| idx.into_iter().map(|i| t[i].clone()).collect()).collect();
    let reference = match pair.origin {
        ConeOrigin::NefPartition { s } => {
            let d = pair.dim() - s;
            let trivial: Vec<IntVec> = (0..s)
                .map(|i| (0..s + d).map(|j| BigInt::from((j == i) as i64)).collect())
                .collect();
            let pos = sums
                .iter()
                .position(|x| *x == trivial)
                .ok_or_else(|| crate::error::internal("trivial decomposition missing"))?;
            let tr = sums.remove(pos);
            sums.insert(0, tr);
            trivial
        }
        ConeOrigin::Direct => match sums.first() {
            Some(first) => first.clone(),
            None => return Ok(Vec::new()),
        },
    };
    let slice = degree_one_points(pair)?;
    sums.into_iter()
        .map(|summands| {
            let al = align_pair(pair, &slice, &reference, &summands)?;
            let p = match pair.origin {
                ConeOrigin::NefPartition { s } => al.q.iter().map(|q| q[s..].to_vec()).collect(),
                ConeOrigin::Direct => al.q.clone(),
            };
            let trivial = summands == reference;
            Ok(Decomposition {
                block_sizes: al.blocks.iter().map(Vec::len).collect(),
                r: al.blocks.len(),
                blocks: al.blocks,
                p,
                summands,
                trivial,
            })
        })
        .collect()
}

fn search(
    pair: &GorensteinConePair,
    t: &[IntVec],
    start: usize,
    rem: &IntVec,
    left: usize,
    acc: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if left == 0 {
        if rem.iter().all(Zero::is_zero) {
            out.push(acc.clone());
        }
        return;
    }
    for i in start..t.len() {
        let next = vec_sub(rem, &t[i]);
        if !pair.in_k_dual(&next) {
            continue;
        }
        acc.push(i);
        search(pair, t, i, &next, left - 1, acc, out);
        acc.pop();
    }
}

/// Finest partition of `{0..s}` into zero-sum blocks, read off the columns
/// of a kernel basis of `a -> sum a_i p_i`: two indices share a block iff
/// their columns agree. Fails when the rational relations among the `p_i`
/// are not spanned by block indicators.
pub fn block_partition(p: &[IntVec]) -> Result<Vec<Vec<usize>>> {
    let s = p.len();
    if s == 0 {
        return Ok(Vec::new());
    }
    let dim = p[0].len();
    let total = p.iter().fold(vec![BigInt::zero(); dim], |a, v| vec_add(&a, v));
    if total.iter().any(|x| !x.is_zero()) {
        return Err(Error::InvalidDecomposition("vectors do not sum to zero".into()));
    }
    let ker = kernel_basis(&IntMatrix::from_rows(p, dim).transpose());
    let mut blocks: Vec<(IntVec, Vec<usize>)> = Vec::new();
    for i in 0..s {
        let col = ker.column(i);
        match blocks.iter_mut().find(|(c, _)| *c == col) {
            Some((_, b)) => b.push(i),
            None => blocks.push((col, vec![i])),
        }
    }
    let blocks: Vec<Vec<usize>> = blocks.into_iter().map(|(_, b)| b).collect();
    let zero_sum = blocks.iter().all(|b| {
        b.iter().fold(vec![BigInt::zero(); dim], |a, &i| vec_add(&a, &p[i])).iter().all(Zero::is_zero)
    });
    if !zero_sum || blocks.len() != ker.nrows() {
        return Err(Error::InvalidDecomposition(
            "relations among the difference vectors are not spanned by zero-sum blocks".into(),
        ));
    }
    Ok(blocks)
}

/// A pair of decompositions matched summand by summand.
#[derive(Clone, Debug)]
pub struct PairAlignment {
    pub e: Vec<IntVec>,
    /// `e_tilde` reordered so that summand `i` is matched with `e_i`.
    pub e_tilde: Vec<IntVec>,
    pub sigma: Vec<usize>,
    /// `q_i = e_tilde_i - e_i` (aligned).
    pub q: Vec<IntVec>,
    pub blocks: Vec<Vec<usize>>,
}

impl PairAlignment {
    pub fn s(&self) -> usize {
        self.e.len()
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }
}

/// Matches `e_tilde` to `e` by the lexicographically smallest permutation
/// `sigma` with every `S_{i, sigma(i)}` non-empty, then computes blocks.
pub fn align_pair(
    pair: &GorensteinConePair,
    slice_points: &[IntVec],
    e: &[IntVec],
    e_tilde: &[IntVec],
) -> Result<PairAlignment> {
    crate::gorenstein_cone::validate_decomposition(pair, e)?;
    crate::gorenstein_cone::validate_decomposition(pair, e_tilde)?;
    let s = e.len();
    let nonempty: Vec<Vec<bool>> = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| slice_points.iter().any(|v| dot(v, &e[i]).is_one() && dot(v, &e_tilde[j]).is_one()))
                .collect()
        })
        .collect();
    fn assign(nonempty: &[Vec<bool>], i: usize, used: &mut Vec<bool>, sigma: &mut Vec<usize>) -> bool {
        if i == nonempty.len() {
            return true;
        }
        for j in 0..nonempty.len() {
            if !used[j] && nonempty[i][j] {
                used[j] = true;
                sigma.push(j);
                if assign(nonempty, i + 1, used, sigma) {
                    return true;
                }
                sigma.pop();
                used[j] = false;
            }
        }
        false
    }
    let mut sigma = Vec::with_capacity(s);
    if !assign(&nonempty, 0, &mut vec![false; s], &mut sigma) {
        return Err(Error::InvalidDecomposition("no matching of summands with non-empty slices S_ij".into()));
    }
    let aligned: Vec<IntVec> = sigma.iter().map(|&j| e_tilde[j].clone()).collect();
    let q: Vec<IntVec> = aligned.iter().zip(e).map(|(a, b)| vec_sub(a, b)).collect();
    let blocks = block_partition(&q)?;
    Ok(PairAlignment { e: e.to_vec(), e_tilde: aligned, sigma, q, blocks })
}

#[cfg(test)]
mod tests;
