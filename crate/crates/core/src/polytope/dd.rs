//! Double description method for pointed polyhedral cones.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{dot, independent_rows, primitive, IntMatrix, IntVec};

#[derive(Clone)]
struct Ray {
    v: IntVec,
    zeros: Vec<u64>,
}

fn bit_set(z: &mut [u64], i: usize) {
    z[i / 64] |= 1 << (i % 64);
}

fn intersect(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn popcount(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

/// Extreme rays (primitive integer vectors, sorted) of the cone
/// `{x : <a, x> >= 0 for every row a}`.
///
/// The cone must be pointed, i.e. the constraint rows must have full rank;
/// otherwise [`Error::Unbounded`] is returned. The zero cone yields no rays.
pub fn extreme_rays(constraints: &[IntVec], dim: usize) -> Result<Vec<IntVec>> {
    let rows: Vec<IntVec> = constraints.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let basis = independent_rows(&rows, dim);
    if basis.len() < dim {
        return Err(Error::Unbounded);
    }
    let mut order: Vec<usize> = basis.clone();
    order.extend((0..rows.len()).filter(|i| !basis.contains(i)));
    let words = rows.len().div_ceil(64).max(1);

    // Initial simplicial cone from the basis rows: rays are the inverse columns.
    let a_b = IntMatrix::from_rows(&basis.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>(), dim);
    let inv = a_b.rational_inverse().ok_or_else(|| crate::error::internal("basis rows are singular"))?;
    let mut rays: Vec<Ray> = Vec::with_capacity(dim);
    for j in 0..dim {
        let col: Vec<_> = (0..dim).map(|i| inv[i][j].clone()).collect();
        let den = col.iter().fold(BigInt::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        let v: IntVec = col.iter().map(|x| (x * num_rational::BigRational::from_integer(den.clone())).to_integer()).collect();
        let mut zeros = vec![0u64; words];
        for k in 0..dim {
            if k != j {
                bit_set(&mut zeros, k);
            }
        }
        rays.push(Ray { v: primitive(&v), zeros });
    }

    for (pos, &ri) in order.iter().enumerate().skip(dim) {
        let a = &rows[ri];
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    bit_set(&mut r.zeros, pos);
                }
            }
            continue;
        }
        let posi: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &posi {
            for &q in &neg {
                let common = intersect(&rays[p].zeros, &rays[q].zeros);
                if popcount(&common) + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                // vals[p] > 0 > vals[q]: combination vanishing on a.
                let v: IntVec = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(xq, xp)| &vals[p] * xq - &vals[q] * xp)
                    .collect();
                let mut zeros = common;
                bit_set(&mut zeros, pos);
                fresh.push(Ray { v: primitive(&v), zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                bit_set(&mut r.zeros, pos);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }
    let mut out: Vec<IntVec> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ivec;

    #[test]
    fn quadrant() {
        let rays = extreme_rays(&[ivec(&[1, 0]), ivec(&[0, 1])], 2).unwrap();
        assert_eq!(rays, vec![ivec(&[0, 1]), ivec(&[1, 0])]);
    }

    #[test]
    fn square_cone() {
        // cone over the square [-1,1]^2 at height 1: constraints t +- x >= 0, t +- y >= 0
        let cons = vec![ivec(&[1, 1, 0]), ivec(&[1, -1, 0]), ivec(&[1, 0, 1]), ivec(&[1, 0, -1])];
        let rays = extreme_rays(&cons, 3).unwrap();
        assert_eq!(rays.len(), 4);
        for r in &rays {
            assert_eq!(r[0], BigInt::from(1));
        }
    }

    #[test]
    fn non_pointed_is_rejected() {
        assert!(matches!(extreme_rays(&[ivec(&[1, 0])], 2), Err(Error::Unbounded)));
    }

    #[test]
    fn lower_dimensional_cone() {
        // y = 0 (two inequalities) and x >= 0, plus z >= 0
        let cons = vec![ivec(&[0, 1, 0]), ivec(&[0, -1, 0]), ivec(&[1, 0, 0]), ivec(&[0, 0, 1])];
        let rays = extreme_rays(&cons, 3).unwrap();
        assert_eq!(rays, vec![ivec(&[0, 0, 1]), ivec(&[1, 0, 0])]);
    }
}
