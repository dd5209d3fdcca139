//! Lattice point enumeration over the pivot projection of a polytope.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::hull::{HRep, RatPoint};
use crate::error::{internal, Result};
use crate::lattice::IntMatrix;

fn small(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or_else(|| internal("coordinate exceeds enumeration range"))
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

struct Search<'a> {
    k: usize,
    lo: Vec<i128>,
    hi: Vec<i128>,
    // facets restricted to pivot coordinates
    normals: &'a [Vec<i128>],
    offsets: &'a [i128],
    // suffix[f][j] = max over coordinates j.. of normal * z within the box
    suffix: Vec<Vec<i128>>,
}

impl Search<'_> {
    fn run(&self, level: usize, partial: &mut Vec<i128>, acc: &mut [i128], out: &mut Vec<Vec<i128>>) {
        if level == self.k {
            out.push(partial.clone());
            return;
        }
        let mut lo = self.lo[level];
        let mut hi = self.hi[level];
        for (f, a) in self.normals.iter().enumerate() {
            let c = a[level];
            // c*z + acc + offset + suffix(level+1) >= 0
            let rest = acc[f] + self.offsets[f] + self.suffix[f][level + 1];
            if c > 0 {
                lo = lo.max(div_ceil(-rest, c));
            } else if c < 0 {
                hi = hi.min(div_floor(rest, -c));
            } else if rest < 0 {
                return;
            }
            if lo > hi {
                return;
            }
        }
        for z in lo..=hi {
            for (f, a) in self.normals.iter().enumerate() {
                acc[f] += a[level] * z;
            }
            partial.push(z);
            self.run(level + 1, partial, acc, out);
            partial.pop();
            for (f, a) in self.normals.iter().enumerate() {
                acc[f] -= a[level] * z;
            }
        }
    }
}

/// All lattice points of the polytope described by `hrep` with the given
/// vertices, sorted lexicographically.
pub fn enumerate(vertices: &[RatPoint], hrep: &HRep) -> Result<Vec<Vec<BigInt>>> {
    let n = hrep.ambient;
    let k = hrep.dim;
    if k == 0 {
        let v = &vertices[0];
        return Ok(if v.is_integral() { vec![v.num.clone()] } else { Vec::new() });
    }
    let piv = &hrep.pivots;
    let mut lo = Vec::with_capacity(k);
    let mut hi = Vec::with_capacity(k);
    for &j in piv {
        let mut mn: Option<i128> = None;
        let mut mx: Option<i128> = None;
        for v in vertices {
            let d = small(&v.den)?;
            let x = small(&v.num[j])?;
            let f = div_ceil(x, d);
            let c = div_floor(x, d);
            mn = Some(mn.map_or(f, |m: i128| m.min(f)));
            mx = Some(mx.map_or(c, |m: i128| m.max(c)));
        }
        lo.push(mn.unwrap());
        hi.push(mx.unwrap());
    }
    let normals: Vec<Vec<i128>> =
        hrep.facets.iter().map(|f| piv.iter().map(|&j| small(&f.normal[j])).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let offsets: Vec<i128> = hrep.facets.iter().map(|f| small(&f.offset)).collect::<Result<_>>()?;
    let suffix: Vec<Vec<i128>> = normals
        .iter()
        .map(|a| {
            let mut s = vec![0i128; k + 1];
            for j in (0..k).rev() {
                s[j] = s[j + 1] + (a[j] * lo[j]).max(a[j] * hi[j]);
            }
            s
        })
        .collect();
    let search = Search { k, lo, hi, normals: &normals, offsets: &offsets, suffix };
    let mut found = Vec::new();
    let mut acc = vec![0i128; normals.len()];
    search.run(0, &mut Vec::with_capacity(k), &mut acc, &mut found);

    // Affine lift: x = base + lambda * D with lambda determined by pivot values.
    let dirs = IntMatrix::from_rows(&hrep.directions, n);
    let dp = IntMatrix::from_rows(
        &hrep.directions.iter().map(|d| piv.iter().map(|&j| d[j].clone()).collect()).collect::<Vec<_>>(),
        k,
    );
    let inv = dp.rational_inverse().ok_or_else(|| internal("pivot block singular"))?;
    // c = inv * D, as integers over a common denominator L
    let mut l = BigInt::from(1);
    let mut cr = vec![vec![num_rational::BigRational::zero(); n]; k];
    for (i, row) in cr.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut s = num_rational::BigRational::zero();
            for (t, inv_it) in inv[i].iter().enumerate() {
                s += inv_it * num_rational::BigRational::from_integer(dirs[(t, j)].clone());
            }
            l = num_integer::lcm(l, s.denom().clone());
            *cell = s;
        }
    }
    let lbig = num_rational::BigRational::from_integer(l.clone());
    let c: Vec<Vec<i128>> =
        cr.iter().map(|row| row.iter().map(|x| small(&(x * &lbig).to_integer())).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let l = small(&l)?;
    let beta = small(&hrep.base.den)?;
    let b: Vec<i128> = hrep.base.num.iter().map(small).collect::<Result<_>>()?;
    let scale = beta * l;
    let mut out = Vec::new();
    'pts: for z in found {
        let delta: Vec<i128> = (0..k).map(|i| beta * z[i] - b[piv[i]]).collect();
        let mut x = Vec::with_capacity(n);
        for j in 0..n {
            let mut num = l * b[j];
            for i in 0..k {
                num += delta[i] * c[i][j];
            }
            if num % scale != 0 {
                continue 'pts;
            }
            x.push(BigInt::from(num / scale));
        }
        out.push(x);
    }
    out.sort();
    Ok(out)
}
