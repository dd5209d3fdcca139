//! Affine hull, facets and extreme points of finite rational point sets.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dd::extreme_rays;
use crate::error::{Error, Result};
use crate::lattice::{dot, independent_rows, kernel_basis, primitive, rank_of_rows, IntMatrix, IntVec};

/// A rational point `num / den` with `den > 0` and `gcd(num, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatPoint {
    pub den: BigInt,
    pub num: IntVec,
}

impl RatPoint {
    pub fn integral(v: IntVec) -> Self {
        RatPoint { den: BigInt::one(), num: v }
    }

    pub fn new(num: IntVec, den: BigInt) -> Self {
        assert!(!den.is_zero());
        let mut all = num.clone();
        all.push(den.clone());
        let g = crate::lattice::content(&all);
        let sign = if den.is_negative() { -BigInt::one() } else { BigInt::one() };
        let g = g * sign;
        RatPoint { den: &den / &g, num: num.iter().map(|x| x / &g).collect() }
    }

    pub fn from_rationals(xs: &[BigRational]) -> Self {
        let den = xs.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        let num = xs.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
        RatPoint::new(num, den)
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn coord(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        (0..self.dim()).map(|i| self.coord(i)).collect()
    }

    /// Homogeneous coordinates `(den, num...)`.
    pub fn homogeneous(&self) -> IntVec {
        let mut h = Vec::with_capacity(self.dim() + 1);
        h.push(self.den.clone());
        h.extend(self.num.iter().cloned());
        h
    }

    pub fn add(&self, other: &RatPoint) -> RatPoint {
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &other.den + b * &self.den).collect();
        RatPoint::new(num, &self.den * &other.den)
    }

    pub fn sub(&self, other: &RatPoint) -> RatPoint {
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &other.den - b * &self.den).collect();
        RatPoint::new(num, &self.den * &other.den)
    }

    /// `<self, y>` for an integer functional `y`.
    pub fn pair(&self, y: &[BigInt]) -> BigRational {
        BigRational::new(dot(&self.num, y), self.den.clone())
    }

    pub fn lex_cmp(&self, other: &RatPoint) -> Ordering {
        for (a, b) in self.num.iter().zip(&other.num) {
            let o = (a * &other.den).cmp(&(b * &self.den));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

/// Halfspace `<x, normal> >= -offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub normal: IntVec,
    pub offset: BigInt,
}

impl Facet {
    pub fn slack(&self, p: &RatPoint) -> BigInt {
        dot(&p.num, &self.normal) + &self.offset * &p.den
    }

    pub fn contains(&self, p: &RatPoint) -> bool {
        !self.slack(p).is_negative()
    }
}

/// Hyperplane `<x, normal> + offset = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub normal: IntVec,
    pub offset: BigInt,
}

/// Full inequality description. Facet normals vanish outside `pivots`, so
/// they are facets of the projection onto those coordinates, which is
/// injective on the affine hull.
#[derive(Clone, Debug)]
pub struct HRep {
    pub dim: usize,
    pub ambient: usize,
    pub base: RatPoint,
    pub directions: Vec<IntVec>,
    pub pivots: Vec<usize>,
    pub equations: Vec<Equation>,
    pub facets: Vec<Facet>,
}

impl HRep {
    pub fn contains(&self, p: &RatPoint) -> bool {
        self.equations.iter().all(|e| (dot(&p.num, &e.normal) + &e.offset * &p.den).is_zero())
            && self.facets.iter().all(|f| f.contains(p))
    }
}

fn dedup_points(points: &[RatPoint]) -> Vec<RatPoint> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup_by(|a, b| a.lex_cmp(b) == Ordering::Equal);
    pts
}

/// Computes the affine hull, facets and extreme points of a point set.
pub fn hull(points: &[RatPoint]) -> Result<(Vec<RatPoint>, HRep)> {
    let pts = dedup_points(points);
    let Some(base) = pts.first().cloned() else { return Err(Error::Empty) };
    let n = base.dim();
    let diffs: Vec<IntVec> = pts.iter().skip(1).map(|p| primitive(&p.sub(&base).num)).collect();
    let dir_idx = independent_rows(&diffs, n);
    let directions: Vec<IntVec> = dir_idx.iter().map(|&i| diffs[i].clone()).collect();
    let k = directions.len();

    let equations: Vec<Equation> = if k == n {
        Vec::new()
    } else {
        let dm = IntMatrix::from_rows(&directions, n);
        let ker = if k == 0 { IntMatrix::identity(n) } else { kernel_basis(&dm) };
        ker.row_vecs()
            .into_iter()
            .map(|normal| {
                // <base, normal> = num/den ; store den*<x,normal> - num = 0 scaled to integers
                let val = dot(&base.num, &normal);
                let scaled: IntVec = normal.iter().map(|x| x * &base.den).collect();
                let mut all = scaled.clone();
                all.push(val.clone());
                let g = crate::lattice::content(&all);
                Equation {
                    normal: scaled.iter().map(|x| x / &g).collect(),
                    offset: -(val / &g),
                }
            })
            .collect()
    };

    // Coordinates on which the projection of the hull is injective.
    let cols: Vec<IntVec> = (0..n).map(|j| directions.iter().map(|d| d[j].clone()).collect()).collect();
    let pivots = if k == 0 { Vec::new() } else { independent_rows(&cols, k) };

    if k == 0 {
        let hrep = HRep { dim: 0, ambient: n, base: base.clone(), directions, pivots, equations, facets: Vec::new() };
        return Ok((vec![base], hrep));
    }

    // Facets of the projected (full-dimensional) polytope via the dual cone.
    let cons: Vec<IntVec> = pts
        .iter()
        .map(|p| {
            let mut h = vec![p.den.clone()];
            h.extend(pivots.iter().map(|&j| p.num[j].clone()));
            h
        })
        .collect();
    let rays = extreme_rays(&cons, k + 1)?;
    let mut facets: Vec<Facet> = rays
        .into_iter()
        .map(|r| {
            let mut normal = vec![BigInt::zero(); n];
            for (t, &j) in pivots.iter().enumerate() {
                normal[j] = r[t + 1].clone();
            }
            Facet { normal, offset: r[0].clone() }
        })
        .collect();
    facets.sort();

    let vertices: Vec<RatPoint> = pts
        .iter()
        .filter(|p| {
            let tight: Vec<IntVec> = facets
                .iter()
                .filter(|f| f.slack(p).is_zero())
                .map(|f| pivots.iter().map(|&j| f.normal[j].clone()).collect())
                .collect();
            rank_of_rows(&tight, k) == k
        })
        .cloned()
        .collect();
    let hrep = HRep { dim: k, ambient: n, base, directions, pivots, equations, facets };
    Ok((vertices, hrep))
}

/// Vertices of `{x : <x, f.normal> >= -f.offset, <x, e.normal> + e.offset = 0}`.
pub fn vertices_from_hrep(n: usize, facets: &[Facet], equations: &[Equation]) -> Result<Vec<RatPoint>> {
    // Homogenize with t >= 0: rows act on (t, x).
    let mut cons: Vec<IntVec> = Vec::new();
    let mut t_row = vec![BigInt::zero(); n + 1];
    t_row[0] = BigInt::one();
    cons.push(t_row);
    for f in facets {
        let mut r = vec![f.offset.clone()];
        r.extend(f.normal.iter().cloned());
        cons.push(r);
    }
    for e in equations {
        let mut r = vec![e.offset.clone()];
        r.extend(e.normal.iter().cloned());
        cons.push(r.iter().map(|x| -x).collect());
        cons.push(r);
    }
    let rays = extreme_rays(&cons, n + 1)?;
    if rays.is_empty() {
        return Err(Error::Empty);
    }
    let mut out = Vec::new();
    for r in rays {
        if r[0].is_zero() {
            return Err(Error::Unbounded);
        }
        out.push(RatPoint::new(r[1..].to_vec(), r[0].clone()));
    }
    out.sort_by(|a, b| a.lex_cmp(b));
    Ok(out)
}
