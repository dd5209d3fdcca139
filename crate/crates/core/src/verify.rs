//! Finite-field sampling of the determinantal locus `D`, fiber
//! reconstruction on both complete intersections, and a Jacobian probe.
//!
//! Torus points are vectors of nonzero residues. A point of `X_(e)` is given
//! in the basis of `Ann(e)` (kernel of the `e` rows in `M-bar`), a point of
//! `D` in the basis of `Ann(e, e_tilde)` used by the bridge matrices.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::double_mirror::BridgeData;
use crate::double_mirror::bridge::to_i64;
use crate::error::{internal, Error, Result};
use crate::field::{Field, PrimeField};
use crate::laurent::LaurentPoly;
use crate::lattice::{dot, kernel_basis, rank_of_rows, vec_sub, IntMatrix, IntVec, SublatticeCoords};

pub const MIN_PRIME: u64 = 101;
const UNIVARIATE_ATTEMPTS: usize = 64;
const BIVARIATE_ATTEMPTS: usize = 8;
const VERDICT_THRESHOLD: f64 = 0.95;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    E,
    ETilde,
}

/// Fiber of `X_(side) -> D` over one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fiber {
    pub kernel_dims: Vec<usize>,
    /// Some block kernel has dimension at least two; `points` is left empty.
    pub non_generic: bool,
    pub points: Vec<Vec<u64>>,
}

impl Fiber {
    fn bucket(&self) -> String {
        if self.non_generic {
            "non_generic".into()
        } else {
            self.points.len().to_string()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamplePoint {
    pub index: usize,
    pub attempts: usize,
    pub y: Vec<u64>,
    pub fiber_e: Fiber,
    pub fiber_etilde: Fiber,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaRegularity {
    pub points: usize,
    pub passed: usize,
    pub pass_rate: f64,
}

impl DeltaRegularity {
    fn new(points: usize, passed: usize) -> Self {
        let pass_rate = if points == 0 { 0.0 } else { passed as f64 / points as f64 };
        DeltaRegularity { points, passed, pass_rate }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvidenceReport {
    pub prime: u64,
    pub seed: u64,
    pub samples_requested: usize,
    pub samples_on_d: usize,
    pub sampling_failures: usize,
    pub fiber_histogram_e: BTreeMap<String, usize>,
    pub fiber_histogram_etilde: BTreeMap<String, usize>,
    /// Samples with exactly one fiber point on each side.
    pub single_point_both_sides: usize,
    /// Samples with no degenerate block kernel on either side.
    pub generic_samples: usize,
    pub birational_evidence: bool,
    pub fiber_points_checked: usize,
    pub equation_failures: usize,
    pub projection_failures: usize,
    pub delta_regularity_e: DeltaRegularity,
    pub delta_regularity_etilde: DeltaRegularity,
    pub delta_regular_pass_rate: f64,
    pub warnings: Vec<String>,
    pub caveats: Vec<String>,
    pub samples: Vec<SamplePoint>,
}

impl EvidenceReport {
    /// Fiber points violating an equation or the projection invariant.
    pub fn invariant_failures(&self) -> usize {
        self.equation_failures + self.projection_failures
    }
}

// ---------------------------------------------------------------------------
// Dense linear algebra over F_p

fn row_reduce(f: &PrimeField, m: &mut [Vec<u64>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(row, p);
        let inv = f.inv(&m[row][col]).expect("nonzero pivot");
        for x in m[row].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..m.len() {
            if i != row && m[i][col] != 0 {
                let k = m[i][col];
                for c in 0..ncols {
                    let t = f.mul(&k, &m[row][c]);
                    m[i][c] = f.sub(&m[i][c], &t);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank_mod_p(f: &PrimeField, m: &[Vec<u64>], ncols: usize) -> usize {
    let mut m = m.to_vec();
    row_reduce(f, &mut m, ncols).len()
}

/// Basis of `{v : m v = 0}`.
pub fn nullspace_mod_p(f: &PrimeField, m: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    let mut m = m.to_vec();
    let pivots = row_reduce(f, &mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; ncols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&m[r][fc]);
            }
            v
        })
        .collect()
}

fn transpose(m: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    (0..ncols).map(|c| m.iter().map(|r| r[c]).collect()).collect()
}

// ---------------------------------------------------------------------------
// Univariate polynomials, dense, lowest degree first

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn horner(f: &PrimeField, p: &[u64], x: u64) -> u64 {
    p.iter().rev().fold(0, |acc, c| f.add(&f.mul(&acc, &x), c))
}

fn poly_rem(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let lead = f.inv(b.last().expect("nonzero divisor")).expect("nonzero lead");
    while a.len() >= b.len() {
        let k = f.mul(a.last().unwrap(), &lead);
        let off = a.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            let t = f.mul(&k, c);
            a[off + i] = f.sub(&a[off + i], &t);
        }
        a.pop();
        trim(&mut a);
    }
    a
}

fn poly_gcd(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Nonzero roots, by the linear formula or by scanning `F_p^*`.
fn nonzero_roots(f: &PrimeField, p: &[u64]) -> Vec<u64> {
    let lo = p.iter().position(|&c| c != 0).unwrap_or(p.len());
    let p = &p[lo..];
    match p.len() {
        0 | 1 => Vec::new(),
        2 => vec![f.neg(&f.div(&p[0], &p[1]).expect("nonzero lead"))],
        _ => (1..f.modulus()).filter(|&x| horner(f, p, x) == 0).collect(),
    }
}

/// Dense coefficients of a Laurent polynomial in one variable, shifted so the
/// lowest exponent becomes zero.
fn dense(f: &PrimeField, terms: impl Iterator<Item = (i64, u64)>) -> Vec<u64> {
    let terms: Vec<(i64, u64)> = terms.collect();
    let Some(lo) = terms.iter().map(|t| t.0).min() else { return Vec::new() };
    let hi = terms.iter().map(|t| t.0).max().unwrap();
    let mut out = vec![0u64; (hi - lo + 1) as usize];
    for (e, c) in terms {
        let i = (e - lo) as usize;
        out[i] = f.add(&out[i], &c);
    }
    trim(&mut out);
    out
}

// ---------------------------------------------------------------------------

struct SideData {
    /// Exponents, over the `X'` coordinates `(y, extra)`, of the basis of `Ann(side)`.
    lift: Vec<Vec<i64>>,
    /// `X^{-t_i} f_i` in the basis of `Ann(side)`.
    equations: Vec<LaurentPoly<PrimeField>>,
    jacobian: Vec<Vec<LaurentPoly<PrimeField>>>,
    /// Basis of `Ann(e, e_tilde)` in the basis of `Ann(side)`.
    projection: Vec<Vec<i64>>,
    /// `l(S_i) - t_i` in `M-bar` coordinates, per summand.
    faces: Vec<Vec<IntVec>>,
}

/// Precomputed data for repeated fiber and sampling queries on one bridge.
pub struct Verifier<'a> {
    bridge: &'a BridgeData<PrimeField>,
    field: PrimeField,
    sides: [SideData; 2],
    /// Matrices evaluated per block; identically zero determinants are skipped by the sampler.
    active: Vec<usize>,
}

fn side_data(bridge: &BridgeData<PrimeField>, side: Side) -> Result<SideData> {
    let ctx = &bridge.context;
    let f = bridge.coefficients.field;
    let al = &ctx.alignment;
    let summands = match side {
        Side::E => &al.e,
        Side::ETilde => &al.e_tilde,
    };
    let ann = kernel_basis(&IntMatrix::from_rows(summands, ctx.dim));
    let coords = SublatticeCoords::new(&ann)?;
    let d = coords.rank();

    let mut stack = ctx.ann_prime.basis().row_vecs();
    for (k, block) in al.blocks.iter().enumerate() {
        for pos in 1..block.len() {
            stack.push(match side {
                Side::E => ctx.vectors.w[k][pos].clone(),
                Side::ETilde => vec_sub(&ctx.vectors.u[k][pos], &ctx.vectors.u[k][0]),
            });
        }
    }
    let stack_coords = SublatticeCoords::new(&IntMatrix::from_rows(&stack, ctx.dim))?;
    let lift = ann
        .row_vecs()
        .iter()
        .map(|b| {
            let c = stack_coords
                .coords(&ctx.aux.to_prime(b))
                .ok_or_else(|| internal("Ann(e) is not contained in Ann(e)'"))?;
            to_i64(&c)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut equations = Vec::with_capacity(summands.len());
    let mut faces = Vec::with_capacity(summands.len());
    for e in summands {
        let support: Vec<&IntVec> = ctx.slice_points.iter().filter(|v| dot(v, e) == BigInt::from(1)).collect();
        let base = *support.first().ok_or_else(|| internal("empty slice for a summand"))?;
        let mut h = LaurentPoly::zero(&f, d);
        let mut face = Vec::with_capacity(support.len());
        for v in support {
            let diff = vec_sub(v, base);
            let c = coords.coords(&diff).ok_or_else(|| internal("slice difference outside Ann(e)"))?;
            let value = bridge.coefficients.value(v).ok_or_else(|| internal("missing coefficient"))?;
            h.add_term(to_i64(&c)?, *value);
            face.push(diff);
        }
        equations.push(h);
        faces.push(face);
    }
    let jacobian = equations.iter().map(|h| (0..d).map(|j| h.log_derivative(j)).collect()).collect();
    let projection = ctx
        .ann_e_etilde
        .row_vecs()
        .iter()
        .map(|m| to_i64(&coords.coords(m).ok_or_else(|| internal("Ann(e, e_tilde) is not inside Ann(e)"))?))
        .collect::<Result<Vec<_>>>()?;
    Ok(SideData { lift, equations, jacobian, projection, faces })
}

fn monomial(f: &PrimeField, point: &[u64], exp: &[i64]) -> Option<u64> {
    point.iter().zip(exp).try_fold(1u64, |acc, (x, &k)| Some(f.mul(&acc, &f.pow(x, k)?)))
}

impl<'a> Verifier<'a> {
    pub fn new(bridge: &'a BridgeData<PrimeField>) -> Result<Self> {
        let field = bridge.coefficients.field;
        let sides = [side_data(bridge, Side::E)?, side_data(bridge, Side::ETilde)?];
        let active = (0..bridge.determinants.len()).filter(|&k| !bridge.determinants[k].is_zero()).collect();
        Ok(Verifier { bridge, field, sides, active })
    }

    fn data(&self, side: Side) -> &SideData {
        match side {
            Side::E => &self.sides[0],
            Side::ETilde => &self.sides[1],
        }
    }

    pub fn rank(&self) -> usize {
        self.bridge.context.rank()
    }

    fn eval_matrix(&self, k: usize, y: &[u64]) -> Result<Vec<Vec<u64>>> {
        self.bridge.matrices[k]
            .iter()
            .map(|row| row.iter().map(|p| p.eval(y).ok_or(Error::OffTorus)).collect())
            .collect()
    }

    /// Reconstructs the fiber over `y` from block kernels of `A_k(y)`.
    pub fn fiber(&self, y: &[u64], side: Side) -> Result<Fiber> {
        if y.len() != self.rank() {
            return Err(Error::Dimension(format!("point has {} coordinates, expected {}", y.len(), self.rank())));
        }
        if y.iter().any(|&x| x % self.field.modulus() == 0) {
            return Err(Error::OffTorus);
        }
        let f = &self.field;
        let mut kernel_dims = Vec::new();
        let mut extra = Vec::new();
        let mut on_torus = true;
        for (k, block) in self.bridge.context.alignment.blocks.iter().enumerate() {
            let n = block.len();
            let a = self.eval_matrix(k, y)?;
            let ker = match side {
                Side::E => nullspace_mod_p(f, &a, n),
                Side::ETilde => nullspace_mod_p(f, &transpose(&a, n), n),
            };
            kernel_dims.push(ker.len());
            if ker.len() != 1 {
                continue;
            }
            let v = &ker[0];
            match f.inv(&v[0]) {
                Some(inv) => {
                    let normalized: Vec<u64> = v.iter().map(|x| f.mul(x, &inv)).collect();
                    on_torus &= normalized.iter().all(|&x| x != 0);
                    extra.extend_from_slice(&normalized[1..]);
                }
                None => on_torus = false,
            }
        }
        let non_generic = kernel_dims.iter().any(|&d| d >= 2);
        if non_generic || kernel_dims.iter().any(|&d| d == 0) || !on_torus {
            return Ok(Fiber { kernel_dims, non_generic, points: Vec::new() });
        }
        let prime_point: Vec<u64> = y.iter().copied().chain(extra).collect();
        let data = self.data(side);
        let x: Vec<u64> = data
            .lift
            .iter()
            .map(|exp| monomial(f, &prime_point, exp).ok_or_else(|| internal("zero coordinate on the X' torus")))
            .collect::<Result<_>>()?;
        let points: BTreeSet<Vec<u64>> = std::iter::once(x).collect();
        Ok(Fiber { kernel_dims, non_generic, points: points.into_iter().collect() })
    }

    /// Whether all defining equations vanish at `x`.
    pub fn satisfies_equations(&self, x: &[u64], side: Side) -> bool {
        self.data(side).equations.iter().all(|h| h.eval(x) == Some(0))
    }

    /// Restriction of `x` to `Ann(e, e_tilde)`.
    pub fn project(&self, x: &[u64], side: Side) -> Option<Vec<u64>> {
        self.data(side).projection.iter().map(|exp| monomial(&self.field, x, exp)).collect()
    }

    /// Rank of the logarithmic Jacobian of the defining equations at `x` equals `s`.
    pub fn delta_regular_at(&self, x: &[u64], side: Side) -> bool {
        let data = self.data(side);
        let d = x.len();
        let rows: Option<Vec<Vec<u64>>> =
            data.jacobian.iter().map(|row| row.iter().map(|p| p.eval(x)).collect()).collect();
        match rows {
            Some(m) => rank_mod_p(&self.field, &m, d) == data.equations.len(),
            None => false,
        }
    }

    /// Subsets of summands whose faces span a space of dimension at most their count.
    pub fn two_independence_violations(&self, side: Side) -> Vec<(Vec<usize>, usize)> {
        let faces = &self.data(side).faces;
        let s = faces.len();
        let dim = self.bridge.context.dim;
        if s > 16 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for mask in 1usize..(1 << s) {
            let subset: Vec<usize> = (0..s).filter(|i| mask & (1 << i) != 0).collect();
            let rows: Vec<IntVec> = subset.iter().flat_map(|&i| faces[i].iter().cloned()).collect();
            let rank = rank_of_rows(&rows, dim);
            if rank <= subset.len() {
                out.push((subset.iter().map(|i| i + 1).collect(), rank));
            }
        }
        out
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> Vec<u64> {
        (0..self.rank()).map(|_| self.field.random_nonzero(rng)).collect()
    }

    fn on_d(&self, y: &[u64]) -> bool {
        self.active.iter().all(|&k| self.bridge.determinants[k].eval(y) == Some(0))
    }

    /// One point of `D` with all coordinates nonzero, and the attempts used.
    fn sample_one(&self, rng: &mut ChaCha8Rng) -> (Option<Vec<u64>>, usize) {
        let dets: Vec<&LaurentPoly<PrimeField>> = self.active.iter().map(|&k| &self.bridge.determinants[k]).collect();
        if dets.is_empty() {
            return (Some(self.random_point(rng)), 1);
        }
        let vars: Vec<usize> = (0..self.rank())
            .filter(|&j| dets.iter().any(|d| d.exponent_range().map_or(false, |(lo, hi)| lo[j] != hi[j])))
            .collect();
        if vars.is_empty() {
            return (None, 0);
        }
        if dets.len() == 1 || vars.len() == 1 {
            for attempt in 1..=UNIVARIATE_ATTEMPTS {
                if let Some(y) = self.univariate_attempt(dets[0], &vars, rng) {
                    if self.on_d(&y) {
                        return (Some(y), attempt);
                    }
                }
            }
            return (None, UNIVARIATE_ATTEMPTS);
        }
        for attempt in 1..=BIVARIATE_ATTEMPTS {
            if let Some(y) = self.bivariate_attempt(dets[0], dets[1], &vars, rng) {
                if self.on_d(&y) {
                    return (Some(y), attempt);
                }
            }
        }
        (None, BIVARIATE_ATTEMPTS)
    }

    fn univariate_attempt(&self, det: &LaurentPoly<PrimeField>, vars: &[usize], rng: &mut ChaCha8Rng) -> Option<Vec<u64>> {
        let f = &self.field;
        let own: Vec<usize> =
            vars.iter().copied().filter(|&j| det.exponent_range().map_or(false, |(lo, hi)| lo[j] != hi[j])).collect();
        let j = own[rng.gen_range(0..own.len())];
        let mut y = self.random_point(rng);
        let fixed: Vec<(usize, u64)> = (0..y.len()).filter(|&i| i != j).map(|i| (i, y[i])).collect();
        let uni = det.specialize(&fixed)?;
        let p = dense(f, uni.terms().iter().map(|(e, c)| (e[0], *c)));
        let roots = nonzero_roots(f, &p);
        if roots.is_empty() {
            return None;
        }
        y[j] = roots[rng.gen_range(0..roots.len())];
        Some(y)
    }

    fn bivariate_attempt(
        &self,
        d1: &LaurentPoly<PrimeField>,
        d2: &LaurentPoly<PrimeField>,
        vars: &[usize],
        rng: &mut ChaCha8Rng,
    ) -> Option<Vec<u64>> {
        let f = &self.field;
        let a = vars[rng.gen_range(0..vars.len())];
        let mut b = vars[rng.gen_range(0..vars.len() - 1)];
        if b >= a {
            b = vars[vars.iter().position(|&v| v == b).unwrap() + 1];
        }
        let mut y = self.random_point(rng);
        let fixed: Vec<(usize, u64)> = (0..y.len()).filter(|&i| i != a && i != b).map(|i| (i, y[i])).collect();
        // specialize keeps the two free variables in increasing order
        let (ia, ib) = if a < b { (0, 1) } else { (1, 0) };
        let p1 = d1.specialize(&fixed)?;
        let p2 = d2.specialize(&fixed)?;
        let p = f.modulus();
        let start = rng.gen_range(1..p);
        for step in 0..p - 1 {
            let ta = (start - 1 + step) % (p - 1) + 1;
            let restrict = |q: &LaurentPoly<PrimeField>| -> Option<Vec<u64>> {
                let terms: Option<Vec<(i64, u64)>> =
                    q.terms().iter().map(|(e, c)| Some((e[ib], f.mul(c, &f.pow(&ta, e[ia])?)))).collect();
                Some(dense(f, terms?.into_iter()))
            };
            let g = poly_gcd(f, &restrict(&p1)?, &restrict(&p2)?);
            let roots = nonzero_roots(f, &g);
            if !roots.is_empty() {
                y[a] = ta;
                y[b] = roots[rng.gen_range(0..roots.len())];
                return Some(y);
            }
        }
        None
    }

    /// Up to `count` points of `D`; entry `i` is drawn from the stream seeded by `seed ^ i`.
    pub fn sample_determinantal_points(&self, count: usize, seed: u64) -> Vec<(usize, Option<Vec<u64>>)> {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i as u64);
                let (y, attempts) = self.sample_one(&mut rng);
                (attempts, y)
            })
            .collect()
    }
}

/// Samples `D`, reconstructs fibers on both sides and aggregates the statistics.
pub fn birationality_evidence(bridge: &BridgeData<PrimeField>, count: usize, seed: u64) -> Result<EvidenceReport> {
    let prime = bridge.coefficients.field.modulus();
    if prime < MIN_PRIME {
        return Err(Error::Input(format!("prime must be at least {MIN_PRIME}")));
    }
    let v = Verifier::new(bridge)?;
    let mut warnings = Vec::new();
    for (k, d) in bridge.determinants.iter().enumerate() {
        if d.is_zero() {
            warnings.push(format!(
                "det A_{} vanishes identically for these coefficients; D has excess dimension",
                k + 1
            ));
        }
    }
    for (side, name) in [(Side::E, "e"), (Side::ETilde, "e_tilde")] {
        if let Some((subset, rank)) = v.two_independence_violations(side).first() {
            warnings.push(format!(
                "nef-partition of {name} is not 2-independent: parts {subset:?} span dimension {rank}"
            ));
        }
    }

    let drawn = v.sample_determinantal_points(count, seed);
    let samples: Vec<SamplePoint> = drawn
        .into_par_iter()
        .enumerate()
        .filter_map(|(index, (attempts, y))| y.map(|y| (index, attempts, y)))
        .map(|(index, attempts, y)| {
            Ok(SamplePoint {
                index,
                attempts,
                fiber_e: v.fiber(&y, Side::E)?,
                fiber_etilde: v.fiber(&y, Side::ETilde)?,
                y,
            })
        })
        .collect::<Result<_>>()?;

    let mut report = EvidenceReport {
        prime,
        seed,
        samples_requested: count,
        samples_on_d: samples.len(),
        sampling_failures: count - samples.len(),
        fiber_histogram_e: BTreeMap::new(),
        fiber_histogram_etilde: BTreeMap::new(),
        single_point_both_sides: 0,
        generic_samples: 0,
        birational_evidence: false,
        fiber_points_checked: 0,
        equation_failures: 0,
        projection_failures: 0,
        delta_regularity_e: DeltaRegularity::new(0, 0),
        delta_regularity_etilde: DeltaRegularity::new(0, 0),
        delta_regular_pass_rate: 0.0,
        warnings,
        caveats: vec![
            "irreducibility of X_(e), X_(e_tilde) and D and dim D = dim X are sampled, not proven".into(),
            "fiber counts over F_p may differ from the geometric generic fiber on thin sets".into(),
        ],
        samples: Vec::new(),
    };
    let mut regular = [(0usize, 0usize); 2];
    for sp in &samples {
        *report.fiber_histogram_e.entry(sp.fiber_e.bucket()).or_default() += 1;
        *report.fiber_histogram_etilde.entry(sp.fiber_etilde.bucket()).or_default() += 1;
        if !sp.fiber_e.non_generic && !sp.fiber_etilde.non_generic {
            report.generic_samples += 1;
            if sp.fiber_e.points.len() == 1 && sp.fiber_etilde.points.len() == 1 {
                report.single_point_both_sides += 1;
            }
        }
        for (slot, (side, fiber)) in [(Side::E, &sp.fiber_e), (Side::ETilde, &sp.fiber_etilde)].into_iter().enumerate() {
            for x in &fiber.points {
                report.fiber_points_checked += 1;
                if !v.satisfies_equations(x, side) {
                    report.equation_failures += 1;
                }
                if v.project(x, side).as_deref() != Some(&sp.y[..]) {
                    report.projection_failures += 1;
                }
                regular[slot].0 += 1;
                if v.delta_regular_at(x, side) {
                    regular[slot].1 += 1;
                }
            }
        }
    }
    report.delta_regularity_e = DeltaRegularity::new(regular[0].0, regular[0].1);
    report.delta_regularity_etilde = DeltaRegularity::new(regular[1].0, regular[1].1);
    report.delta_regular_pass_rate = DeltaRegularity::new(regular[0].0 + regular[1].0, regular[0].1 + regular[1].1).pass_rate;
    report.birational_evidence = report.generic_samples > 0
        && report.single_point_both_sides as f64 >= VERDICT_THRESHOLD * report.generic_samples as f64;
    if count > 0 && report.samples_on_d * 2 < count {
        report.warnings.push(format!(
            "only {} of {} samples reached D; dim D may exceed the expected d - s",
            report.samples_on_d, count
        ));
    }
    if report.samples_on_d > report.generic_samples {
        report.warnings.push(format!(
            "{} samples have a block kernel of dimension at least 2 and are excluded from the verdict",
            report.samples_on_d - report.generic_samples
        ));
    }
    report.samples = samples;
    Ok(report)
}

/// Fraction of `points` of `X_(side)` where the logarithmic Jacobian has rank `s`.
pub fn delta_regularity_probe(bridge: &BridgeData<PrimeField>, points: &[Vec<u64>], side: Side) -> Result<DeltaRegularity> {
    let v = Verifier::new(bridge)?;
    let passed = points.iter().filter(|x| v.delta_regular_at(x, side)).count();
    Ok(DeltaRegularity::new(points.len(), passed))
}

/// Single-shot fiber computation; prefer [`Verifier`] for repeated queries.
pub fn fiber(bridge: &BridgeData<PrimeField>, y: &[u64], side: Side) -> Result<Fiber> {
    Verifier::new(bridge)?.fiber(y, side)
}

#[cfg(test)]
mod tests;
