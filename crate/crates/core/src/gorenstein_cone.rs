//! Reflexive Gorenstein cone pairs, their degree slices, and the passage
//! between cone decompositions and nef-partitions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{internal, Error, Result};
use crate::lattice::{
    dot, is_primitive, kernel_basis, rank_of_rows, rational_combination, saturate, solve_linear_integer, vec_add,
    vec_sub, IntMatrix, IntVec, LatticeEmbedding, SublatticeCoords,
};
use crate::nef_partition::{pairing_minima, NefPartition};
use crate::polytope::{cone_facets, slice_hrep, Polytope, RatPoint};

/// How a cone pair was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeOrigin {
    /// Built from a nef-partition of length `s`; coordinates are `Z^s + M`.
    NefPartition { s: usize },
    /// Generators entered directly.
    Direct,
}

/// A pair of dual reflexive Gorenstein cones in basis coordinates.
#[derive(Clone, Debug)]
pub struct GorensteinConePair {
    pub lattice_bar_m: LatticeEmbedding,
    pub lattice_bar_n: LatticeEmbedding,
    pub k_generators: Vec<IntVec>,
    pub k_dual_generators: Vec<IntVec>,
    pub deg: IntVec,
    pub deg_dual: IntVec,
    pub index: usize,
    pub origin: ConeOrigin,
}

fn ones_then_zeros(s: usize, d: usize) -> IntVec {
    (0..s + d).map(|i| BigInt::from((i < s) as i64)).collect()
}

fn unit_prefix(s: usize, i: usize, tail: &[BigInt]) -> IntVec {
    let mut v: IntVec = (0..s).map(|j| BigInt::from((j == i) as i64)).collect();
    v.extend(tail.iter().cloned());
    v
}

impl GorensteinConePair {
    /// Replaces the dual generators by the same set listed in `rays` order.
    /// Decomposition enumeration follows this order.
    pub fn with_dual_order(mut self, rays: Vec<IntVec>) -> Result<Self> {
        let mut a = rays.clone();
        let mut b = self.k_dual_generators.clone();
        a.sort();
        b.sort();
        if a != b {
            return Err(Error::Input("dual generators do not match the rays of the dual cone".into()));
        }
        self.k_dual_generators = rays;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.deg.len()
    }

    /// Facet normals of `K` (a generating set of the dual cone).
    pub fn k_facets(&self) -> &[IntVec] {
        &self.k_dual_generators
    }

    /// `S = {x in K : <x, deg_dual> = 1}`.
    pub fn degree_slice(&self) -> Result<Polytope> {
        slice_hrep(&self.k_dual_generators, &[(self.deg_dual.clone(), BigInt::one())], self.dim())
    }

    /// `T = {y in K^dual : <deg, y> = 1}`.
    pub fn dual_degree_slice(&self) -> Result<Polytope> {
        slice_hrep(&self.k_generators, &[(self.deg.clone(), BigInt::one())], self.dim())
    }

    pub fn in_k(&self, x: &[BigInt]) -> bool {
        self.k_dual_generators.iter().all(|w| !dot(x, w).is_negative())
    }

    pub fn in_k_dual(&self, y: &[BigInt]) -> bool {
        self.k_generators.iter().all(|k| !dot(k, y).is_negative())
    }

    /// Builds a pair from generators of `K`; the dual cone is computed.
    pub fn from_generators(
        lattice_bar_m: LatticeEmbedding,
        lattice_bar_n: LatticeEmbedding,
        generators: Vec<IntVec>,
        deg: Option<IntVec>,
        deg_dual: Option<IntVec>,
    ) -> Result<Self> {
        let dim = lattice_bar_m.rank();
        if generators.iter().any(|g| g.len() != dim) {
            return Err(Error::Dimension(format!("cone generators must have {dim} coordinates")));
        }
        let check = check_generators(&generators, dim)?;
        if !check.reflexive_gorenstein {
            return Err(Error::Input(check.failure.unwrap_or_else(|| "cone is not reflexive Gorenstein".into())));
        }
        let found_deg = check.deg.expect("reflexive Gorenstein cones have a degree element");
        let found_dual = check.deg_dual.expect("Gorenstein cones have a dual degree element");
        if let Some(d) = &deg {
            if *d != found_deg {
                return Err(Error::Input("given deg does not match the cone".into()));
            }
        }
        if let Some(d) = &deg_dual {
            if *d != found_dual {
                return Err(Error::Input("given deg_dual does not match the cone".into()));
            }
        }
        let index = dot(&found_deg, &found_dual);
        let pair = GorensteinConePair {
            lattice_bar_m,
            lattice_bar_n,
            k_generators: generators,
            k_dual_generators: check.dual_rays,
            deg: found_deg,
            deg_dual: found_dual,
            index: usize::try_from(index).map_err(|_| internal("index out of range"))?,
            origin: ConeOrigin::Direct,
        };
        let (ok, _) = verify_reflexive_gorenstein(&pair);
        if !ok {
            return Err(internal("constructed cone pair fails verification"));
        }
        Ok(pair)
    }
}

/// The cone `Z_{>=0}^{nt} ∩ M` with `M = {x : block sums agree}`; its rays are
/// the `n^t` sums `u_{i_1} + ... + u_{i_t}` with one unit vector per block.
pub fn product_projective(n: usize, t: usize) -> Result<GorensteinConePair> {
    if n == 0 || t == 0 {
        return Err(Error::Input("product-projective needs n >= 1 and t >= 1".into()));
    }
    let amb = n * t;
    let equations: Vec<IntVec> = (1..t)
        .map(|j| {
            (0..amb)
                .map(|c| {
                    let b = c / n;
                    BigInt::from(if b == 0 { 1 } else if b == j { -1 } else { 0 })
                })
                .collect()
        })
        .collect();
    let eq = IntMatrix::from_rows(&equations, amb);
    let pairing = crate::lattice::DualPairing::kernel_and_quotient(eq)?;
    let m = pairing.primal;
    let nn = pairing.dual;
    let mut gens = Vec::with_capacity(n.pow(t as u32));
    let mut tuple = vec![0usize; t];
    loop {
        let mut x = vec![BigInt::zero(); amb];
        for (b, &i) in tuple.iter().enumerate() {
            x[b * n + i] = BigInt::one();
        }
        gens.push(m.to_coords(&x).ok_or_else(|| internal("generator outside the lattice"))?);
        let Some(pos) = (0..t).rev().find(|&b| tuple[b] + 1 < n) else { break };
        tuple[pos] += 1;
        for slot in tuple.iter_mut().skip(pos + 1) {
            *slot = 0;
        }
    }
    let deg = m.to_coords(&vec![BigInt::one(); amb]).ok_or_else(|| internal("deg outside the lattice"))?;
    let dual_amb: IntVec = (0..amb).map(|c| BigInt::from((c < n) as i64)).collect();
    let deg_dual = nn.to_coords(&dual_amb).ok_or_else(|| internal("deg_dual outside the lattice"))?;
    let pair = GorensteinConePair::from_generators(m, nn, gens, Some(deg), Some(deg_dual))?;
    // list the dual rays as the images of v_1, ..., v_nt
    let images: Vec<IntVec> = (0..amb)
        .map(|c| {
            let v: IntVec = (0..amb).map(|j| BigInt::from((j == c) as i64)).collect();
            pair.lattice_bar_n.to_coords(&v).ok_or_else(|| internal("unit vector has no image"))
        })
        .collect::<Result<_>>()?;
    pair.with_dual_order(images)
}

/// Result of testing a generator list for the reflexive Gorenstein property.
#[derive(Clone, Debug)]
pub struct GeneratorCheck {
    pub gorenstein: bool,
    pub reflexive_gorenstein: bool,
    pub deg_dual: Option<IntVec>,
    pub deg: Option<IntVec>,
    pub index: Option<BigInt>,
    pub dual_rays: Vec<IntVec>,
    pub failure: Option<String>,
}

/// Tests whether `cone(generators)` is a full-dimensional reflexive Gorenstein cone.
pub fn check_generators(generators: &[IntVec], dim: usize) -> Result<GeneratorCheck> {
    let mut out = GeneratorCheck {
        gorenstein: false,
        reflexive_gorenstein: false,
        deg_dual: None,
        deg: None,
        index: None,
        dual_rays: Vec::new(),
        failure: None,
    };
    if rank_of_rows(generators, dim) < dim {
        out.failure = Some("cone is not full-dimensional".into());
        return Ok(out);
    }
    let ones = vec![BigInt::one(); generators.len()];
    let g = IntMatrix::from_rows(generators, dim);
    match solve_linear_integer(&g, &ones) {
        Some(dd) => {
            out.gorenstein = true;
            out.deg_dual = Some(dd);
        }
        None => {
            out.failure = Some("generators do not lie on an integral degree-1 hyperplane".into());
            return Ok(out);
        }
    }
    let rays = cone_facets(generators, dim)?;
    let ones = vec![BigInt::one(); rays.len()];
    let r = IntMatrix::from_rows(&rays, dim);
    out.dual_rays = rays;
    match solve_linear_integer(&r, &ones) {
        Some(deg) => {
            out.index = Some(dot(&deg, out.deg_dual.as_ref().unwrap()));
            out.deg = Some(deg);
            out.reflexive_gorenstein = true;
        }
        None => out.failure = Some("dual cone is not Gorenstein".into()),
    }
    Ok(out)
}

/// Cone of a nef-partition: generators `(delta_i; v)` for vertices `v` of each
/// part, together with `(delta_i; 0)` when `s >= 2`.
pub fn build_cone(np: &NefPartition) -> Result<GorensteinConePair> {
    let s = np.len();
    let d = np.dim();
    if !np.sum().origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let mut gens = Vec::new();
    for (i, p) in np.parts().iter().enumerate() {
        for v in p.integral_vertices().ok_or_else(|| internal("nef-partition part is not a lattice polytope"))? {
            gens.push(unit_prefix(s, i, &v));
        }
        // (delta_i; 0) is a boundary point of K once s >= 2; for s = 1 it is deg itself
        let origin = unit_prefix(s, i, &vec![BigInt::zero(); d]);
        if s >= 2 && !gens.contains(&origin) {
            gens.push(origin);
        }
    }
    let pair = GorensteinConePair {
        lattice_bar_m: LatticeEmbedding::full(s + d),
        lattice_bar_n: LatticeEmbedding::full(s + d),
        k_generators: gens,
        k_dual_generators: dual_generators(np)?,
        deg: ones_then_zeros(s, d),
        deg_dual: ones_then_zeros(s, d),
        index: s,
        origin: ConeOrigin::NefPartition { s },
    };
    let (ok, idx) = verify_reflexive_gorenstein(&pair);
    if !ok || idx != BigInt::from(s) {
        return Err(internal("cone of a nef-partition fails the reflexive Gorenstein check"));
    }
    Ok(pair)
}

/// `{(m_1j, ..., m_sj; w_j) : w_j vertex of the dual of the sum} + {(delta_i; 0)}`.
pub fn dual_generators(np: &NefPartition) -> Result<Vec<IntVec>> {
    let s = np.len();
    let d = np.dim();
    let nabla = np.sum().dual()?;
    let mut out = Vec::new();
    for w in nabla.integral_vertices().ok_or(Error::SumNotReflexive)? {
        let mut g = pairing_minima(np, &w);
        g.extend(w);
        out.push(g);
    }
    for i in 0..s {
        out.push(unit_prefix(s, i, &vec![BigInt::zero(); d]));
    }
    out.dedup();
    Ok(out)
}

/// Returns whether both generator families lie on their degree-1 hyperplanes,
/// pair nonnegatively, the degree elements are interior, and the dual cone of
/// `K` is generated at height one; together with `<deg, deg_dual>`.
pub fn verify_reflexive_gorenstein(pair: &GorensteinConePair) -> (bool, BigInt) {
    let dim = pair.dim();
    let index = dot(&pair.deg, &pair.deg_dual);
    let one = BigInt::one();
    let ok = rank_of_rows(&pair.k_generators, dim) == dim
        && rank_of_rows(&pair.k_dual_generators, dim) == dim
        && pair.k_generators.iter().all(|k| dot(k, &pair.deg_dual) == one)
        && pair.k_dual_generators.iter().all(|w| dot(&pair.deg, w) == one)
        && pair.k_generators.iter().all(|k| pair.k_dual_generators.iter().all(|w| !dot(k, w).is_negative()))
        && match cone_facets(&pair.k_generators, dim) {
            // every extreme ray of the true dual cone sits at height one and is listed
            Ok(rays) => rays.iter().all(|r| dot(&pair.deg, r) == one && pair.k_dual_generators.contains(r)),
            Err(_) => false,
        };
    (ok, index)
}

/// Tests the generator list of a cone that may fail to be reflexive Gorenstein.
pub fn verify_generators(generators: &[IntVec], dim: usize) -> (bool, Option<BigInt>) {
    match check_generators(generators, dim) {
        Ok(c) => (c.reflexive_gorenstein, c.index),
        Err(_) => (false, None),
    }
}

/// Checks the constraints on a decomposition `deg_dual = sum e_tilde_i`.
pub fn validate_decomposition(pair: &GorensteinConePair, e_tilde: &[IntVec]) -> Result<()> {
    if e_tilde.len() != pair.index {
        return Err(Error::InvalidDecomposition(format!("expected {} summands, got {}", pair.index, e_tilde.len())));
    }
    let dim = pair.dim();
    let mut total = vec![BigInt::zero(); dim];
    for (i, e) in e_tilde.iter().enumerate() {
        if e.len() != dim {
            return Err(Error::InvalidDecomposition(format!("summand {} has wrong length", i + 1)));
        }
        if e.iter().all(Zero::is_zero) {
            return Err(Error::InvalidDecomposition(format!("summand {} is zero", i + 1)));
        }
        if !pair.in_k_dual(e) {
            return Err(Error::InvalidDecomposition(format!("summand {} is not in the dual cone", i + 1)));
        }
        total = vec_add(&total, e);
    }
    if total != pair.deg_dual {
        return Err(Error::InvalidDecomposition("summands do not add up to deg_dual".into()));
    }
    Ok(())
}

/// Vertices of `S~_i`: generators of `K` pairing to 1 with `e_tilde_i`.
pub fn face_generators(pair: &GorensteinConePair, e: &[BigInt]) -> Vec<IntVec> {
    pair.k_generators.iter().filter(|k| dot(k, e).is_one()).cloned().collect()
}

/// Coordinates on `Ann(e_tilde)` together with base points `t_i in S~_i`
/// adding up to `deg`.
#[derive(Clone, Debug)]
pub struct AnnihilatorChart {
    /// `None` for nef-partition cones, where the chart drops the first `s` coordinates.
    coords: Option<SublatticeCoords>,
    s: usize,
    pub base_points: Vec<IntVec>,
}

impl AnnihilatorChart {
    pub fn new(pair: &GorensteinConePair, e_tilde: &[IntVec]) -> Result<Self> {
        let s = pair.index;
        let dim = pair.dim();
        match pair.origin {
            ConeOrigin::NefPartition { .. } => {
                // each summand is (delta_sigma(i); p_i) for a permutation sigma
                let mut slots = Vec::with_capacity(s);
                for (i, e) in e_tilde.iter().enumerate() {
                    let ones: Vec<usize> = (0..s).filter(|&j| e[j].is_one()).collect();
                    let rest_zero = (0..s).filter(|j| !ones.contains(j)).all(|j| e[j].is_zero());
                    if ones.len() != 1 || !rest_zero || slots.contains(&ones[0]) {
                        return Err(Error::InvalidDecomposition(format!(
                            "summand {} is not of the form (delta_j; p) with distinct j",
                            i + 1
                        )));
                    }
                    slots.push(ones[0]);
                }
                let base = slots.iter().map(|&j| unit_prefix(s, j, &vec![BigInt::zero(); dim - s])).collect();
                Ok(AnnihilatorChart { coords: None, s, base_points: base })
            }
            ConeOrigin::Direct => {
                let ann = kernel_basis(&IntMatrix::from_rows(e_tilde, dim));
                let coords = SublatticeCoords::new(&ann)?;
                let faces: Vec<Vec<IntVec>> = e_tilde
                    .iter()
                    .map(|e| {
                        let f = face_generators(pair, e);
                        let p = Polytope::from_points(dim, &f)?;
                        p.lattice_points()
                    })
                    .collect::<Result<_>>()?;
                let base = split_degree(pair, &faces)
                    .ok_or_else(|| Error::InvalidDecomposition("deg is not a sum of lattice points of the faces".into()))?;
                Ok(AnnihilatorChart { coords: Some(coords), s, base_points: base })
            }
        }
    }

    pub fn rank(&self, dim: usize) -> usize {
        match &self.coords {
            None => dim - self.s,
            Some(c) => c.rank(),
        }
    }

    /// Coordinates of a point of `Ann(e_tilde)`.
    pub fn chart(&self, x: &[BigInt]) -> Result<IntVec> {
        match &self.coords {
            None => Ok(x[self.s..].to_vec()),
            Some(c) => c.coords(x).ok_or_else(|| internal("point is not in the annihilator")),
        }
    }
}

fn split_degree(pair: &GorensteinConePair, faces: &[Vec<IntVec>]) -> Option<Vec<IntVec>> {
    fn go(pair: &GorensteinConePair, faces: &[Vec<IntVec>], i: usize, rem: &IntVec, acc: &mut Vec<IntVec>) -> bool {
        if i == faces.len() {
            return rem.iter().all(Zero::is_zero);
        }
        for t in &faces[i] {
            let next = vec_sub(rem, t);
            if i + 1 < faces.len() && !pair.in_k(&next) {
                continue;
            }
            acc.push(t.clone());
            if go(pair, faces, i + 1, &next, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = Vec::new();
    go(pair, faces, 0, &pair.deg, &mut acc).then_some(acc)
}

/// The nef-partition `Delta~_i = phi(S~_i - t_i)` of a decomposition.
pub fn cone_to_nef_partition(pair: &GorensteinConePair, e_tilde: &[IntVec]) -> Result<Vec<Polytope>> {
    validate_decomposition(pair, e_tilde)?;
    let chart = AnnihilatorChart::new(pair, e_tilde)?;
    let dim = pair.dim();
    let rank = chart.rank(dim);
    let mut parts = Vec::with_capacity(e_tilde.len());
    for (i, e) in e_tilde.iter().enumerate() {
        let gens = face_generators(pair, e);
        if gens.is_empty() {
            return Err(Error::InvalidDecomposition(format!("face for summand {} is empty", i + 1)));
        }
        let pts: Vec<IntVec> =
            gens.iter().map(|g| chart.chart(&vec_sub(g, &chart.base_points[i]))).collect::<Result<_>>()?;
        let p = Polytope::from_points(rank, &pts)?;
        if !p.contains_origin() {
            return Err(internal(format!("part {} does not contain the origin", i + 1)));
        }
        parts.push(p);
    }
    let report = polar_sum_check(pair, e_tilde)?;
    if !report.reflexive {
        return Err(internal("sum of the recovered parts is not reflexive"));
    }
    Ok(parts)
}

/// Outcome of checking that `sum S~_i - deg` is reflexive with dual `T-bar`.
#[derive(Clone, Debug, Serialize)]
pub struct PolarSumReport {
    pub reflexive: bool,
    pub tbar_vertices: usize,
    pub tbar_facets: usize,
    pub failure: Option<String>,
}

/// Verifies that `P = sum S~_i - deg` equals the polar of `T-bar`, the image
/// of `T` in `N-bar / span(e_tilde)`, without enumerating `P`:
/// `P` lies in the polar by checking every vertex of `T-bar`, and each vertex
/// of the polar is reached by minimizing over `P` in the direction of the
/// barycenter of its facet.
pub fn polar_sum_check(pair: &GorensteinConePair, e_tilde: &[IntVec]) -> Result<PolarSumReport> {
    let dim = pair.dim();
    let ann = kernel_basis(&IntMatrix::from_rows(e_tilde, dim));
    let faces: Vec<Vec<IntVec>> = e_tilde.iter().map(|e| face_generators(pair, e)).collect();
    let mut report = PolarSumReport { reflexive: false, tbar_vertices: 0, tbar_facets: 0, failure: None };
    if faces.iter().any(Vec::is_empty) {
        report.failure = Some("some face S~_i is empty".into());
        return Ok(report);
    }
    let t_vertices = pair.dual_degree_slice()?.integral_vertices().ok_or_else(|| internal("T has a fractional vertex"))?;
    let images: Vec<IntVec> = t_vertices.iter().map(|t| ann.mul_vec(t)).collect();
    let tbar = Polytope::from_points(ann.nrows(), &images)?;
    report.tbar_vertices = tbar.vertices().len();
    if !tbar.origin_interior() {
        report.failure = Some("T-bar does not contain the origin in its interior".into());
        return Ok(report);
    }
    let value = |y: &IntVec| -> BigInt {
        let mut total = -dot(&pair.deg, y);
        for f in &faces {
            total += f.iter().map(|v| dot(v, y)).min().expect("faces are non-empty");
        }
        total
    };
    // lift each vertex of T-bar to a vertex of T
    let lift = |img: &RatPoint| -> IntVec {
        let idx = images.iter().position(|x| *x == img.num).expect("vertices of T-bar are images of vertices of T");
        t_vertices[idx].clone()
    };
    for v in tbar.vertices() {
        if value(&lift(v)) < -BigInt::one() {
            report.failure = Some("sum S~_i - deg leaves the polar of T-bar".into());
            return Ok(report);
        }
    }
    let facets = tbar.facets()?.to_vec();
    report.tbar_facets = facets.len();
    for f in &facets {
        if !f.offset.is_one() {
            report.failure = Some("T-bar is not reflexive".into());
            return Ok(report);
        }
        let on: Vec<IntVec> = tbar.vertices().iter().filter(|v| f.slack(v).is_zero()).map(lift).collect();
        let bary = on.iter().fold(vec![BigInt::zero(); dim], |acc, t| vec_add(&acc, t));
        if value(&bary) != -BigInt::from(on.len()) {
            report.failure = Some("a vertex of the polar of T-bar is missing from sum S~_i - deg".into());
            return Ok(report);
        }
    }
    report.reflexive = true;
    Ok(report)
}

/// A cone of a fan with its singularity type.
#[derive(Clone, Debug, Serialize)]
pub struct FanCone {
    pub generators: Vec<IntVec>,
    pub classification: Classification,
    pub gorenstein_functional: Option<IntVec>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub gorenstein: bool,
    pub canonical: bool,
    pub terminal: bool,
    pub smooth: bool,
}

pub fn classify_singularity(generators: &[IntVec]) -> Result<FanCone> {
    let dim = generators.first().map(Vec::len).ok_or(Error::Empty)?;
    for (i, g) in generators.iter().enumerate() {
        if !is_primitive(g) {
            return Err(Error::NonPrimitive { index: i + 1 });
        }
    }
    let gm = IntMatrix::from_rows(generators, dim);
    let ones = vec![BigInt::one(); generators.len()];
    let k_int = solve_linear_integer(&gm, &ones);
    let mut cls = Classification { gorenstein: k_int.is_some(), ..Default::default() };
    let rank = gm.rank();
    cls.smooth = rank == generators.len() && saturate(&gm).map(|(_, idx)| idx.is_one()).unwrap_or(false);

    if let Some(k) = rational_solution(&gm) {
        // lattice points of conv(0, generators) lie at level <= 1
        let mut pts = generators.to_vec();
        pts.push(vec![BigInt::zero(); dim]);
        let q = Polytope::from_points(dim, &pts)?;
        let lat = q.lattice_points()?;
        let level = |y: &IntVec| -> BigRational {
            y.iter().zip(&k).map(|(a, b)| BigRational::from_integer(a.clone()) * b).sum()
        };
        let one = BigRational::one();
        cls.canonical = lat.iter().all(|y| y.iter().all(Zero::is_zero) || level(y) >= one);
        cls.terminal = cls.canonical
            && lat.iter().all(|y| y.iter().all(Zero::is_zero) || generators.contains(y));
    }
    Ok(FanCone { generators: generators.to_vec(), classification: cls, gorenstein_functional: k_int })
}

fn rational_solution(gm: &IntMatrix) -> Option<Vec<BigRational>> {
    let ones = vec![BigInt::one(); gm.nrows()];
    rational_combination(&gm.transpose().row_vecs(), &ones)
}

/// Proper faces of a polytope as sorted vertex index sets.
pub fn faces(p: &Polytope) -> Result<Vec<Vec<usize>>> {
    let facets = p.facets()?;
    let verts = p.vertices();
    let mut found: Vec<Vec<usize>> = facets
        .iter()
        .map(|f| (0..verts.len()).filter(|&i| f.slack(&verts[i]).is_zero()).collect())
        .collect();
    found.sort();
    found.dedup();
    let mut frontier = found.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in &found {
                let c: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
                if !c.is_empty() && !found.contains(&c) && !next.contains(&c) {
                    next.push(c);
                }
            }
        }
        found.extend(next.iter().cloned());
        frontier = next;
    }
    found.sort();
    Ok(found)
}

/// Cones over the proper faces of a polytope containing the origin in its interior.
pub fn face_fan(p: &Polytope) -> Result<Vec<FanCone>> {
    let verts = p.integral_vertices().ok_or_else(|| Error::Input("polytope has fractional vertices".into()))?;
    faces(p)?
        .into_iter()
        .map(|f| {
            let gens: Vec<IntVec> = f.iter().map(|&i| crate::lattice::primitive(&verts[i])).collect();
            classify_singularity(&gens)
        })
        .collect()
}
