use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{align_pair, build_auxiliary_lattice, degree_one_points, solve_bridge_vectors};
use super::{AuxiliaryLattice, BridgeVectors, PairAlignment};
use crate::error::{internal, Error, Result};
use crate::field::Field;
use crate::gorenstein_cone::GorensteinConePair;
use crate::laurent::{det_cofactor, det_leibniz, Exponent, LaurentPoly};
use crate::lattice::{dot, kernel_basis, vec_sub, IntMatrix, IntVec, SublatticeCoords};

/// Coefficients `c_v` indexed by the lattice points of `S`, shared by every
/// polynomial that uses the point.
#[derive(Clone, Debug)]
pub struct CoefficientAssignment<F: Field> {
    pub field: F,
    pub seed: Option<u64>,
    pub points: Vec<IntVec>,
    pub values: Vec<F::Elem>,
    index: HashMap<IntVec, usize>,
}

impl<F: Field> CoefficientAssignment<F> {
    /// Random nonzero values drawn in point order from a seeded ChaCha8 stream.
    pub fn random(field: &F, points: Vec<IntVec>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = points.iter().map(|_| field.random_nonzero(&mut rng)).collect();
        Self::build(field, points, values, Some(seed))
    }

    pub fn from_values(field: &F, points: Vec<IntVec>, values: Vec<F::Elem>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::Input("one coefficient per slice point is required".into()));
        }
        if values.iter().any(|v| field.is_zero(v)) {
            return Err(Error::Input("coefficients must be nonzero".into()));
        }
        Ok(Self::build(field, points, values, None))
    }

    fn build(field: &F, points: Vec<IntVec>, values: Vec<F::Elem>, seed: Option<u64>) -> Self {
        let index = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        CoefficientAssignment { field: field.clone(), seed, points, values, index }
    }

    pub fn value(&self, v: &[BigInt]) -> Option<&F::Elem> {
        self.index.get(v).map(|&i| &self.values[i])
    }

    /// Overrides the value at one slice point.
    pub fn set(&mut self, v: &[BigInt], value: F::Elem) -> Result<()> {
        if self.field.is_zero(&value) {
            return Err(Error::Input("coefficients must be nonzero".into()));
        }
        let i = *self.index.get(v).ok_or_else(|| Error::Input(format!("{v:?} is not a lattice point of S")))?;
        self.values[i] = value;
        Ok(())
    }
}

/// Field-independent data of a bridge between two decompositions.
#[derive(Clone, Debug)]
pub struct BridgeContext {
    pub dim: usize,
    pub alignment: PairAlignment,
    pub aux: AuxiliaryLattice,
    /// Rows `e_1..e_s, e_tilde_1..e_tilde_s` in coordinates of `N-bar'`.
    pub constraints: IntMatrix,
    /// `Ann(e, e_tilde)` inside the dual of `N-bar'`.
    pub ann_prime: SublatticeCoords,
    /// The same lattice inside `M-bar`.
    pub ann_e_etilde: IntMatrix,
    pub vectors: BridgeVectors,
    pub slice_points: Vec<IntVec>,
    pub slice_points_prime: Vec<IntVec>,
    /// `cells[i][j]`: indices of the lattice points of `S_{i,j}`.
    pub cells: Vec<Vec<Vec<usize>>>,
}

impl BridgeContext {
    pub fn s(&self) -> usize {
        self.alignment.s()
    }

    pub fn r(&self) -> usize {
        self.alignment.r()
    }

    /// Rank of `Ann(e, e_tilde)`: the number of torus coordinates `y`.
    pub fn rank(&self) -> usize {
        self.ann_prime.rank()
    }

    /// Coordinates in the basis of `Ann(e, e_tilde)` of an exponent given in
    /// coordinates of the dual of `N-bar'`.
    pub fn y_exponent(&self, x: &[i64]) -> Result<Exponent> {
        let big: IntVec = x.iter().map(|&v| BigInt::from(v)).collect();
        let c = self.ann_prime.coords(&big).ok_or_else(|| internal("matrix entry exponent outside Ann(e, e_tilde)"))?;
        to_i64(&c)
    }
}

pub(crate) fn to_i64(v: &[BigInt]) -> Result<Exponent> {
    v.iter().map(|x| x.to_i64().ok_or_else(|| internal("exponent does not fit in 64 bits"))).collect()
}

fn square_in(coords: &SublatticeCoords, rows: &[IntVec]) -> Result<bool> {
    let c: Vec<IntVec> = rows
        .iter()
        .map(|r| coords.coords(r).ok_or_else(|| internal("vector outside the expected annihilator")))
        .collect::<Result<_>>()?;
    if c.len() != coords.rank() {
        return Ok(false);
    }
    Ok(IntMatrix::from_rows(&c, coords.rank()).is_unimodular())
}

/// Alignment, auxiliary lattice, bridge vectors and slice cells for a pair
/// of decompositions, with the lattice decompositions of `Ann(e)'` and
/// `Ann(e_tilde)'` verified.
pub fn build_context(pair: &GorensteinConePair, e: &[IntVec], e_tilde: &[IntVec]) -> Result<BridgeContext> {
    let dim = pair.dim();
    let slice_points = degree_one_points(pair)?;
    let al = align_pair(pair, &slice_points, e, e_tilde)?;
    let s = al.s();

    let mut fixed: Vec<IntVec> = al.e.clone();
    for block in &al.blocks {
        fixed.extend(block.iter().skip(1).map(|&i| al.q[i].clone()));
    }
    let aux = build_auxiliary_lattice(&fixed, dim)?;

    let rows: Vec<IntVec> = al
        .e
        .iter()
        .chain(&al.e_tilde)
        .map(|n| aux.dual_coords(n).ok_or_else(|| internal("summand outside the auxiliary lattice")))
        .collect::<Result<_>>()?;
    let constraints = IntMatrix::from_rows(&rows, dim);

    let ann = kernel_basis(&constraints);
    let ann_prime = SublatticeCoords::new(&ann)?;
    let pulled: Vec<IntVec> = ann
        .row_vecs()
        .iter()
        .map(|x| aux.from_prime(x).ok_or_else(|| internal("Ann(e, e_tilde)' is larger than Ann(e, e_tilde)")))
        .collect::<Result<_>>()?;
    let ann_e_etilde = IntMatrix::from_rows(&pulled, dim);
    if ann.nrows() + 2 * s != dim + al.r() {
        return Err(internal("Ann(e, e_tilde) has unexpected rank"));
    }

    let vectors = solve_bridge_vectors(&al, &constraints)?;

    let e_part = IntMatrix::from_rows(&rows[..s], dim);
    let ann_e = SublatticeCoords::new(&kernel_basis(&e_part))?;
    let mut stack = ann.row_vecs();
    for wk in &vectors.w {
        stack.extend(wk.iter().skip(1).cloned());
    }
    if !square_in(&ann_e, &stack)? {
        return Err(internal("Ann(e)' is not the direct sum of Ann(e, e_tilde) and the w vectors"));
    }
    let et_part = IntMatrix::from_rows(&rows[s..], dim);
    let ann_et = SublatticeCoords::new(&kernel_basis(&et_part))?;
    let mut stack = ann.row_vecs();
    for uk in &vectors.u {
        stack.extend(uk.iter().skip(1).map(|x| vec_sub(x, &uk[0])));
    }
    if !square_in(&ann_et, &stack)? {
        return Err(internal("Ann(e_tilde)' is not the direct sum of Ann(e, e_tilde) and the u differences"));
    }

    let mut cells = vec![vec![Vec::new(); s]; s];
    let block_of: Vec<usize> =
        (0..s).map(|i| al.blocks.iter().position(|b| b.contains(&i)).expect("blocks cover")).collect();
    for (idx, v) in slice_points.iter().enumerate() {
        let a = unique_one(v, &al.e)?;
        let b = unique_one(v, &al.e_tilde)?;
        if block_of[a] != block_of[b] {
            return Err(internal("slice point pairs with summands of different blocks"));
        }
        cells[a][b].push(idx);
    }
    let slice_points_prime = slice_points.iter().map(|v| aux.to_prime(v)).collect();
    Ok(BridgeContext {
        dim,
        alignment: al,
        aux,
        constraints,
        ann_prime,
        ann_e_etilde,
        vectors,
        slice_points,
        slice_points_prime,
        cells,
    })
}

fn unique_one(v: &[BigInt], summands: &[IntVec]) -> Result<usize> {
    let hits: Vec<usize> = (0..summands.len()).filter(|&i| dot(v, &summands[i]).is_one()).collect();
    match hits.as_slice() {
        [i] => Ok(*i),
        _ => Err(internal("slice point does not pair to 1 with exactly one summand")),
    }
}

/// `g_{i,j}`, `g_i` and `g~_j` in coordinates of the dual of `N-bar'`.
#[derive(Clone, Debug)]
pub struct SlicePolynomials<F: Field> {
    pub g: BTreeMap<(usize, usize), LaurentPoly<F>>,
    pub g_e: Vec<LaurentPoly<F>>,
    pub g_etilde: Vec<LaurentPoly<F>>,
}

fn poly_over<F: Field>(ctx: &BridgeContext, coeffs: &CoefficientAssignment<F>, idx: &[usize]) -> Result<LaurentPoly<F>> {
    let f = &coeffs.field;
    let mut p = LaurentPoly::zero(f, ctx.dim);
    for &i in idx {
        let c = coeffs
            .value(&ctx.slice_points[i])
            .ok_or_else(|| Error::Input("coefficient assignment misses a slice point".into()))?;
        p.add_term(to_i64(&ctx.slice_points_prime[i])?, c.clone());
    }
    Ok(p)
}

/// Builds the slice polynomials and checks
/// `l(S_i) = ∐_j l(S_{i,j})` and `l(S~_j) = ∐_i l(S_{i,j})`.
pub fn slice_polynomials<F: Field>(ctx: &BridgeContext, coeffs: &CoefficientAssignment<F>) -> Result<SlicePolynomials<F>> {
    let s = ctx.s();
    let al = &ctx.alignment;
    let mut g = BTreeMap::new();
    for i in 0..s {
        for j in 0..s {
            if !ctx.cells[i][j].is_empty() {
                g.insert((i, j), poly_over(ctx, coeffs, &ctx.cells[i][j])?);
            }
        }
    }
    let mut g_e = Vec::with_capacity(s);
    let mut g_etilde = Vec::with_capacity(s);
    for i in 0..s {
        let row: Vec<usize> = (0..ctx.slice_points.len()).filter(|&v| dot(&ctx.slice_points[v], &al.e[i]).is_one()).collect();
        let col: Vec<usize> =
            (0..ctx.slice_points.len()).filter(|&v| dot(&ctx.slice_points[v], &al.e_tilde[i]).is_one()).collect();
        let mut from_cells_row: Vec<usize> = (0..s).flat_map(|j| ctx.cells[i][j].iter().copied()).collect();
        let mut from_cells_col: Vec<usize> = (0..s).flat_map(|a| ctx.cells[a][i].iter().copied()).collect();
        from_cells_row.sort();
        from_cells_col.sort();
        if row != from_cells_row || col != from_cells_col {
            return Err(internal("slice points do not split along the cells S_ij"));
        }
        g_e.push(poly_over(ctx, coeffs, &row)?);
        g_etilde.push(poly_over(ctx, coeffs, &col)?);
    }
    Ok(SlicePolynomials { g, g_e, g_etilde })
}

/// Counts of exact identity checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub row_identities: usize,
    pub column_identities: usize,
    pub row_partitions: usize,
    pub column_partitions: usize,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The diagonal term singled out to show `det A_k` is not identically zero.
#[derive(Clone, Debug)]
pub struct Witness {
    pub block: usize,
    pub points: Vec<IntVec>,
    pub exponent: Exponent,
    /// The coefficient of `exponent` in `det A_k`, as a polynomial in the
    /// `c_v`, contains `± prod c_v` over `points` and is therefore nonzero.
    pub generic_nonzero: bool,
    pub nonzero_for_values: bool,
}

#[derive(Clone, Debug)]
pub struct BridgeData<F: Field> {
    pub context: BridgeContext,
    pub coefficients: CoefficientAssignment<F>,
    pub slices: SlicePolynomials<F>,
    /// Entries of `A_k` in coordinates of the dual of `N-bar'`.
    pub matrices_prime: Vec<Vec<Vec<LaurentPoly<F>>>>,
    /// Entries of `A_k` in the torus coordinates `y` of `Ann(e, e_tilde)`.
    pub matrices: Vec<Vec<Vec<LaurentPoly<F>>>>,
    pub determinants: Vec<LaurentPoly<F>>,
    pub identities: IdentityReport,
    pub witnesses: Vec<Witness>,
}

fn neg(v: &[BigInt]) -> Result<Exponent> {
    Ok(to_i64(v)?.into_iter().map(|x| -x).collect())
}

/// Assembles `A_k` with entry `(a, b)` equal to `X^{-u_ka - w_kb} g_{ka,kb}`
/// and verifies both matrix identities exactly.
pub fn build_bridge<F: Field>(
    pair: &GorensteinConePair,
    e: &[IntVec],
    e_tilde: &[IntVec],
    coeffs: CoefficientAssignment<F>,
) -> Result<BridgeData<F>> {
    let ctx = build_context(pair, e, e_tilde)?;
    let slices = slice_polynomials(&ctx, &coeffs)?;
    let f = coeffs.field.clone();
    let dim = ctx.dim;
    let rank = ctx.rank();
    let mut identities = IdentityReport::default();
    let mut matrices_prime = Vec::new();
    let mut matrices = Vec::new();
    let mut determinants = Vec::new();
    let mut witnesses = Vec::new();

    for (k, block) in ctx.alignment.blocks.iter().enumerate() {
        let n = block.len();
        let u = &ctx.vectors.u[k];
        let w = &ctx.vectors.w[k];
        let zero = LaurentPoly::zero(&f, dim);
        let mut a_prime = vec![vec![zero.clone(); n]; n];
        for a in 0..n {
            for b in 0..n {
                if let Some(g) = slices.g.get(&(block[a], block[b])) {
                    let shift: Exponent = neg(&u[a])?.iter().zip(neg(&w[b])?).map(|(x, y)| x + y).collect();
                    a_prime[a][b] = g.shift(&shift);
                }
            }
        }
        for a in 0..n {
            let mut lhs = zero.clone();
            for b in 0..n {
                lhs = lhs.add(&a_prime[a][b].shift(&to_i64(&w[b])?));
            }
            let rhs = slices.g_e[block[a]].shift(&neg(&u[a])?);
            identities.row_identities += 1;
            if lhs != rhs {
                identities.failures.push(format!("row identity, block {}, row {}", k + 1, a + 1));
            }
            let split = (0..n).fold(zero.clone(), |acc, b| match slices.g.get(&(block[a], block[b])) {
                Some(g) => acc.add(g),
                None => acc,
            });
            identities.row_partitions += 1;
            if split != slices.g_e[block[a]] {
                identities.failures.push(format!("g_ki partition, block {}, index {}", k + 1, a + 1));
            }
        }
        for b in 0..n {
            let mut lhs = zero.clone();
            for a in 0..n {
                lhs = lhs.add(&a_prime[a][b].shift(&to_i64(&u[a])?));
            }
            let rhs = slices.g_etilde[block[b]].shift(&neg(&w[b])?);
            identities.column_identities += 1;
            if lhs != rhs {
                identities.failures.push(format!("column identity, block {}, column {}", k + 1, b + 1));
            }
            let split = (0..n).fold(zero.clone(), |acc, a| match slices.g.get(&(block[a], block[b])) {
                Some(g) => acc.add(g),
                None => acc,
            });
            identities.column_partitions += 1;
            if split != slices.g_etilde[block[b]] {
                identities.failures.push(format!("g~_kj partition, block {}, index {}", k + 1, b + 1));
            }
        }

        let mut a_y = vec![vec![LaurentPoly::zero(&f, rank); n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut p = LaurentPoly::zero(&f, rank);
                for (exp, c) in a_prime[a][b].terms() {
                    p.add_term(ctx.y_exponent(exp)?, c.clone());
                }
                a_y[a][b] = p;
            }
        }
        let det = det_cofactor(&a_y, &f, rank);
        if n <= 6 && det != det_leibniz(&a_y, &f, rank) {
            return Err(internal("cofactor and permutation determinants disagree"));
        }
        witnesses.push(witness(&ctx, pair, k, &a_y, &det)?);
        matrices_prime.push(a_prime);
        matrices.push(a_y);
        determinants.push(det);
    }
    if !identities.passed() {
        return Err(internal(format!("bridge identities failed: {}", identities.failures.join("; "))));
    }
    Ok(BridgeData {
        context: ctx,
        coefficients: coeffs,
        slices,
        matrices_prime,
        matrices,
        determinants,
        identities,
        witnesses,
    })
}

fn witness<F: Field>(
    ctx: &BridgeContext,
    pair: &GorensteinConePair,
    k: usize,
    a_y: &[Vec<LaurentPoly<F>>],
    det: &LaurentPoly<F>,
) -> Result<Witness> {
    let block = &ctx.alignment.blocks[k];
    let rank = ctx.rank();
    let mut points = Vec::with_capacity(block.len());
    let mut exponent = vec![0i64; rank];
    let mut generic = true;
    for (a, &i) in block.iter().enumerate() {
        let cell = &ctx.cells[i][i];
        // (delta_i; 0) for nef-partition cones, otherwise the first point
        let chosen = match pair.origin {
            crate::gorenstein_cone::ConeOrigin::NefPartition { s } => cell
                .iter()
                .copied()
                .find(|&v| ctx.slice_points[v][s..].iter().all(Zero::is_zero))
                .or_else(|| cell.first().copied()),
            crate::gorenstein_cone::ConeOrigin::Direct => cell.first().copied(),
        };
        let Some(v) = chosen else {
            generic = false;
            continue;
        };
        points.push(ctx.slice_points[v].clone());
        let u = &ctx.vectors.u[k][a];
        let w = &ctx.vectors.w[k][a];
        let x: IntVec = (0..ctx.dim).map(|j| &ctx.slice_points_prime[v][j] - &u[j] - &w[j]).collect();
        let y = ctx.y_exponent(&to_i64(&x)?)?;
        if a_y[a][a].coefficient(&y) == a_y[a][a].field().zero() {
            return Err(internal("diagonal witness term missing from its entry"));
        }
        for (e, t) in exponent.iter_mut().zip(y) {
            *e += t;
        }
    }
    let nonzero = generic && det.coefficient(&exponent) != det.field().zero();
    Ok(Witness { block: k, points, exponent, generic_nonzero: generic, nonzero_for_values: nonzero })
}

/// `det A_k` for every block; fails when one vanishes identically.
pub fn determinants<F: Field>(bridge: &BridgeData<F>) -> Result<&[LaurentPoly<F>]> {
    for (k, d) in bridge.determinants.iter().enumerate() {
        if d.is_zero() {
            return Err(Error::DegenerateCoefficients { block: k + 1 });
        }
    }
    Ok(&bridge.determinants)
}
