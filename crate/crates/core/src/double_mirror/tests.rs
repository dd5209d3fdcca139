use super::*;
use crate::corpus;
use crate::field::{PrimeField, Rationals};
use crate::gorenstein_cone::{build_cone, product_projective};
use crate::laurent::LaurentPoly;
use crate::lattice::{ivec, snf};
use crate::nef_partition::{dual_nef_partition, NefPartition};
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn nef_corpus() -> Vec<NefPartition> {
    vec![
        corpus::two_segment().unwrap(),
        corpus::square().unwrap(),
        corpus::p3_split().unwrap(),
        corpus::p4_three_parts().unwrap(),
    ]
}

fn i64s(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap()).collect()
}

/// Finest zero-sum partition by subset enumeration; `None` when the minimal
/// zero-sum subsets do not form a partition with `s - rank` blocks.
fn brute_force_blocks(p: &[Vec<i64>]) -> Option<Vec<Vec<usize>>> {
    let s = p.len();
    let dim = p[0].len();
    let zero_sum = |mask: usize| (0..dim).all(|c| (0..s).filter(|i| mask & (1 << i) != 0).map(|i| p[i][c]).sum::<i64>() == 0);
    let sums: Vec<usize> = (1..1usize << s).filter(|&m| zero_sum(m)).collect();
    let minimal: Vec<usize> = sums.iter().copied().filter(|&m| !sums.iter().any(|&o| o != m && o & m == o)).collect();
    let union = minimal.iter().fold(0, |a, m| a | m);
    let disjoint = minimal.iter().map(|m| m.count_ones()).sum::<u32>() == union.count_ones();
    let rows: Vec<IntVec> = p.iter().map(|v| ivec(v)).collect();
    let rank = crate::lattice::rank_of_rows(&rows, dim);
    if union != (1 << s) - 1 || !disjoint || minimal.len() != s - rank {
        return None;
    }
    let mut blocks: Vec<Vec<usize>> = minimal.iter().map(|&m| (0..s).filter(|i| m & (1 << i) != 0).collect()).collect();
    blocks.sort();
    Some(blocks)
}

#[test]
fn block_partition_examples() {
    let zeros = vec![ivec(&[0, 0]); 3];
    assert_eq!(block_partition(&zeros).unwrap(), vec![vec![0], vec![1], vec![2]]);
    let p = vec![ivec(&[1, 0]), ivec(&[-1, 0]), ivec(&[0, 1]), ivec(&[0, -1])];
    assert_eq!(block_partition(&p).unwrap(), vec![vec![0, 1], vec![2, 3]]);
    // relations not spanned by zero-sum blocks
    assert!(block_partition(&[ivec(&[1]), ivec(&[1]), ivec(&[-2])]).is_err());
    assert!(block_partition(&[ivec(&[1]), ivec(&[1])]).is_err());
}

#[test]
fn block_partition_matches_subset_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut agreed = 0;
    for _ in 0..300 {
        let dim = rng.gen_range(1..=4);
        let s = rng.gen_range(1..=7);
        // blocks of random zero-sum vectors
        let mut p: Vec<Vec<i64>> = Vec::new();
        while p.len() < s {
            let n = rng.gen_range(1..=(s - p.len()));
            let mut block: Vec<Vec<i64>> = (0..n - 1).map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let last: Vec<i64> = (0..dim).map(|c| -block.iter().map(|v| v[c]).sum::<i64>()).collect();
            if last.iter().any(|x| x.abs() > 3) {
                continue;
            }
            block.push(last);
            p.extend(block);
        }
        let rows: Vec<IntVec> = p.iter().map(|v| ivec(v)).collect();
        let got = block_partition(&rows).ok().map(|mut b| {
            b.sort();
            b
        });
        assert_eq!(got, brute_force_blocks(&p), "{p:?}");
        agreed += 1;
    }
    assert_eq!(agreed, 300);
}

/// Tuples `(p_i) in l(nabla_1) x ... x l(nabla_s)` with zero sum.
fn brute_force_tuples(np: &NefPartition) -> BTreeSet<Vec<Vec<i64>>> {
    let dual = dual_nef_partition(np).unwrap();
    let pts = dual.lattice_points().unwrap();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; pts.len()];
    loop {
        let chosen: Vec<Vec<i64>> = idx.iter().enumerate().map(|(i, &j)| i64s(&pts[i][j])).collect();
        if (0..np.dim()).all(|c| chosen.iter().map(|v| v[c]).sum::<i64>() == 0) {
            out.insert(chosen);
        }
        let Some(pos) = (0..idx.len()).find(|&i| idx[i] + 1 < pts[i].len()) else { break };
        idx[pos] += 1;
        for x in idx.iter_mut().take(pos) {
            *x = 0;
        }
    }
    out
}

#[test]
fn nef_decompositions_match_tuple_search() {
    for np in nef_corpus() {
        let pair = build_cone(&np).unwrap();
        let decs = enumerate_decompositions(&pair).unwrap();
        assert!(decs[0].trivial && decs[0].r == np.len());
        let got: BTreeSet<Vec<Vec<i64>>> = decs.iter().map(|d| d.p.iter().map(|v| i64s(v)).collect()).collect();
        assert_eq!(got.len(), decs.len());
        assert_eq!(got, brute_force_tuples(&np));
        for d in &decs {
            // canonical form: summand i is (delta_i; p_i)
            for (i, (sm, p)) in d.summands.iter().zip(&d.p).enumerate() {
                let mut expect: IntVec = (0..np.len()).map(|j| BigInt::from((i == j) as i64)).collect();
                expect.extend(p.iter().cloned());
                assert_eq!(*sm, expect);
            }
            assert_eq!(d.block_sizes.iter().sum::<usize>(), np.len());
        }
    }
    let two = build_cone(&corpus::two_segment().unwrap()).unwrap();
    assert_eq!(enumerate_decompositions(&two).unwrap().len(), 1);
}

#[test]
fn product_projective_decompositions() {
    let pair = product_projective(3, 3).unwrap();
    let decs = enumerate_decompositions(&pair).unwrap();
    assert_eq!(decs.len(), 3);
    for (k, d) in decs.iter().enumerate() {
        // decomposition k is the sum of the unit vectors of block k
        let expect: Vec<IntVec> = (3 * k..3 * k + 3).map(|i| pair.k_dual_generators[i].clone()).collect();
        assert_eq!(d.summands, expect);
    }
    assert!(decs[1].r == 1 && decs[1].block_sizes == vec![3]);
    let big = product_projective(5, 3).unwrap();
    let decs = enumerate_decompositions(&big).unwrap();
    assert_eq!(decs.len(), 3);
    assert_eq!(decs[1].r, 1);
    assert_eq!(decs[2].block_sizes, vec![5]);
}

#[test]
fn auxiliary_lattice_examples() {
    let trivial = build_auxiliary_lattice(&[ivec(&[1, 0, 0]), ivec(&[0, 1, 0])], 3).unwrap();
    assert_eq!(trivial.index, BigInt::one());
    let two = build_auxiliary_lattice(&[ivec(&[-2, 0])], 2).unwrap();
    assert_eq!(two.index, BigInt::from(2));
    assert_eq!(two.basis.row(0), &ivec(&[-2, 0])[..]);
    // index agrees with the elementary divisors of the prescribed rows
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let dim = rng.gen_range(2..=5);
        let m = rng.gen_range(1..dim);
        let rows: Vec<IntVec> = (0..m).map(|_| (0..dim).map(|_| BigInt::from(rng.gen_range(-4..=4))).collect()).collect();
        let Ok(aux) = build_auxiliary_lattice(&rows, dim) else { continue };
        let (s, _, _) = snf(&IntMatrix::from_rows(&rows, dim));
        let prod = crate::lattice::elementary_divisors(&s).iter().fold(BigInt::one(), |a, d| a * d);
        assert_eq!(aux.index, prod);
        assert_eq!(aux.basis.determinant().unwrap().abs(), prod);
        // the prescribed rows extend to a basis of N': coordinates of each
        // basis row are unit vectors
        for i in 0..dim {
            let c = aux.dual_coords(aux.basis.row(i)).unwrap();
            assert!(c.iter().enumerate().all(|(j, x)| *x == BigInt::from((i == j) as i64)));
        }
    }
}

fn check_pairing_tables(ctx: &BridgeContext) {
    let s = ctx.s();
    let c = &ctx.constraints;
    for (k, block) in ctx.alignment.blocks.iter().enumerate() {
        let k1 = block[0];
        for (pos, &ki) in block.iter().enumerate() {
            let w = c.mul_vec(&ctx.vectors.w[k][pos]);
            let u = c.mul_vec(&ctx.vectors.u[k][pos]);
            for j in 0..s {
                assert!(w[j].is_zero());
                let wt = if pos == 0 { 0 } else if j == ki { 1 } else if j == k1 { -1 } else { 0 };
                assert_eq!(w[s + j], BigInt::from(wt));
                assert_eq!(u[j], BigInt::from((j == ki) as i64));
                assert_eq!(u[s + j], BigInt::from((j == k1) as i64));
            }
            // the explicit unit-vector solutions reduce to the same representative
            let ann = kernel_basis(c);
            let slot_e = ki;
            let slot_p = |i: usize| {
                let mut n = s;
                for b in &ctx.alignment.blocks {
                    for &x in b.iter().skip(1) {
                        if x == i {
                            return n;
                        }
                        n += 1;
                    }
                }
                unreachable!()
            };
            let mut explicit_u = vec![BigInt::zero(); ctx.dim];
            explicit_u[slot_e] = BigInt::one();
            if pos > 0 {
                explicit_u[slot_p(ki)] = -BigInt::one();
                let mut explicit_w = vec![BigInt::zero(); ctx.dim];
                explicit_w[slot_p(ki)] = BigInt::one();
                assert_eq!(crate::lattice::reduce_mod_lattice(&explicit_w, &ann), ctx.vectors.w[k][pos]);
            }
            assert_eq!(crate::lattice::reduce_mod_lattice(&explicit_u, &ann), ctx.vectors.u[k][pos]);
        }
    }
}

fn all_pairs(pair: &GorensteinConePair) -> Vec<(Vec<IntVec>, Vec<IntVec>)> {
    let decs = enumerate_decompositions(pair).unwrap();
    let mut out = Vec::new();
    for a in &decs {
        for b in &decs {
            out.push((a.summands.clone(), b.summands.clone()));
        }
    }
    out
}

#[test]
fn bridge_vectors_satisfy_pairing_tables() {
    let mut cones: Vec<GorensteinConePair> = nef_corpus().iter().map(|np| build_cone(np).unwrap()).collect();
    cones.push(product_projective(2, 2).unwrap());
    cones.push(product_projective(3, 3).unwrap());
    for pair in &cones {
        for (e, et) in all_pairs(pair) {
            let ctx = build_context(pair, &e, &et).unwrap();
            assert_eq!(ctx.rank() + 2 * ctx.s(), pair.dim() + ctx.r());
            check_pairing_tables(&ctx);
        }
    }
}

fn rational_bridge(pair: &GorensteinConePair, e: &[IntVec], et: &[IntVec], seed: u64) -> BridgeData<Rationals> {
    let coeffs = CoefficientAssignment::random(&Rationals, degree_one_points(pair).unwrap(), seed);
    build_bridge(pair, e, et, coeffs).unwrap()
}

#[test]
fn slice_polynomial_supports() {
    let sq = build_cone(&corpus::square().unwrap()).unwrap();
    let dec = enumerate_decompositions(&sq).unwrap();
    let b = rational_bridge(&sq, &dec[0].summands, &dec[0].summands, 1);
    assert_eq!(b.slices.g.len(), 1);
    assert_eq!(b.slices.g[&(0, 0)].len(), degree_one_points(&sq).unwrap().len());
    assert_eq!(b.matrices.len(), 1);
    assert_eq!(b.matrices[0].len(), 1);

    let pp = product_projective(3, 3).unwrap();
    let decs = enumerate_decompositions(&pp).unwrap();
    let ctx = build_context(&pp, &decs[0].summands, &decs[1].summands).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(ctx.cells[i][j].len(), 3);
        }
    }
    // S_{i,j} = {u_i + u_{n+j} + u_{2n+k}}
    let big = product_projective(5, 3).unwrap();
    let decs = enumerate_decompositions(&big).unwrap();
    let ctx = build_context(&big, &decs[0].summands, &decs[1].summands).unwrap();
    assert_eq!(ctx.alignment.sigma, (0..5).collect::<Vec<_>>());
    for i in 0..5 {
        for j in 0..5 {
            let got: BTreeSet<Vec<i64>> = ctx.cells[i][j]
                .iter()
                .map(|&v| i64s(&big.lattice_bar_m.from_coords(&ctx.slice_points[v])))
                .collect();
            let expect: BTreeSet<Vec<i64>> = (0..5)
                .map(|k| (0..15).map(|c| (c == i || c == 5 + j || c == 10 + k) as i64).collect())
                .collect();
            assert_eq!(got, expect);
        }
    }
}

#[test]
fn identities_hold_on_corpus() {
    let mut cones: Vec<GorensteinConePair> = nef_corpus().iter().map(|np| build_cone(np).unwrap()).collect();
    cones.push(product_projective(2, 2).unwrap());
    cones.push(product_projective(3, 3).unwrap());
    for pair in &cones {
        for (n, (e, et)) in all_pairs(pair).into_iter().enumerate() {
            let b = rational_bridge(pair, &e, &et, n as u64);
            assert!(b.identities.passed());
            let s = b.context.s();
            assert_eq!(b.identities.row_identities, s);
            assert_eq!(b.identities.column_identities, s);
            for w in &b.witnesses {
                assert!(w.generic_nonzero && w.nonzero_for_values);
            }
            determinants(&b).unwrap();
            // every entry exponent lies in Ann(e, e_tilde)
            for m in &b.matrices_prime {
                for row in m {
                    for entry in row {
                        for exp in entry.terms().keys() {
                            let big: IntVec = exp.iter().map(|&x| BigInt::from(x)).collect();
                            assert!(b.context.constraints.mul_vec(&big).iter().all(Zero::is_zero));
                        }
                    }
                }
            }
        }
    }
}

/// Number of lattice points of the Newton polytope of `p`.
fn newton_points<F: crate::field::Field>(p: &LaurentPoly<F>) -> (usize, usize) {
    let pts: Vec<IntVec> = p.terms().keys().map(|e| e.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let poly = crate::polytope::Polytope::from_points(p.nvars(), &pts).unwrap();
    (poly.vertices().len(), poly.lattice_points().unwrap().len())
}

#[test]
fn product_projective_determinants_are_forms() {
    // a generic degree-n form in n homogeneous variables has the dilated
    // simplex as Newton polytope
    for (n, vertices, points) in [(3usize, 3usize, 10usize), (5, 5, 126)] {
        let pair = product_projective(n, 3).unwrap();
        let decs = enumerate_decompositions(&pair).unwrap();
        let f = PrimeField::new(10007).unwrap();
        let coeffs = CoefficientAssignment::random(&f, degree_one_points(&pair).unwrap(), 11);
        let b = build_bridge(&pair, &decs[0].summands, &decs[1].summands, coeffs).unwrap();
        assert_eq!(b.matrices.len(), 1);
        assert_eq!(b.matrices[0].len(), n);
        assert_eq!(b.context.rank(), n - 1);
        let det = &determinants(&b).unwrap()[0];
        assert_eq!(newton_points(det), (vertices, points));
        assert_eq!(det.len(), points);
    }
}

#[test]
fn determinant_changes_by_a_monomial_under_other_choices() {
    let pair = product_projective(3, 3).unwrap();
    let decs = enumerate_decompositions(&pair).unwrap();
    let b = rational_bridge(&pair, &decs[0].summands, &decs[2].summands, 5);
    let ctx = &b.context;
    let ann = ctx.ann_prime.basis().row_vecs();
    let n = 3;
    let shift_by = |k: usize| -> Vec<i64> {
        let mut v = vec![0i64; ctx.dim];
        for (t, a) in ann.iter().enumerate() {
            for (x, y) in v.iter_mut().zip(a) {
                *x += (k as i64 + t as i64 + 1) * y.to_i64().unwrap();
            }
        }
        v
    };
    let block = &ctx.alignment.blocks[0];
    let mut alt = vec![vec![LaurentPoly::zero(&Rationals, ctx.rank()); n]; n];
    for a in 0..n {
        for c in 0..n {
            let g = &b.slices.g[&(block[a], block[c])];
            let u: Vec<i64> = ctx.vectors.u[0][a].iter().zip(shift_by(a)).map(|(x, y)| x.to_i64().unwrap() + y).collect();
            let w: Vec<i64> = if c == 0 {
                vec![0; ctx.dim]
            } else {
                ctx.vectors.w[0][c].iter().zip(shift_by(c + 3)).map(|(x, y)| x.to_i64().unwrap() + y).collect()
            };
            let shift: Vec<i64> = u.iter().zip(&w).map(|(x, y)| -x - y).collect();
            let mut p = LaurentPoly::zero(&Rationals, ctx.rank());
            for (e, cf) in g.shift(&shift).terms() {
                p.add_term(ctx.y_exponent(e).unwrap(), cf.clone());
            }
            alt[a][c] = p;
        }
    }
    let other = crate::laurent::det_cofactor(&alt, &Rationals, ctx.rank());
    assert!(other.monomial_multiple_of(&b.determinants[0]).is_some());
}

/// Coefficients with `c_{2jk} = c_{1jk}` on product-projective(3,3).
pub(crate) fn duplicated_rows(pair: &GorensteinConePair, seed: u64) -> CoefficientAssignment<PrimeField> {
    let f = PrimeField::new(10007).unwrap();
    let pts = degree_one_points(pair).unwrap();
    let mut c = CoefficientAssignment::random(&f, pts.clone(), seed);
    for v in &pts {
        let amb = pair.lattice_bar_m.from_coords(v);
        if amb[1].is_one() {
            let mut twin = amb.clone();
            twin[1] = BigInt::zero();
            twin[0] = BigInt::one();
            let src = pair.lattice_bar_m.to_coords(&twin).unwrap();
            let val = *c.value(&src).unwrap();
            c.set(v, val).unwrap();
        }
    }
    c
}

#[test]
fn duplicated_equations_make_the_determinant_vanish() {
    let pair = product_projective(3, 3).unwrap();
    let decs = enumerate_decompositions(&pair).unwrap();
    let b = build_bridge(&pair, &decs[0].summands, &decs[1].summands, duplicated_rows(&pair, 2)).unwrap();
    assert_eq!(determinants(&b).unwrap_err(), Error::DegenerateCoefficients { block: 1 });
    // the witness coefficient is still a nonzero polynomial in the c_v
    assert!(b.witnesses[0].generic_nonzero);
    assert!(!b.witnesses[0].nonzero_for_values);
}

#[test]
fn misaligned_input_is_rejected() {
    let pair = product_projective(2, 2).unwrap();
    let decs = enumerate_decompositions(&pair).unwrap();
    let mut bad = decs[0].summands.clone();
    bad[0] = decs[1].summands[0].clone();
    assert!(matches!(build_context(&pair, &bad, &decs[1].summands), Err(Error::InvalidDecomposition(_))));
}
