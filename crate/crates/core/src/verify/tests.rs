use super::*;
use crate::corpus;
use crate::double_mirror::{build_bridge, degree_one_points, enumerate_decompositions, CoefficientAssignment};
use crate::gorenstein_cone::{build_cone, product_projective, GorensteinConePair};

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn bridge_for(pair: &GorensteinConePair, i: usize, j: usize, coeffs: CoefficientAssignment<PrimeField>) -> BridgeData<PrimeField> {
    let decs = enumerate_decompositions(pair).unwrap();
    build_bridge(pair, &decs[i].summands, &decs[j].summands, coeffs).unwrap()
}

fn random_bridge(pair: &GorensteinConePair, i: usize, j: usize, p: u64, seed: u64) -> BridgeData<PrimeField> {
    let c = CoefficientAssignment::random(&field(p), degree_one_points(pair).unwrap(), seed);
    bridge_for(pair, i, j, c)
}

/// Equal coefficients on the points `x_1 y_j z_k` and `x_2 y_j z_k`, making
/// the first two equations of the first decomposition coincide.
fn duplicated_first_rows(pair: &GorensteinConePair, p: u64, seed: u64) -> CoefficientAssignment<PrimeField> {
    let pts = degree_one_points(pair).unwrap();
    let mut c = CoefficientAssignment::random(&field(p), pts.clone(), seed);
    for v in &pts {
        let amb = pair.lattice_bar_m.from_coords(v);
        if amb[1] == BigInt::from(1) {
            let mut twin = amb.clone();
            twin[0] = BigInt::from(1);
            twin[1] = BigInt::from(0);
            let val = *c.value(&pair.lattice_bar_m.to_coords(&twin).unwrap()).unwrap();
            c.set(v, val).unwrap();
        }
    }
    c
}

#[test]
fn nullspace_and_rank_agree() {
    let f = field(101);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let rows = rng.gen_range(1..6);
        let cols = rng.gen_range(1..6);
        let mut m: Vec<Vec<u64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..3)).collect()).collect();
        if rng.gen_bool(0.3) && rows > 1 {
            m[rows - 1] = m[0].clone();
        }
        let ker = nullspace_mod_p(&f, &m, cols);
        assert_eq!(ker.len() + rank_mod_p(&f, &m, cols), cols);
        for v in &ker {
            for r in &m {
                let s = r.iter().zip(v).fold(0, |a, (x, y)| f.add(&a, &f.mul(x, y)));
                assert_eq!(s, 0);
            }
        }
    }
}

#[test]
fn univariate_helpers() {
    let f = field(101);
    // (x - 2)(x - 3) = x^2 - 5x + 6
    let p = vec![6, f.neg(&5), 1];
    let mut roots = nonzero_roots(&f, &p);
    roots.sort();
    assert_eq!(roots, vec![2, 3]);
    // gcd with (x - 3)(x + 1) = x^2 - 2x - 3
    let q = vec![f.neg(&3), f.neg(&2), 1];
    let g = poly_gcd(&f, &p, &q);
    assert_eq!(g.len(), 2);
    assert_eq!(nonzero_roots(&f, &g), vec![3]);
    // a monomial has no roots on the torus
    assert!(nonzero_roots(&f, &[0, 0, 4]).is_empty());
}

#[test]
fn hypersurface_samples_are_roots() {
    let pair = build_cone(&corpus::square().unwrap()).unwrap();
    let b = random_bridge(&pair, 0, 0, 10007, 3);
    let v = Verifier::new(&b).unwrap();
    let drawn = v.sample_determinantal_points(30, 9);
    assert!(drawn.iter().all(|(_, y)| y.is_some()));
    for (_, y) in &drawn {
        let y = y.as_ref().unwrap();
        assert_eq!(b.determinants[0].eval(y), Some(0));
        // the single slice polynomial, up to a monomial, vanishes too
        assert_eq!(b.matrices[0][0][0].eval(y), Some(0));
        let fe = v.fiber(y, Side::E).unwrap();
        assert_eq!(fe.points.len(), 1);
        assert!(v.satisfies_equations(&fe.points[0], Side::E));
    }
}

#[test]
fn product_projective_evidence() {
    let pair = product_projective(3, 3).unwrap();
    let b = random_bridge(&pair, 0, 1, 10007, 0);
    let rep = birationality_evidence(&b, 100, 0).unwrap();
    assert_eq!(rep.samples_on_d, 100);
    for sp in &rep.samples {
        assert_eq!(b.determinants[0].eval(&sp.y), Some(0));
    }
    assert_eq!(rep.fiber_histogram_e.get("1"), Some(&100));
    assert_eq!(rep.fiber_histogram_etilde.get("1"), Some(&100));
    assert!(rep.birational_evidence);
    assert_eq!(rep.invariant_failures(), 0);
    assert_eq!(rep.fiber_points_checked, 200);
    assert_eq!(rep.delta_regular_pass_rate, 1.0);
    assert!(rep.warnings.is_empty(), "{:?}", rep.warnings);
}

#[test]
fn points_off_d_have_empty_fibers() {
    let pair = product_projective(3, 3).unwrap();
    let b = random_bridge(&pair, 0, 2, 10007, 1);
    let v = Verifier::new(&b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let y = loop {
        let y = v.random_point(&mut rng);
        if b.determinants[0].eval(&y) != Some(0) {
            break y;
        }
    };
    for side in [Side::E, Side::ETilde] {
        let fb = v.fiber(&y, side).unwrap();
        assert!(fb.points.is_empty() && !fb.non_generic);
        assert_eq!(fb.kernel_dims, vec![0]);
    }
    let mut off = y.clone();
    off[0] = 0;
    assert_eq!(v.fiber(&off, Side::E).unwrap_err(), Error::OffTorus);
}

#[test]
fn rank_one_matrices_are_non_generic() {
    let pair = product_projective(3, 3).unwrap();
    let pts = degree_one_points(&pair).unwrap();
    let ones = vec![1u64; pts.len()];
    let c = CoefficientAssignment::from_values(&field(10007), pts, ones).unwrap();
    let b = bridge_for(&pair, 0, 1, c);
    let v = Verifier::new(&b).unwrap();
    let y = vec![5u64; v.rank()];
    let fb = v.fiber(&y, Side::E).unwrap();
    assert!(fb.non_generic);
    assert_eq!(fb.kernel_dims, vec![2]);
    let rep = birationality_evidence(&b, 10, 0).unwrap();
    assert_eq!(rep.generic_samples, 0);
    assert!(!rep.birational_evidence);
    assert!(rep.fiber_histogram_e.contains_key("non_generic"));
}

#[test]
fn duplicated_equation_fails_delta_regularity() {
    let pair = product_projective(3, 3).unwrap();
    let b = bridge_for(&pair, 0, 1, duplicated_first_rows(&pair, 10007, 5));
    assert!(b.determinants[0].is_zero());
    let rep = birationality_evidence(&b, 40, 0).unwrap();
    assert!(rep.warnings.iter().any(|w| w.contains("vanishes identically")));
    let points: Vec<Vec<u64>> = rep.samples.iter().flat_map(|s| s.fiber_e.points.clone()).collect();
    assert!(!points.is_empty());
    let probe = delta_regularity_probe(&b, &points, Side::E).unwrap();
    assert_eq!(probe.passed, 0);
    assert_eq!(rep.delta_regularity_e.pass_rate, 0.0);
    assert_eq!(rep.invariant_failures(), 0);
}

#[test]
fn trivial_pair_samples_the_complete_intersection() {
    // r = s = 2: D is X itself, sampled through the two-variable method
    let pair = build_cone(&corpus::p3_split().unwrap()).unwrap();
    let b = random_bridge(&pair, 0, 0, 10007, 2);
    assert_eq!(b.context.r(), 2);
    let rep = birationality_evidence(&b, 20, 1).unwrap();
    assert!(rep.samples_on_d > 0);
    assert_eq!(rep.single_point_both_sides, rep.samples_on_d);
    assert_eq!(rep.invariant_failures(), 0);
    for sp in &rep.samples {
        assert_eq!(sp.fiber_e, sp.fiber_etilde);
    }
}

#[test]
fn reports_are_deterministic_and_side_symmetric() {
    let pair = product_projective(3, 3).unwrap();
    let a = birationality_evidence(&random_bridge(&pair, 0, 1, 10007, 7), 25, 3).unwrap();
    let again = birationality_evidence(&random_bridge(&pair, 0, 1, 10007, 7), 25, 3).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&again).unwrap());
    let swapped = birationality_evidence(&random_bridge(&pair, 1, 0, 10007, 7), 25, 3).unwrap();
    assert_eq!(a.samples_on_d, swapped.samples_on_d);
    assert_eq!(a.fiber_histogram_e, swapped.fiber_histogram_etilde);
    assert_eq!(a.fiber_histogram_etilde, swapped.fiber_histogram_e);
}

#[test]
fn two_independence_warning() {
    let pair = build_cone(&corpus::two_segment().unwrap()).unwrap();
    let b = random_bridge(&pair, 0, 0, 10007, 0);
    let v = Verifier::new(&b).unwrap();
    assert!(!v.two_independence_violations(Side::E).is_empty());
    let rep = birationality_evidence(&b, 5, 0).unwrap();
    assert!(rep.warnings.iter().any(|w| w.contains("2-independent")));

    let pp = product_projective(3, 3).unwrap();
    let b = random_bridge(&pp, 0, 1, 10007, 0);
    assert!(Verifier::new(&b).unwrap().two_independence_violations(Side::E).is_empty());
}

#[test]
fn small_primes_are_rejected() {
    let pair = build_cone(&corpus::square().unwrap()).unwrap();
    let b = random_bridge(&pair, 0, 0, 97, 0);
    assert!(matches!(birationality_evidence(&b, 1, 0), Err(Error::Input(_))));
}
